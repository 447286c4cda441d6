#pragma once

#include <exception>
#include <string>
#include <vector>

#include "kingman/dist_api.hpp"

namespace kingman {

inline constexpr int kSchemaVersion = 1;

// One output row: n,theta,t,value,err_est,method
struct OutputRecord {
  long n = 0;
  double theta = 0.0;
  double t = 0.0;
  double value = 0.0;
  double err_est = 0.0;
  std::string method;

  bool operator==(const OutputRecord&) const = default;
};

OutputRecord to_record(const PmfResult& r);

// Shortest decimal that parses back to the same double ("nan", "inf", "-inf" for non-finite).
std::string format_double(double x);
double parse_double(const std::string& s);

// Header line, one line per record, then "# <comment>" lines. Unix newlines.
std::string records_to_csv(const std::vector<OutputRecord>& rows, const std::vector<std::string>& comments = {});
// Skips '#' lines and the header.
std::vector<OutputRecord> records_from_csv(const std::string& text);

std::string records_to_json(const std::vector<OutputRecord>& rows);
std::vector<OutputRecord> records_from_json(const std::string& text);

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2 };
// Logic errors (DomainError, bad arguments) map to usage; everything else is a numerical failure.
int exit_code_for(const std::exception& e);

}  // namespace kingman
