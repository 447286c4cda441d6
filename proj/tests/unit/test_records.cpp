#include <cmath>
#include <limits>

#include "doctest.h"
#include "kingman/dist_api.hpp"
#include "kingman/errors.hpp"
#include "kingman/records.hpp"

using namespace kingman;

TEST_CASE("format_double is shortest round-trip") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 5e-324}) CHECK(parse_double(format_double(x)) == x);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(std::isinf(parse_double("inf")));
  CHECK_THROWS(parse_double("1.0x"));
}

TEST_CASE("csv round trip") {
  std::vector<OutputRecord> rows;
  for (const auto& r : pmf_table(ModelParams(1.0, 0.7), 12).rows) rows.push_back(to_record(r));
  const std::string csv = records_to_csv(rows, {"normalization_defect=1e-9"});
  CHECK(csv.rfind("n,theta,t,value,err_est,method\n", 0) == 0);
  CHECK(csv.find("\n# normalization_defect=1e-9\n") != std::string::npos);
  CHECK(records_from_csv(csv) == rows);
  CHECK(records_to_csv(records_from_csv(csv), {"normalization_defect=1e-9"}) == csv);
  CHECK_THROWS(records_from_csv("a,b\n1,2\n"));
}

TEST_CASE("json round trip") {
  std::vector<OutputRecord> rows{{0, 1.0, 1.0, 0.25, 1e-17, "series"},
                                 {1, 0.5, 2.0, std::numeric_limits<double>::quiet_NaN(), 0.0, "line"}};
  const auto back = records_from_json(records_to_json(rows));
  REQUIRE(back.size() == 2);
  CHECK(back[0] == rows[0]);
  CHECK(std::isnan(back[1].value));
  CHECK(records_to_json(back) == records_to_json(rows));
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(DomainError("x")) == kExitUsage);
  CHECK(exit_code_for(IntegerThetaRequired("x")) == kExitUsage);
  CHECK(exit_code_for(PrecisionExhausted("x", 20000)) == kExitNumerical);
  CHECK(exit_code_for(NonConvergence("x", {}, 1.0)) == kExitNumerical);
  CHECK(exit_code_for(std::runtime_error("x")) == kExitNumerical);
}
