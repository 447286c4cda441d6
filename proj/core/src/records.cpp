#include "kingman/records.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace kingman {

using nlohmann::json;

OutputRecord to_record(const PmfResult& r) {
  return {r.n, r.theta, r.t, r.value, r.err_est, method_name(r.method)};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return x;
}

std::string records_to_csv(const std::vector<OutputRecord>& rows, const std::vector<std::string>& comments) {
  std::string out = "n,theta,t,value,err_est,method\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + format_double(r.theta) + ',' + format_double(r.t) + ',' +
           format_double(r.value) + ',' + format_double(r.err_est) + ',' + r.method + '\n';
  }
  for (const auto& c : comments) out += "# " + c + '\n';
  return out;
}

std::vector<OutputRecord> records_from_csv(const std::string& text) {
  std::vector<OutputRecord> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw std::invalid_argument("CSV row needs 6 fields: '" + line + "'");
    rows.push_back({std::stol(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]),
                    parse_double(f[4]), f[5]});
  }
  return rows;
}

namespace {

// JSON has no non-finite numbers; those travel as strings.
json number(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }
double number(const json& j) { return j.is_string() ? parse_double(j.get<std::string>()) : j.get<double>(); }

}  // namespace

std::string records_to_json(const std::vector<OutputRecord>& rows) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["records"] = json::array();
  for (const auto& r : rows) {
    doc["records"].push_back({{"n", r.n},
                              {"theta", number(r.theta)},
                              {"t", number(r.t)},
                              {"value", number(r.value)},
                              {"err_est", number(r.err_est)},
                              {"method", r.method}});
  }
  return doc.dump(2) + "\n";
}

std::vector<OutputRecord> records_from_json(const std::string& text) {
  const json doc = json::parse(text);
  std::vector<OutputRecord> rows;
  for (const auto& j : doc.at("records")) {
    rows.push_back({j.at("n").get<long>(), number(j.at("theta")), number(j.at("t")), number(j.at("value")),
                    number(j.at("err_est")), j.at("method").get<std::string>()});
  }
  return rows;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const std::logic_error*>(&e) != nullptr) return kExitUsage;
  return kExitNumerical;
}

}  // namespace kingman
