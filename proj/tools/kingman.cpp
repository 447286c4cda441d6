// kingman: block-count distribution of the coalescent with mutation.
//
//   kingman pmf --n 5 --theta 1 --t 1
//   kingman table --theta 1 --t 1 --nmax 50 [--out file.csv]
//   kingman lclt --theta 1 --t 0.02 --vmin -2 --vmax 2 --steps 9
//   kingman simulate --theta 1 --t 1 --reps 100000 --seed 7
//   kingman validate [--grid small] [--format json]
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure or failed validation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kingman/asymptotics.hpp"
#include "kingman/dist_api.hpp"
#include "kingman/oracle.hpp"
#include "kingman/records.hpp"
#include "kingman/validate.hpp"

namespace {

using namespace kingman;
using nlohmann::json;

struct Common {
  double theta = 1.0;
  double t = 1.0;
  double tol = 1e-12;
  std::string format = "csv";
  std::string out;
};

PmfOptions pmf_options() {
  PmfOptions opts;
  if (const char* cap = std::getenv("COALESCENT_PRECISION_CAP")) {
    try {
      std::size_t used = 0;
      const long bits = std::stol(cap, &used);
      if (used != std::string(cap).size() || bits < 64) throw std::invalid_argument("");
      opts.precision_cap = bits;
    } catch (const std::logic_error&) {
      throw DomainError(std::string("COALESCENT_PRECISION_CAP must be an integer >= 64, got '") + cap + "'");
    }
  }
  return opts;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  f << text;
}

json num(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }

// Plain columns for the lclt and simulate commands.
std::string render_columns(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                           const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    json doc{{"schema_version", kSchemaVersion}, {"columns", header}, {"rows", json::array()}};
    for (const auto& r : rows) doc["rows"].push_back(r);
    os << doc.dump(2) << "\n";
    return os.str();
  }
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

int cmd_pmf(long n, const std::string& method, const Common& c) {
  const PmfResult r = pmf(n, ModelParams(c.theta, c.t), {parse_method(method), ""}, c.tol, pmf_options());
  if (!r.reason.empty()) std::cerr << "# " << r.reason << "\n";
  const std::vector<OutputRecord> rows{to_record(r)};
  emit(c.format == "json" ? records_to_json(rows) : records_to_csv(rows), c.out);
  return kExitOk;
}

int cmd_table(long n_max, const Common& c) {
  const PmfTable table = pmf_table(ModelParams(c.theta, c.t), n_max, c.tol, pmf_options());
  std::vector<OutputRecord> rows;
  bool failed = false;
  for (const auto& r : table.rows) {
    rows.push_back(to_record(r));
    if (!r.ok) {
      failed = true;
      std::cerr << "kingman: n=" << r.n << " failed: " << r.error << "\n";
    }
  }
  const std::string defect = format_double(table.normalization_defect);
  if (c.format == "json") {
    json doc = json::parse(records_to_json(rows));
    doc["normalization_defect"] = num(table.normalization_defect);
    emit(doc.dump(2) + "\n", c.out);
  } else {
    emit(records_to_csv(rows, {"normalization_defect=" + defect}), c.out);
  }
  return failed ? kExitNumerical : kExitOk;
}

int cmd_lclt(double vmin, double vmax, long steps, const Common& c) {
  if (steps < 1) throw DomainError("--steps must be >= 1");
  if (!(vmax >= vmin)) throw DomainError("--vmax must be >= --vmin");
  const ModelParams p(c.theta, c.t);
  const PmfOptions opts = pmf_options();
  std::vector<std::vector<std::string>> rows;
  for (long i = 0; i < steps; ++i) {
    const double v = steps == 1 ? vmin : vmin + (vmax - vmin) * static_cast<double>(i) / static_cast<double>(steps - 1);
    const long n = n_of_v(v, c.t);
    const double d = pmf(n, p, {}, c.tol, opts).value;
    const double dens = lclt_density(v, c.t);
    // the lattice columns compare against the density at the v of the chosen n
    const double v_lat = v_of_n(n, c.t);
    const double dens_lat = lclt_density(v_lat, c.t);
    rows.push_back({format_double(v), std::to_string(n), format_double(d), format_double(dens),
                    format_double(d / dens), format_double(v_lat), format_double(dens_lat),
                    format_double(d / dens_lat)});
  }
  emit(render_columns({"v", "n", "pmf", "lclt", "ratio", "v_lattice", "lclt_lattice", "ratio_lattice"}, rows,
                      c.format),
       c.out);
  return kExitOk;
}

int cmd_simulate(long reps, std::uint64_t seed, long n_min, long n_max, const Common& c) {
  if (reps < 1) throw DomainError("--reps must be >= 1");
  const McHistogram h = mc_histogram(ModelParams(c.theta, c.t), reps, seed);
  const long hi = n_max >= 0 ? n_max : static_cast<long>(h.counts.size()) - 1;
  std::vector<std::vector<std::string>> rows;
  for (long n = std::max(0L, n_min); n <= hi; ++n) {
    const McEstimate e = mc_estimate(h, n);
    rows.push_back({std::to_string(n), format_double(e.p_hat), format_double(e.std_err)});
  }
  emit(render_columns({"n", "p_hat", "std_err"}, rows, c.format), c.out);
  return kExitOk;
}

int cmd_validate(const std::string& grid, const Common& c) {
  const ValidationReport r = validate(ValidationGrid::by_name(grid));
  if (c.format == "json") {
    emit(report_to_json(r), c.out);
  } else {
    std::ostringstream os;
    for (const auto& i : r.invariants) {
      os << (i.pass ? "PASS " : "FAIL ") << i.name << " margin=" << format_double(i.margin) << "  " << i.detail
         << "\n";
    }
    os << "worst_cell " << r.worst_cell.invariant << " n=" << r.worst_cell.n << " theta=" << format_double(r.worst_cell.theta)
       << " t=" << format_double(r.worst_cell.t) << " deviation=" << format_double(r.worst_cell.deviation) << "\n";
    emit(os.str(), c.out);
  }
  return r.all_pass() ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-count distribution of the coalescent with mutation"};
  app.require_subcommand(1);
  Common c;
  const auto add_common = [&](CLI::App* sub, bool model) {
    if (model) {
      sub->add_option("--theta", c.theta, "mutation rate")->required()->check(CLI::PositiveNumber);
      sub->add_option("--t", c.t, "time")->required()->check(CLI::PositiveNumber);
      sub->add_option("--tol", c.tol, "absolute tolerance")->check(CLI::PositiveNumber);
    }
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json", "text"}));
    sub->add_option("--out", c.out, "write output to this file");
  };

  long n = 0;
  std::string method = "auto";
  auto* pmf_cmd = app.add_subcommand("pmf", "one probability P(D_t = n)");
  pmf_cmd->add_option("--n", n, "block count")->required()->check(CLI::NonNegativeNumber);
  pmf_cmd->add_option("--method", method, "series|line|circle|steep|lclt|auto")
      ->check(CLI::IsMember({"series", "line", "circle", "steep", "lclt", "auto"}));
  add_common(pmf_cmd, true);

  long n_max = 0;
  auto* table_cmd = app.add_subcommand("table", "pmf for n = 0..nmax");
  table_cmd->add_option("--nmax", n_max, "largest n")->required()->check(CLI::NonNegativeNumber);
  add_common(table_cmd, true);

  double vmin = -2.0;
  double vmax = 2.0;
  long steps = 9;
  auto* lclt_cmd = app.add_subcommand("lclt", "pmf against the local limit density on a v-grid");
  lclt_cmd->add_option("--vmin", vmin, "smallest v");
  lclt_cmd->add_option("--vmax", vmax, "largest v");
  lclt_cmd->add_option("--steps", steps, "number of grid points")->check(CLI::PositiveNumber);
  add_common(lclt_cmd, true);

  long reps = 100000;
  std::uint64_t seed = 1;
  long n_min = 0;
  long sim_n_max = -1;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo frequencies");
  sim_cmd->add_option("--reps", reps, "replicates")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", seed, "RNG seed")->required();
  sim_cmd->add_option("--nmin", n_min, "first n to report");
  sim_cmd->add_option("--nmax", sim_n_max, "last n to report (default: largest observed)");
  add_common(sim_cmd, true);

  std::string grid = "default";
  auto* val_cmd = app.add_subcommand("validate", "run every invariant suite");
  val_cmd->add_option("--grid", grid, "default or small")->check(CLI::IsMember({"default", "small"}));
  add_common(val_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*pmf_cmd) return cmd_pmf(n, method, c);
    if (*table_cmd) return cmd_table(n_max, c);
    if (*lclt_cmd) return cmd_lclt(vmin, vmax, steps, c);
    if (*sim_cmd) return cmd_simulate(reps, seed, n_min, sim_n_max, c);
    if (*val_cmd) return cmd_validate(grid, c);
  } catch (const std::exception& e) {
    std::cerr << "kingman: " << e.what() << "\n";
    if (const auto* mf = dynamic_cast<const MethodFailure*>(&e)) {
      for (const auto& step : mf->trail()) std::cerr << "  tried " << step << "\n";
    }
    return exit_code_for(e);
  }
  return kExitUsage;
}
