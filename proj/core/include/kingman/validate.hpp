#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kingman {

struct ValidationGrid {
  std::string name = "default";
  std::vector<double> integer_thetas{1.0, 2.0};
  std::vector<double> noninteger_thetas{0.5, 1.7};
  std::vector<double> ts{0.2, 0.5, 1.0, 2.0};
  long n_max = 50;
  std::vector<double> normalization_thetas{0.5, 1.0, 2.7};
  std::vector<double> normalization_ts{0.2, 1.0, 5.0};
  std::vector<double> ode_thetas{0.5, 1.0, 2.0};
  std::vector<double> ode_ts{0.5, 1.0};
  long ode_n_max = 30;
  std::vector<long> ode_mass_sizes{100, 800};
  std::vector<std::pair<double, double>> mc_cells{{1.0, 1.0}, {1.0, 0.5}, {2.0, 1.0}, {0.5, 1.0}};
  long mc_reps = 1'000'000;
  std::vector<double> mc_mean_ts{0.1, 0.05, 0.02};
  long mc_mean_reps = 200'000;
  std::vector<double> lclt_ts{0.2, 0.1, 0.05, 0.02};
  std::vector<double> steep_ts{0.1, 0.05};
  std::uint64_t seed = 20261015;

  static ValidationGrid small();
  // "default" or "small"; DomainError otherwise.
  static ValidationGrid by_name(const std::string& name);
};

struct ValidationTolerances {
  double pmf_tol = 1e-12;
  double triangle = 1e-8;
  double normalization = 1e-8;
  double normalization_tail = 1e-10;
  double ode = 1e-7;
  double ode_start = 1e-9;
  double ode_mass = 1e-9;
  double jacobi = 1e-12;
  double product_sum = 1e-12;
  double steep_profile = 1e-12;
  double gaussian = 1e-10;
  double lclt = 0.2;
  double lattice_mass = 0.05;
  double mc_sigmas = 4.0;
  double mc_coverage = 0.99;
  double mc_mean = 0.05;
};

struct ValidationOptions {
  double circle_perturbation = 0.0;  // added to every circle value, for fault-injection checks
};

struct CellValues {
  long n = 0;
  double theta = 0.0;
  double t = 0.0;
  std::map<std::string, double> values;  // method name -> value

  bool operator==(const CellValues&) const = default;
};

// margin >= 0 exactly when the invariant holds; it is threshold - observed
// for tolerance checks.
struct InvariantResult {
  std::string name;
  double margin = 0.0;
  bool pass = false;
  std::string detail;

  bool operator==(const InvariantResult&) const = default;
};

struct WorstCell {
  std::string invariant;
  long n = 0;
  double theta = 0.0;
  double t = 0.0;
  double deviation = 0.0;

  bool operator==(const WorstCell&) const = default;
};

struct ValidationReport {
  int schema_version = 1;
  std::string grid_name;
  std::vector<CellValues> grid;
  std::vector<InvariantResult> invariants;
  WorstCell worst_cell;

  bool all_pass() const;
  const InvariantResult* find(const std::string& name) const;
  bool operator==(const ValidationReport&) const = default;
};

// Every invariant name validate() reports, in report order.
std::vector<std::string> invariant_names();

ValidationReport validate(const ValidationGrid& grid, const ValidationTolerances& tol = {},
                          const ValidationOptions& opts = {});

std::string report_to_json(const ValidationReport& r);
ValidationReport report_from_json(const std::string& text);

}  // namespace kingman
