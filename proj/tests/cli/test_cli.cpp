#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "kingman/records.hpp"
#include "kingman/series.hpp"

using namespace kingman;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(KINGMAN_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::vector<std::string>> parse_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("pmf command") {
  const Run r = run("pmf --n 5 --theta 1 --t 1");
  CHECK(r.code == 0);
  const auto rec = records_from_csv(r.out);
  REQUIRE(rec.size() == 1);
  CHECK(rec[0].method == "series");
  CHECK(std::abs(rec[0].value - pmf_series(5, ModelParams(1.0, 1.0)).value) < 1e-10);

  const auto absorbed = records_from_csv(run("pmf --n 0 --theta 1 --t 200").out);
  CHECK(std::abs(absorbed.at(0).value - 1.0) < 1e-12);

  const Run circ = run("pmf --n 200 --theta 1 --t 0.01 --method circle --format json");
  CHECK(circ.code == 0);
  const auto c = records_from_json(circ.out);
  CHECK(c.at(0).value > 0.0);
  CHECK(c.at(0).err_est > 0.0);
  CHECK(c.at(0).method == "circle");
}

TEST_CASE("exit codes") {
  CHECK(run("pmf --n -1 --theta 1 --t 1").code == 1);
  CHECK(run("pmf --n 3 --theta 1").code == 1);
  CHECK(run("pmf --n 3 --theta 1 --t 1 --method simpson").code == 1);
  CHECK(run("nonsense").code == 1);
  CHECK(run("pmf --n 3 --theta 1.5 --t 1 --method circle").code == 1);
  CHECK(run("--help").code == 0);
}

TEST_CASE("precision cap from the environment") {
  const std::string cli = KINGMAN_CLI;
  const auto code = [&](const std::string& env) {
    const int s = std::system((env + " " + cli + " pmf --n 40 --theta 2 --t 0.1 --method series >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(code("COALESCENT_PRECISION_CAP=16384") == 0);
  CHECK(code("COALESCENT_PRECISION_CAP=100") == 2);
  CHECK(code("COALESCENT_PRECISION_CAP=lots") == 1);
}

TEST_CASE("table command") {
  const Run r = run("table --theta 1 --t 1 --nmax 50");
  CHECK(r.code == 0);
  const auto rec = records_from_csv(r.out);
  CHECK(rec.size() == 51);
  const auto pos = r.out.find("# normalization_defect=");
  REQUIRE(pos != std::string::npos);
  CHECK(parse_double(r.out.substr(pos + 23, r.out.find('\n', pos) - pos - 23)) < 1e-8);
  CHECK(run("table --theta 1 --t 1 --nmax 50").out == r.out);
  CHECK(records_to_csv(rec, {r.out.substr(pos + 2, r.out.find('\n', pos) - pos - 2)}) == r.out);

  const auto wide = records_from_csv(run("table --theta 2 --t 0.05 --nmax 200").out);
  std::size_t mode = 0;
  for (std::size_t i = 0; i < wide.size(); ++i)
    if (wide[i].value > wide[mode].value) mode = i;
  CHECK(std::abs(static_cast<long>(mode) - 40) <= 3);

  const auto path = std::filesystem::temp_directory_path() / "kingman_table_test.csv";
  CHECK(run("table --theta 1 --t 1 --nmax 50 --out " + path.string()).code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == r.out);
  std::filesystem::remove(path);
}

TEST_CASE("lclt command") {
  const Run r = run("lclt --theta 1 --t 0.02 --vmin -2 --vmax 2 --steps 9");
  CHECK(r.code == 0);
  const auto rows = parse_rows(r.out);
  REQUIRE(rows.size() == 9);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 8);
    const double lattice_ratio = parse_double(row[7]);
    CHECK(lattice_ratio > 0.8);
    CHECK(lattice_ratio < 1.2);
  }
  const auto at_zero = parse_rows(run("lclt --theta 1 --t 0.01 --vmin 0 --vmax 0 --steps 1").out);
  CHECK(std::abs(parse_double(at_zero.at(0).at(3)) - 0.0488603) < 1e-7);
  // n_of_v(v) and n_of_v(-v) differ from symmetry by at most one lattice step
  for (std::size_t i = 0; i < 4; ++i) {
    const long lo = std::stol(rows[i][1]);
    const long hi = std::stol(rows[8 - i][1]);
    CHECK(std::abs((hi - 100) - (100 - lo)) <= 1);
  }
}

TEST_CASE("simulate command") {
  const Run r = run("simulate --theta 1 --t 1 --reps 100000 --seed 7");
  CHECK(r.code == 0);
  CHECK(run("simulate --theta 1 --t 1 --reps 100000 --seed 7").out == r.out);
  const auto rows = parse_rows(r.out);
  double total = 0.0;
  for (const auto& row : rows) total += parse_double(row[1]) * 100000.0;
  CHECK(std::llround(total) == 100000);
  const double p2 = parse_double(rows.at(2).at(1));
  const double se = parse_double(rows.at(2).at(2));
  CHECK(std::abs(p2 - pmf_series(2, ModelParams(1.0, 1.0)).value) < 4.0 * se);
}

TEST_CASE("validate command") {
  const Run r = run("validate --grid small --format json");
  // the literal pointwise limit check fails, so the command reports failure
  CHECK(r.code == 2);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("schema_version") == 1);
  CHECK(doc.contains("worst_cell"));
  for (const auto& inv : doc.at("invariants")) {
    INFO(inv.at("name").get<std::string>());
    CHECK(inv.at("pass").get<bool>() == (inv.at("name") != "asymptotics.lclt_convergence"));
    CHECK(inv.contains("margin"));
  }
  CHECK(run("validate --grid huge").code == 1);
}
