#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/cli.hpp"
#include "modalforge/constructions.hpp"
#include "modalforge/report.hpp"
#include "modalforge/smooth_family.hpp"
#include "oracles.hpp"

using namespace modalforge;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "modalforge");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

/// Data rows of a CSV document, without comments and the column header.
std::vector<std::string> rows(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      header = true;
      continue;
    }
    if (header) {
      header = false;
      continue;
    }
    out.push_back(line);
  }
  return out;
}

/// Rows of one named figure series.
std::vector<std::string> series(const std::string& csv, const std::string& name) {
  const std::string marker = "# series: " + name + "\n";
  const auto start = csv.find(marker);
  if (start == std::string::npos) return {};
  auto end = csv.find("# series:", start + marker.size());
  if (end == std::string::npos) end = csv.size();
  return rows(csv.substr(start, end - start));
}

bool contains(const std::vector<std::string>& v, const std::string& row) {
  return std::find(v.begin(), v.end(), row) != v.end();
}

/// Value column of the row whose abscissa is `x`, NaN when absent.
double value_at(const std::vector<std::string>& rows, const std::string& x) {
  for (const auto& row : rows) {
    if (row.rfind(x + ",", 0) == 0) return std::stod(row.substr(x.size() + 1));
  }
  return NAN;
}

std::vector<std::string> lattice_rows(const LatticeFunction& a) {
  std::vector<std::string> out;
  for (Index m = a.first(); m <= a.last(); ++m) {
    out.push_back(std::to_string(m) + "," + a(m).get_str());
  }
  return out;
}

}  // namespace

TEST_CASE("construct") {
  const Run q = run({"construct", "--dist", "q", "--n", "6", "--raw"});
  CHECK(q.code == 0);
  CHECK(contains(rows(q.out), "5,6,1"));
  CHECK(q.out.rfind("# modalforge 1.0.0", 0) == 0);

  const Run p = run({"construct", "--dist", "p", "--n", "1"});
  CHECK(p.code == 0);
  CHECK(rows(p.out) == std::vector<std::string>{"-1,1,3", "0,1,3", "1,1,3"});

  const Run bad = run({"construct", "--dist", "q", "--n", "0"});
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty());
  CHECK(run({"construct", "--n", "1", "--raw"}).code == 2);
  CHECK(run({"construct", "--n", "6", "--variant", "strict-peak", "--i", "0"}).code == 2);
  CHECK(run({"construct", "--dist", "r", "--n", "3"}).code == 2);

  const Run strict = run({"construct", "--n", "6", "--variant", "strict-peak", "--i", "64"});
  CHECK(strict.code == 0);
  CHECK(rows(strict.out).size() == 9);

  const Run json = run({"construct", "--dist", "q", "--n", "2", "--format", "json"});
  CHECK(json.code == 0);
  const auto j = nlohmann::json::parse(json.out);
  CHECK(j.at("values").size() == 3);
  CHECK(j.at("provenance").at("version") == cli::kVersion);
}

TEST_CASE("verify-discrete") {
  const Run sweep = run({"verify-discrete", "--n-max", "50"});
  CHECK(sweep.code == 0);
  const auto reports = nlohmann::json::parse(sweep.out);
  REQUIRE(reports.size() == 50);
  for (std::size_t k = 0; k < reports.size(); ++k) CHECK(reports[k].at("n") == static_cast<int>(k + 1));

  const Run six = run({"verify-discrete", "--n", "6"});
  CHECK(six.code == 0);
  auto report = nlohmann::json::parse(six.out).at(0);
  CHECK(report.at("modes") == nlohmann::json::parse("[[-5,-5],[-3,-3],[-1,-1],[1,1],[3,3],[5,5]]"));
  report.erase("provenance");
  CHECK(report_from_json(report) == verify_theorem1(6));

  const Run strict = run({"verify-discrete", "--n", "3", "--variant", "strict-peak", "--i", "64"});
  CHECK(strict.code == 0);
  CHECK(nlohmann::json::parse(strict.out).at(0).at("parameters").at("margin").get<double>() > 1e-9);

  const Run csv = run({"verify-discrete", "--n", "3", "--format", "csv"});
  CHECK(rows(csv.out) == std::vector<std::string>{"3,true,3,"});

  CHECK(run({"verify-discrete", "--n", "3", "--n-max", "4"}).code == 2);
  CHECK(run({"verify-discrete"}).code == 2);
}

TEST_CASE("verify-continuous") {
  const Run two = run({"verify-continuous", "--n", "2"});
  CHECK(two.code == 0);
  auto report = nlohmann::json::parse(two.out).at(0);
  const Index count = report.at("mode_detail").at("count").get<Index>();
  CHECK(count >= 2);
  CHECK(count % 2 == 0);
  report.erase("provenance");
  CHECK(to_json(report_from_json(report)) == report);

  const Run seven = run({"verify-continuous", "--n", "7", "--grid-step", "1/256"});
  CHECK(seven.code == 0);
  bool zero = false;
  for (double x : nlohmann::json::parse(seven.out).at(0).at("modes").get<std::vector<double>>()) {
    zero = zero || std::abs(x) < 1e-9;
  }
  CHECK(zero);

  const Run coarse = run({"verify-continuous", "--n", "5", "--grid-step", "0.5"});
  CHECK(coarse.code == 2);
  CHECK(coarse.out.empty());

  const Run exhausted = run({"verify-continuous", "--n", "7", "--N-schedule", "8"});
  CHECK(exhausted.code == 1);
  CHECK(exhausted.err.find("within_schedule") != std::string::npos);

  CHECK(run({"verify-continuous", "--n", "3", "--N-schedule", "32,8"}).code == 2);
  CHECK(run({"verify-continuous", "--n", "3", "--grid-step", "abc"}).code == 2);
}

TEST_CASE("figure") {
  const Run one = run({"figure", "--id", "1"});
  CHECK(one.code == 0);
  CHECK(series(one.out, "q_raw") == lattice_rows(build_q_raw(6)));
  CHECK(series(one.out, "p_raw") == lattice_rows(build_p_raw(6)));
  const auto q6 = oracle::mirrored(oracle::kQ6);
  for (const auto& [k, v] : q6) CHECK(contains(series(one.out, "q_raw"), std::to_string(k) + "," + v.get_str()));

  const Run two = run({"figure", "--id", "2"});
  CHECK(two.code == 0);
  const auto conv = series(two.out, "convolution_raw");
  for (const char* row : {"0,33", "1,34", "5,34", "6,31"}) CHECK(contains(conv, row));
  const auto direct = oracle::convolve(oracle::indicator(-4, 4), q6);
  for (const auto& [k, v] : direct) CHECK(contains(conv, std::to_string(k) + "," + v.get_str()));

  const Run three = run({"figure", "--id", "3"});
  for (const auto& [k, v] : oracle::mirrored(oracle::kQ7)) {
    CHECK(contains(series(three.out, "q_raw"), std::to_string(k) + "," + v.get_str()));
  }
  CHECK(series(three.out, "p_raw") == lattice_rows(build_p_raw(7)));

  const Run h = run({"figure", "--id", "4", "--what", "h", "--N", "10"});
  CHECK(h.code == 0);
  CHECK(contains(rows(h.out), "0,0.5"));
  CHECK(series(h.out, "g").empty());

  const Run four = run({"figure", "--id", "4"});
  const auto g = series(four.out, "g");
  CHECK_FALSE(g.empty());
  // Node identity at n = 5, N = 10: q~5(3) = 5 and q~5(5) = 4, both odd.
  CHECK(value_at(g, "3") == doctest::Approx(4.9).epsilon(1e-15));
  CHECK(value_at(g, "5") == doctest::Approx(3.9).epsilon(1e-15));

  CHECK(run({"figure", "--id", "5"}).code == 2);
  CHECK(run({"figure", "--id", "4", "--what", "nothing"}).code == 2);
  CHECK(run({"figure"}).code == 2);
}

TEST_CASE("output files and determinism") {
  const auto dir = std::filesystem::temp_directory_path() / "modalforge_cli_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "q6.csv").string();
  const Run to_file = run({"construct", "--dist", "q", "--n", "6", "--out", path});
  CHECK(to_file.code == 0);
  CHECK(to_file.out.empty());
  std::ifstream in(path);
  std::stringstream contents;
  contents << in.rdbuf();
  CHECK(rows(contents.str()) == rows(run({"construct", "--dist", "q", "--n", "6"}).out));

  CHECK(run({"verify-discrete", "--n", "2", "--out", (dir / "missing" / "x.json").string()}).code == 2);

  const std::vector<std::string> args{"verify-continuous", "--n-max", "3"};
  CHECK(run(args).out == run(args).out);
  std::filesystem::remove_all(dir);
}

TEST_CASE("installed binary exit codes") {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(MODALFORGE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("construct --dist q --n 6 --raw") == 0);
  CHECK(status("verify-continuous --n 7 --N-schedule 8") == 1);
  CHECK(status("construct --dist q --n 0") == 2);
  CHECK(status("--version") == 0);
  CHECK(status("") == 2);
}
