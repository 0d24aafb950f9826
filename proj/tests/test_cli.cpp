#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef OPINEQ_CLI_PATH
#error "OPINEQ_CLI_PATH must name the opineq executable"
#endif

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string("\"") + OPINEQ_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (const auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("compute examples") {
  const auto omega = run("compute omega --pair power --k 1 --r 2 --delta 0.25");
  REQUIRE(omega.status == 0);
  CHECK(nlohmann::json::parse(omega.out)["omega"] == 0.5);

  const auto st = run("compute stechkin --pair power --k 1 --r 2 --b 1");
  REQUIRE(st.status == 0);
  const auto js = nlohmann::json::parse(st.out);
  CHECK(std::abs(js["N"].get<double>() - 0.25) < 1e-12);
  CHECK(js["E"] == 1.0);
  CHECK(std::abs(js["maximizer"].get<double>() - 0.5) < 1e-7);

  const auto rec = run("compute recovery --pair power --k 1 --r 2 --delta 0.25");
  REQUIRE(rec.status == 0);
  const auto jr = nlohmann::json::parse(rec.out);
  CHECK(std::abs(jr["b_star"].get<double>() - 4.0) < 4e-6);
  CHECK(std::abs(jr["value"].get<double>() - 0.5) < 1e-12);

  const auto inv = run("compute budget-inverse --k 1 --r 3 --N 0.3849001794597505");
  REQUIRE(inv.status == 0);
  CHECK(std::abs(nlohmann::json::parse(inv.out)["b"].get<double>() - 1.0) < 1e-8);

  const auto add = run("compute additive --k 1 --r 2 --b 2 --format csv");
  REQUIRE(add.status == 0);
  const auto rows = parse_csv(add.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].size() == rows[1].size());

  const auto cls = run("compute class --k 1 --r 2 --b 4");
  REQUIRE(cls.status == 0);
  CHECK(nlohmann::json::parse(cls.out)["value"] == 0.25);

  const auto custom = run("compute stechkin --pair custom --phi power:1 --psi power:2 --b 1");
  REQUIRE(custom.status == 0);
  CHECK(std::abs(nlohmann::json::parse(custom.out)["N"].get<double>() - 0.25) < 1e-12);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("").status == 2);
  CHECK(run("compute").status == 2);
  CHECK(run("compute omega").status == 2);
  CHECK(run("compute omega --delta 0.25 --b 1").status == 2);
  CHECK(run("compute nonsense --delta 1").status == 2);
  CHECK(run("compute omega --k 2 --r 2 --delta 1").status == 2);
  CHECK(run("compute omega --pair custom --delta 1").status == 2);
  CHECK(run("curve omega --delta-grid \"\"").status == 2);
  CHECK(run("curve omega --delta-grid log:1:2").status == 2);
  CHECK(run("curve stechkin --b-grid lin:1:2:0").status == 2);
  CHECK(run("verify bogus").status == 2);
}

TEST_CASE("numeric errors exit 3") {
  CHECK(run("compute omega --k 1 --r 2 --delta -1").status == 3);
  CHECK(run("compute stechkin --k 1 --r 2 --b 0").status == 3);
  CHECK(run("compute budget-inverse --pair custom --phi power:1 --psi power:1 --N 1").status == 3);
  CHECK(run("compute omega --k 1 --r 2 --delta 1 --output /nonexistent/dir/out.json").status == 3);
}

TEST_CASE("curve examples") {
  const auto om = run("curve omega --k 1 --r 2 --delta-grid log:1e-3:10:50");
  REQUIRE(om.status == 0);
  const auto rows = parse_csv(om.out);
  REQUIRE(rows.size() == 51);
  CHECK(rows[0] == std::vector<std::string>{"delta", "omega"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double d = std::stod(rows[i][0]);
    CHECK(std::abs(std::stod(rows[i][1]) - std::sqrt(d)) <= 1e-12 * std::max(1.0, std::sqrt(d)));
  }
  CHECK(std::stod(rows[1][0]) == 1e-3);
  CHECK(std::stod(rows[50][0]) == 10.0);

  const auto st = run("curve stechkin --k 1 --r 2 --b-grid log:0.1:10:50");
  REQUIRE(st.status == 0);
  const auto srows = parse_csv(st.out);
  REQUIRE(srows.size() == 51);
  CHECK(srows[0] == std::vector<std::string>{"b", "N_of_b", "slope", "maximizer"});
  for (std::size_t i = 1; i < srows.size(); ++i) {
    CHECK(std::abs(std::stod(srows[i][1]) - std::stod(srows[i][0]) / 4.0) <= 1e-12 * std::stod(srows[i][0]));
  }

  const auto rec = run("curve recovery --k 1 --r 3 --delta-grid 0.1,0.5,1 --format json");
  REQUIRE(rec.status == 0);
  const auto jr = nlohmann::json::parse(rec.out);
  REQUIRE(jr.size() == 3);
  for (const auto& row : jr) {
    CHECK(std::abs(row["omega"].get<double>() - row["l"].get<double>()) <= 1e-6 * row["omega"].get<double>());
  }
}

TEST_CASE("verify subsets") {
  const auto dual = run("verify duality --pair power --k 1 --r 3 --b-grid 0.5,1,2,4");
  CHECK(dual.status == 0);
  const auto rows = parse_csv(dual.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"suite", "check", "value", "threshold", "pass"});

  const auto t8 = run("verify theorem8 --pair power --k 2 --r 3");
  CHECK(t8.status == 0);
  CHECK(t8.out.find("false") == std::string::npos);
}

TEST_CASE("output files are deterministic") {
  const auto dir = std::filesystem::temp_directory_path() / "opineq_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  REQUIRE(run("verify multiplicative --trials 50 --seed 7 --output " + a.string()).status == 0);
  REQUIRE(run("verify multiplicative --trials 50 --seed 7 --output " + b.string()).status == 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  CHECK_FALSE(std::filesystem::exists(dir / "a.csv.tmp"));
  std::filesystem::remove_all(dir);
}
