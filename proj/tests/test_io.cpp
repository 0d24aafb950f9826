#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "opineq/io.hpp"
#include "opineq/sampling.hpp"

using namespace opineq;

TEST_CASE("format_number round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 2.0 / (3.0 * std::sqrt(3.0)), 1e-300, 6.02214076e23, -0.0}) {
    CHECK(std::stod(io::format_number(v)) == v);
  }
}

TEST_CASE("operator JSON round trip") {
  const auto diag = from_eigenvalues({3.0, 1.0, 2.0});
  const auto herm = from_hermitian(sampling::random_hermitian(4, 9));
  const auto four = from_fourier_grid(8, 3.0);
  for (const auto* op : {&diag, &herm, &four}) {
    const auto j = io::to_json(*op);
    const auto back = io::operator_from_json(io::json::parse(j.dump()));
    CHECK(std::vector<double>(back.points().begin(), back.points().end()) ==
          std::vector<double>(op->points().begin(), op->points().end()));
    CHECK(back.origin() == op->origin());
    CHECK(back.has_transform() == op->has_transform());
    if (op->has_transform()) CHECK((back.transform() - op->transform()).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(io::to_json(from_eigenvalues({1.0, 2.0}))["transform"].is_null());
  CHECK(io::to_json(four)["origin"] == "fourier_grid");
}

TEST_CASE("operator JSON rejects bad input") {
  auto j = io::to_json(from_eigenvalues({1.0, 2.0}));
  j["points"] = {2.0, 1.0};
  CHECK_THROWS_AS(io::operator_from_json(j), Error);
  j["points"] = {1.0, 2.0};
  j["origin"] = "unknown";
  CHECK_THROWS_AS(io::operator_from_json(j), Error);
  j["origin"] = "explicit";
  j["transform"] = {{1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(io::operator_from_json(j), Error);
}

TEST_CASE("report JSON shapes") {
  const auto v = make_verdict(1.0, 2.0);
  const auto jv = io::to_json(v);
  CHECK(jv["lhs"] == 1.0);
  CHECK(jv["slack"] == 1.0);
  CHECK(jv["holds"] == true);

  const auto op = from_eigenvalues({0.5});
  const auto p = project_to_homothet(op, power_pair(1, 2), 1.0, SpectralElement(op, {1.0}));
  const auto jp = io::to_json(p);
  for (const char* key : {"b", "slope", "budget", "membership_lhs", "distance_lhs", "pass"}) CHECK(jp.contains(key));

  NoiseReport r;
  r.delta = 0.25;
  r.analytic_cap = 0.5;
  r.samples = 3;
  r.seed = 42;
  const auto jr = io::to_json(r, 4.0);
  for (const char* key : {"delta", "b_star", "value", "empirical_sup", "analytic_cap", "samples", "seed"}) {
    CHECK(jr.contains(key));
  }
  CHECK(jr["b_star"] == 4.0);
}

TEST_CASE("csv quoting and layout") {
  io::CsvTable t({"name", "value"});
  t.add({"plain", 0.5});
  t.add({"with,comma", 1.0});
  t.add({"with \"quote\"", true});
  CHECK(t.rows() == 3);
  CHECK(t.str() == "name,value\r\nplain,0.5\r\n\"with,comma\",1\r\n\"with \"\"quote\"\"\",true\r\n");
  CHECK_THROWS_AS(t.add({"short"}), Error);
}

TEST_CASE("atomic writes leave no partial files") {
  const auto dir = std::filesystem::temp_directory_path() / "opineq_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  io::write_file_atomic(path, "a,b\r\n");
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "a,b\r\n");
  CHECK_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));

  try {
    io::write_file_atomic(dir / "missing" / "x.csv", "data");
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoFailure);
  }
  CHECK_FALSE(std::filesystem::exists(dir / "missing"));
  std::filesystem::remove_all(dir);
}
