// opineq: compute extremal quantities, run the invariant suites and emit
// curve tables.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage error,
// 3 numeric or IO failure (the error kind is printed on stderr).

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opineq/opineq.hpp"
#include "opineq/verify.hpp"

namespace {

using opineq::io::CsvTable;
using opineq::io::json;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PairSpec {
  std::string kind = "power";
  std::optional<double> k;
  std::optional<double> r;
  std::string phi;
  std::string psi;

  bool explicit_power() const { return k.has_value() || r.has_value(); }

  opineq::SymbolPair build() const {
    if (kind == "power") return opineq::power_pair(k.value_or(1.0), r.value_or(2.0));
    if (phi.empty() || psi.empty()) throw UsageError("--pair custom needs --phi and --psi");
    return opineq::make_pair(opineq::symbols::by_name(phi), opineq::symbols::by_name(psi));
  }

  json describe() const {
    if (kind == "power") return {{"pair", "power"}, {"k", k.value_or(1.0)}, {"r", r.value_or(2.0)}};
    return {{"pair", "custom"}, {"phi", phi}, {"psi", psi}};
  }
};

void add_pair_options(CLI::App* cmd, PairSpec& spec) {
  cmd->add_option("--pair", spec.kind, "Symbol pair: power (|t|^k, |t|^r) or custom (registry names)")
      ->check(CLI::IsMember({"power", "custom"}));
  cmd->add_option("--k", spec.k, "Order of phi for the power pair (default 1)");
  cmd->add_option("--r", spec.r, "Order of psi for the power pair (default 2)");
  cmd->add_option("--phi", spec.phi, "Registry name for phi: power:<k>, exp_abs, log1p_abs");
  cmd->add_option("--psi", spec.psi, "Registry name for psi");
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw UsageError("not a number: '" + text + "'");
  return v;
}

/// "log:lo:hi:n", "lin:lo:hi:n" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.rfind("log:", 0) == 0 || text.rfind("lin:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 4) throw UsageError("grid must be <log|lin>:lo:hi:n");
    const double lo = parse_number(parts[1]);
    const double hi = parse_number(parts[2]);
    const double n = parse_number(parts[3]);
    if (!(n >= 1) || n != std::floor(n)) throw UsageError("grid size must be a positive integer");
    const bool log = parts[0] == "log";
    if (log && !(lo > 0 && hi > 0)) throw UsageError("log grid needs positive bounds");
    const auto count = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < count; ++i) {
      const double s = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      double v = log ? std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo))) : lo + s * (hi - lo);
      if (i == 0) v = lo;
      if (i + 1 == count && count > 1) v = hi;
      out.push_back(v);
    }
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(parse_number(part));
    }
  }
  if (out.empty()) throw UsageError("grid is empty");
  return out;
}

void emit(const std::string& content, const std::string& output) {
  if (output.empty()) {
    std::cout << content;
  } else {
    opineq::io::write_file_atomic(output, content);
  }
}

std::string render(const json& record, const std::string& format) {
  if (format == "json") return record.dump(2) + "\n";
  std::vector<std::string> header;
  std::vector<CsvTable::Cell> row;
  for (const auto& [key, value] : record.items()) {
    header.push_back(key);
    if (value.is_number()) {
      row.emplace_back(value.get<double>());
    } else if (value.is_boolean()) {
      row.emplace_back(value.get<bool>());
    } else if (value.is_string()) {
      row.emplace_back(value.get<std::string>());
    } else {
      row.emplace_back(value.dump());
    }
  }
  CsvTable table(header);
  table.add(std::move(row));
  return table.str();
}

struct ComputeArgs {
  std::string quantity;
  PairSpec pair;
  std::optional<double> delta;
  std::optional<double> b;
  std::optional<double> budget;
  std::string format = "json";
  std::string output;
};

int run_compute(const ComputeArgs& a) {
  const bool wants_delta = a.quantity == "omega" || a.quantity == "recovery";
  const bool wants_b = a.quantity == "stechkin" || a.quantity == "additive" || a.quantity == "class";
  const bool wants_n = a.quantity == "budget-inverse";
  if (wants_delta != a.delta.has_value() || wants_b != a.b.has_value() || wants_n != a.budget.has_value()) {
    throw UsageError("compute " + a.quantity + " takes exactly " +
                     (wants_delta ? "--delta" : wants_b ? "--b" : "--N"));
  }
  const auto pair = a.pair.build();
  json out = a.pair.describe();
  out["quantity"] = a.quantity;

  if (a.quantity == "omega") {
    out["delta"] = *a.delta;
    out["omega"] = opineq::modulus_of_continuity(pair.require_link(), *a.delta);
  } else if (a.quantity == "stechkin") {
    const auto bundle = opineq::operator_budget(pair, *a.b);
    out["b"] = *a.b;
    out["N"] = bundle.budget;
    out["E"] = opineq::best_approx_value(pair, *a.b);
    out["maximizer"] = bundle.maximizer;
    out["sharp"] = bundle.sharp;
  } else if (a.quantity == "budget-inverse") {
    const auto bundle = opineq::solve_budget(pair, *a.budget);
    out["N"] = *a.budget;
    out["b"] = bundle.b;
    out["E"] = bundle.slope;
    out["maximizer"] = bundle.maximizer;
  } else if (a.quantity == "additive") {
    const auto c = opineq::additive_coefficients(pair, *a.b);
    out["b"] = *a.b;
    out["slope"] = c.slope;
    out["intercept"] = c.intercept;
  } else if (a.quantity == "class") {
    out["b"] = *a.b;
    out["N"] = opineq::operator_budget(pair, *a.b).budget;
    out["value"] = opineq::class_approx_value(pair, *a.b);
  } else {
    const auto plan = opineq::l_delta(pair, *a.delta);
    out["delta"] = *a.delta;
    out["b_star"] = plan.b_star;
    out["value"] = plan.value;
    if (pair.link) out["omega"] = opineq::recovery_value(pair, *a.delta);
  }
  emit(render(out, a.format), a.output);
  return 0;
}

struct VerifyArgs {
  std::string suite;
  PairSpec pair;
  std::uint64_t seed = 42;
  std::size_t trials = 1000;
  std::string b_grid;
  std::string output;
};

int run_verify(const VerifyArgs& a) {
  opineq::verify::Config config;
  config.seed = a.seed;
  config.trials = a.trials;
  if (a.pair.kind != "power") throw UsageError("verify runs on power pairs only");
  if (a.pair.explicit_power()) {
    const auto pair = a.pair.build();  // validates the order
    (void)pair;
    config.power = opineq::verify::PowerOrder{a.pair.k.value_or(1.0), a.pair.r.value_or(2.0)};
  }
  if (!a.b_grid.empty()) config.b_grid = parse_grid(a.b_grid);

  const auto rows = opineq::verify::run(a.suite, config);
  CsvTable table({"suite", "check", "value", "threshold", "pass"});
  std::size_t passed = 0;
  for (const auto& row : rows) {
    table.add({row.suite, row.check, row.value, row.threshold, row.pass});
    passed += row.pass ? 1 : 0;
  }
  emit(table.str(), a.output);
  std::cerr << passed << "/" << rows.size() << " checks passed\n";
  return passed == rows.size() ? 0 : kExitVerifyFailed;
}

struct CurveArgs {
  std::string kind;
  PairSpec pair;
  std::string delta_grid;
  std::string b_grid;
  std::string format = "csv";
  std::string output;
};

int run_curve(const CurveArgs& a) {
  const bool by_delta = a.kind == "omega" || a.kind == "recovery";
  if (by_delta && a.delta_grid.empty()) throw UsageError("curve " + a.kind + " needs --delta-grid");
  if (!by_delta && a.b_grid.empty()) throw UsageError("curve stechkin needs --b-grid");
  const auto grid = parse_grid(by_delta ? a.delta_grid : a.b_grid);
  const auto pair = a.pair.build();

  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  if (a.kind == "omega") {
    header = {"delta", "omega"};
    for (double d : grid) rows.push_back({d, opineq::modulus_of_continuity(pair.require_link(), d)});
  } else if (a.kind == "stechkin") {
    header = {"b", "N_of_b", "slope", "maximizer"};
    for (double b : grid) {
      const auto bundle = opineq::operator_budget(pair, b);
      rows.push_back({b, bundle.budget, bundle.slope, bundle.maximizer});
    }
  } else {
    header = {"delta", "omega", "l", "b_star"};
    for (double d : grid) {
      const auto plan = opineq::l_delta(pair, d);
      rows.push_back({d, opineq::modulus_of_continuity(pair.require_link(), d), plan.value, plan.b_star});
    }
  }

  std::string content;
  if (a.format == "json") {
    json arr = json::array();
    for (const auto& row : rows) {
      json obj;
      for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
      arr.push_back(std::move(obj));
    }
    content = arr.dump(2) + "\n";
  } else {
    CsvTable table(header);
    for (const auto& row : rows) table.add(std::vector<CsvTable::Cell>(row.begin(), row.end()));
    content = table.str();
  }
  emit(content, a.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremal inequalities for functions of self-adjoint operators"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* cmd_compute = app.add_subcommand("compute", "Compute one quantity and echo its inputs");
  cmd_compute->add_option("quantity", compute.quantity, "omega|stechkin|budget-inverse|additive|class|recovery")
      ->required()
      ->check(CLI::IsMember({"omega", "stechkin", "budget-inverse", "additive", "class", "recovery"}));
  add_pair_options(cmd_compute, compute.pair);
  cmd_compute->add_option("--delta", compute.delta, "Noise level / class radius delta > 0");
  cmd_compute->add_option("--b", compute.b, "Cut level b > 0");
  cmd_compute->add_option("--N", compute.budget, "Operator-norm budget N > 0");
  cmd_compute->add_option("--format", compute.format)->check(CLI::IsMember({"json", "csv"}));
  cmd_compute->add_option("--output", compute.output, "Write to this file instead of stdout");

  VerifyArgs verify;
  auto* cmd_verify = app.add_subcommand("verify", "Run invariant suites; exit 0 iff all checks pass");
  cmd_verify->add_option("suite", verify.suite, "all|symbols|omega|multiplicative|additive|stechkin|duality|theorem8|classes|recovery")
      ->required()
      ->check(CLI::IsMember(
          {"all", "symbols", "omega", "multiplicative", "additive", "stechkin", "duality", "theorem8", "classes", "recovery"}));
  add_pair_options(cmd_verify, verify.pair);
  cmd_verify->add_option("--seed", verify.seed, "Random seed (default 42)");
  cmd_verify->add_option("--trials", verify.trials, "Random elements per sweep (default 1000)")->check(CLI::PositiveNumber);
  cmd_verify->add_option("--b-grid", verify.b_grid, "Cut levels: list or <log|lin>:lo:hi:n");
  cmd_verify->add_option("--output", verify.output, "Write the CSV report to this file");

  CurveArgs curve;
  auto* cmd_curve = app.add_subcommand("curve", "Tabulate a curve for plotting");
  cmd_curve->add_option("kind", curve.kind, "omega|stechkin|recovery")
      ->required()
      ->check(CLI::IsMember({"omega", "stechkin", "recovery"}));
  add_pair_options(cmd_curve, curve.pair);
  cmd_curve->add_option("--delta-grid", curve.delta_grid, "delta values: list or <log|lin>:lo:hi:n");
  cmd_curve->add_option("--b-grid", curve.b_grid, "b values: list or <log|lin>:lo:hi:n");
  cmd_curve->add_option("--format", curve.format)->check(CLI::IsMember({"json", "csv"}));
  cmd_curve->add_option("--output", curve.output, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_compute->parsed()) return run_compute(compute);
    if (cmd_verify->parsed()) return run_verify(verify);
    return run_curve(curve);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const opineq::Error& e) {
    if (e.kind() == opineq::ErrorKind::InvalidArgument || e.kind() == opineq::ErrorKind::InvalidOrder) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kExitUsage;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
