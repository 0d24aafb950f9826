#pragma once

// JSON and CSV encodings of the library's values.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "opineq/classes.hpp"
#include "opineq/error.hpp"
#include "opineq/hlp.hpp"
#include "opineq/recovery.hpp"
#include "opineq/spectral.hpp"

namespace opineq::io {

using json = nlohmann::json;

/// 17 significant digits, enough to round-trip any double.
inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline json to_json(const SpectralOperator& op) {
  json j;
  j["points"] = std::vector<double>(op.points().begin(), op.points().end());
  if (op.has_transform()) {
    const Eigen::MatrixXcd u = op.transform();
    json entries = json::array();
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      for (Eigen::Index c = 0; c < u.cols(); ++c) entries.push_back({u(r, c).real(), u(r, c).imag()});
    }
    j["transform"] = std::move(entries);
  } else {
    j["transform"] = nullptr;
  }
  j["origin"] = std::string(to_string(op.origin()));
  return j;
}

inline Origin origin_from_string(const std::string& s) {
  if (s == "explicit") return Origin::explicit_points;
  if (s == "hermitian") return Origin::hermitian;
  if (s == "fourier_grid") return Origin::fourier_grid;
  fail(ErrorKind::InvalidArgument, "unknown origin '" + s + "'");
}

/// Inverse of to_json. Row-major [re, im] pairs for the transform.
inline SpectralOperator operator_from_json(const json& j) {
  auto points = j.at("points").get<std::vector<double>>();
  std::optional<Eigen::MatrixXcd> transform;
  if (!j.at("transform").is_null()) {
    const auto& entries = j.at("transform");
    const auto n = static_cast<Eigen::Index>(points.size());
    if (static_cast<Eigen::Index>(entries.size()) != n * n) {
      fail(ErrorKind::InvalidSpectrum, "transform must have n*n entries");
    }
    Eigen::MatrixXcd u(n, n);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c, ++k) {
        u(r, c) = {entries[k].at(0).get<double>(), entries[k].at(1).get<double>()};
      }
    }
    transform = std::move(u);
  }
  return from_parts(std::move(points), std::move(transform), origin_from_string(j.at("origin").get<std::string>()));
}

inline json to_json(const InequalityVerdict& v) {
  return {{"lhs", v.lhs}, {"rhs", v.rhs}, {"slack", v.slack}, {"holds", v.holds}};
}

inline json to_json(const HomothetProjection& p) {
  return {{"b", p.b},
          {"slope", p.slope},
          {"budget", p.budget},
          {"membership_lhs", p.membership_lhs},
          {"distance_lhs", p.distance_lhs},
          {"pass", p.pass}};
}

inline json to_json(const NoiseReport& r, double b_star) {
  return {{"delta", r.delta},
          {"b_star", b_star},
          {"value", r.analytic_cap},
          {"empirical_sup", r.empirical_sup},
          {"analytic_cap", r.analytic_cap},
          {"samples", r.samples},
          {"seed", r.seed}};
}

/// RFC-4180 style table with '.' decimals and 17-digit numbers.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  struct Cell {
    Cell(double v) : text(format_number(v)) {}
    Cell(std::string s) : text(quote(s)) {}
    Cell(const char* s) : text(quote(s)) {}
    Cell(bool b) : text(b ? "true" : "false") {}
    Cell(int v) : text(std::to_string(v)) {}
    Cell(std::size_t v) : text(std::to_string(v)) {}
    std::string text;
  };

  void add(std::vector<Cell> row) {
    if (row.size() != header_.size()) fail(ErrorKind::InvalidArgument, "csv row width mismatch");
    rows_.push_back(std::move(row));
  }
  std::size_t rows() const { return rows_.size(); }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + quote(header_[i]);
    out += "\r\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i].text;
      out += "\r\n";
    }
    return out;
  }

  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

/// Writes to a sibling temporary file and renames it into place, so a
/// failed run never leaves a partial file behind.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::IoFailure, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      fail(ErrorKind::IoFailure, "write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    fail(ErrorKind::IoFailure, "rename to " + path.string() + " failed: " + ec.message());
  }
}

}  // namespace opineq::io
