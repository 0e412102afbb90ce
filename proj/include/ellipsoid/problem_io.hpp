#pragma once

// Problem files and trace records as JSON.
//
//   {"dim": 2, "radius": 2.0,
//    "constraints": [{"a": [1, 0], "b": 0.5, "sense": ">="}]}
//
// Unknown keys are rejected. "sense" defaults to ">=".

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ellipsoid/errors.hpp"
#include "ellipsoid/linalg.hpp"
#include "ellipsoid/solver.hpp"

namespace ellipsoid {

enum class Sense { greater_equal, less_equal };

struct ProblemConstraint {
  std::vector<double> a;
  double b = 0.0;
  Sense sense = Sense::greater_equal;

  friend bool operator==(const ProblemConstraint&, const ProblemConstraint&) = default;
};

struct ProblemFile {
  std::size_t dim = 0;
  double radius = 0.0;
  std::vector<ProblemConstraint> constraints;

  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

namespace io_detail {

using nlohmann::json;

inline void line_column(std::string_view text, std::size_t byte, std::size_t& line, std::size_t& column) {
  line = 1;
  column = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                                const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto k : allowed) known = known || item.key() == k;
    if (!known) throw validation_error(where + ": unknown key \"" + item.key() + "\"");
  }
}

inline double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw validation_error(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw validation_error(where + ": number is not finite");
  return x;
}

}  // namespace io_detail

inline ProblemFile parse_problem(std::string_view text) {
  using io_detail::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 0;
    std::size_t column = 0;
    // nlohmann reports the 1-based byte index of the offending character.
    io_detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0, line, column);
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw parse_error(line, column, msg);
  }

  if (!doc.is_object()) throw validation_error("problem: top level must be an object");
  io_detail::reject_unknown_keys(doc, {"dim", "radius", "constraints"}, "problem");

  ProblemFile p;
  if (!doc.contains("dim")) throw validation_error("problem: missing key \"dim\"");
  const json& dim = doc.at("dim");
  if (!dim.is_number_integer() || dim.get<long long>() < 1) {
    throw validation_error("dim: expected a positive integer");
  }
  p.dim = static_cast<std::size_t>(dim.get<long long>());

  if (!doc.contains("radius")) throw validation_error("problem: missing key \"radius\"");
  p.radius = io_detail::finite_number(doc.at("radius"), "radius");
  if (!(p.radius > 0.0)) throw validation_error("radius: must be positive");

  if (doc.contains("constraints")) {
    const json& rows = doc.at("constraints");
    if (!rows.is_array()) throw validation_error("constraints: expected an array");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string where = "constraints[" + std::to_string(i) + "]";
      const json& row = rows[i];
      if (!row.is_object()) throw validation_error(where + ": expected an object");
      io_detail::reject_unknown_keys(row, {"a", "b", "sense"}, where);
      if (!row.contains("a")) throw validation_error(where + ": missing key \"a\"");
      if (!row.contains("b")) throw validation_error(where + ": missing key \"b\"");

      ProblemConstraint c;
      const json& a = row.at("a");
      if (!a.is_array()) throw validation_error(where + ".a: expected an array");
      if (a.size() != p.dim) {
        throw validation_error(where + ".a: expected " + std::to_string(p.dim) + " entries, got " +
                               std::to_string(a.size()));
      }
      for (std::size_t j = 0; j < a.size(); ++j) {
        c.a.push_back(io_detail::finite_number(a[j], where + ".a[" + std::to_string(j) + "]"));
      }
      bool nonzero = false;
      for (double v : c.a) nonzero = nonzero || v != 0.0;
      if (!nonzero) throw validation_error(where + ".a: normal must be nonzero");

      c.b = io_detail::finite_number(row.at("b"), where + ".b");
      if (row.contains("sense")) {
        const json& s = row.at("sense");
        if (s == ">=") {
          c.sense = Sense::greater_equal;
        } else if (s == "<=") {
          c.sense = Sense::less_equal;
        } else {
          throw validation_error(where + ".sense: expected \">=\" or \"<=\"");
        }
      }
      p.constraints.push_back(std::move(c));
    }
  }
  return p;
}

inline std::string serialize_problem(const ProblemFile& p) {
  using io_detail::json;
  json rows = json::array();
  for (const auto& c : p.constraints) {
    rows.push_back({{"a", c.a}, {"b", c.b}, {"sense", c.sense == Sense::greater_equal ? ">=" : "<="}});
  }
  json doc = {{"dim", p.dim}, {"radius", p.radius}, {"constraints", rows}};
  return doc.dump(2) + "\n";
}

/// "<=" rows become ">=" rows with negated normal and bound.
inline LinearSystem to_linear_system(const ProblemFile& p) {
  std::vector<Constraint> rows;
  rows.reserve(p.constraints.size());
  for (const auto& c : p.constraints) {
    if (c.sense == Sense::greater_equal) {
      rows.push_back(Constraint{Vector(c.a), c.b});
    } else {
      rows.push_back(Constraint{-1.0 * Vector(c.a), -c.b});
    }
  }
  try {
    return LinearSystem(p.dim, std::move(rows), p.radius);
  } catch (const usage_error& e) {
    throw validation_error(e.what());
  }
}

inline nlohmann::json trace_record_json(const TraceRecord& r) {
  using io_detail::json;
  json j;
  j["iter"] = r.iter;
  j["violated_index"] = r.violated_index ? json(*r.violated_index) : json(nullptr);
  j["center"] = r.center.std_vector();
  j["log_volume"] = r.log_volume;
  j["cut_quadratic_form"] = r.cut_quadratic_form ? json(*r.cut_quadratic_form) : json(nullptr);
  return j;
}

inline TraceRecord trace_record_from_json(const nlohmann::json& j) {
  TraceRecord r;
  r.iter = j.at("iter").get<std::size_t>();
  if (!j.at("violated_index").is_null()) r.violated_index = j.at("violated_index").get<std::size_t>();
  r.center = Vector(j.at("center").get<std::vector<double>>());
  r.log_volume = j.at("log_volume").get<double>();
  if (!j.at("cut_quadratic_form").is_null()) r.cut_quadratic_form = j.at("cut_quadratic_form").get<double>();
  return r;
}

}  // namespace ellipsoid
