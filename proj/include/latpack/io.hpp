#ifndef LATPACK_IO_HPP
#define LATPACK_IO_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "latpack/core.hpp"
#include "latpack/oracle.hpp"
#include "latpack/verify.hpp"
#include "latpack/voronoi.hpp"

namespace latpack::io {

using Json = nlohmann::ordered_json;

/// Malformed or schema-violating input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Emission. nlohmann's dump picks the shortest round-trip form; documents here
// use a fixed 17 significant digits instead.

inline std::string format_real(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot serialize a non-finite number");
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void emit(const Json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        emit(it.value(), os, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      // Arrays of scalars stay on one line; nested structure gets one per line.
      bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (j.empty()) {
        os << "[]";
      } else if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          emit(j[i], os, indent);
        }
        os << "]";
      } else {
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ",\n";
          os << pad;
          emit(j[i], os, indent + 2);
        }
        os << "\n" << close << "]";
      }
      return;
    }
    case Json::value_t::number_float:
      os << format_real(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

}  // namespace detail

inline std::string emit_json(const Json& j) {
  std::ostringstream os;
  detail::emit(j, os, 0);
  os << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Documents

inline Json to_json(const PlaneVector& v) { return Json::array({v.x, v.y}); }

inline double real_field(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string(what) + ": non-finite number");
  return v;
}

inline const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline PlaneVector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ParseError(std::string(what) + ": expected [x, y]");
  return {real_field(j[0], what), real_field(j[1], what)};
}

/// LatticeDocument: {"x1": [x, y], "x2": [x, y]}, the basis columns.
inline Basis basis_from_json(const Json& j) {
  return {vector_from_json(member(j, "x1"), "x1"), vector_from_json(member(j, "x2"), "x2")};
}

inline Json to_json(const Basis& b) { return Json{{"x1", to_json(b.x1)}, {"x2", to_json(b.x2)}}; }

inline Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline Json to_json(const ShapePoint& p) { return Json{{"s", p.s}, {"theta", p.theta}}; }

inline ShapePoint shape_from_json(const Json& j) {
  return {real_field(member(j, "s"), "s"), real_field(member(j, "theta"), "theta")};
}

inline Json to_json(const DensityReport& r) {
  return Json{{"lambda1", r.lambda1}, {"lambda2", r.lambda2}, {"det", r.det},     {"theta", r.theta},
              {"delta", r.delta},     {"well_rounded", r.well_rounded},           {"gap", r.gap}};
}

inline DensityReport density_from_json(const Json& j) {
  DensityReport r;
  r.lambda1 = real_field(member(j, "lambda1"), "lambda1");
  r.lambda2 = real_field(member(j, "lambda2"), "lambda2");
  r.det = real_field(member(j, "det"), "det");
  r.theta = real_field(member(j, "theta"), "theta");
  r.delta = real_field(member(j, "delta"), "delta");
  const Json& wr = member(j, "well_rounded");
  if (!wr.is_boolean()) throw ParseError("well_rounded: expected a boolean");
  r.well_rounded = wr.get<bool>();
  r.gap = real_field(member(j, "gap"), "gap");
  return r;
}

inline bool same_minima(const MinimaPair& p, const MinimaPair& q) {
  return p.v1 == q.v1 && p.v2 == q.v2 && p.lambda1 == q.lambda1 && p.lambda2 == q.lambda2 && p.theta == q.theta &&
         p.transform == q.transform;
}

/// Output of `reduce` and `density`.
struct ReportDocument {
  std::string command;
  Basis input;
  double det = 0.0;
  MinimaPair minima;
  std::optional<DensityReport> density;
  std::optional<ShapePoint> shape;

  bool operator==(const ReportDocument& o) const {
    return command == o.command && input == o.input && det == o.det && same_minima(minima, o.minima) &&
           density == o.density && shape == o.shape;
  }
};

inline Json to_json(const ReportDocument& d) {
  Json j;
  j["command"] = d.command;
  j["input"] = to_json(d.input);
  j["det"] = d.det;
  j["minima"] = Json{{"v1", to_json(d.minima.v1)},
                     {"v2", to_json(d.minima.v2)},
                     {"lambda1", d.minima.lambda1},
                     {"lambda2", d.minima.lambda2},
                     {"theta", d.minima.theta}};
  const UnimodularMatrix& u = d.minima.transform;
  j["transform"] = Json::array({Json::array({u.a, u.b}), Json::array({u.c, u.d})});
  if (d.density) j["density"] = to_json(*d.density);
  if (d.shape) j["shape"] = to_json(*d.shape);
  return j;
}

inline std::int64_t integer_field(const Json& j) {
  if (!j.is_number_integer()) throw ParseError("transform: expected integers");
  return j.get<std::int64_t>();
}

inline ReportDocument report_from_json(const Json& j) {
  ReportDocument d;
  const Json& cmd = member(j, "command");
  if (!cmd.is_string()) throw ParseError("command: expected a string");
  d.command = cmd.get<std::string>();
  d.input = basis_from_json(member(j, "input"));
  d.det = real_field(member(j, "det"), "det");
  const Json& m = member(j, "minima");
  d.minima.v1 = vector_from_json(member(m, "v1"), "v1");
  d.minima.v2 = vector_from_json(member(m, "v2"), "v2");
  d.minima.lambda1 = real_field(member(m, "lambda1"), "lambda1");
  d.minima.lambda2 = real_field(member(m, "lambda2"), "lambda2");
  d.minima.theta = real_field(member(m, "theta"), "theta");
  const Json& t = member(j, "transform");
  if (!t.is_array() || t.size() != 2 || !t[0].is_array() || t[0].size() != 2 || !t[1].is_array() || t[1].size() != 2) {
    throw ParseError("transform: expected a 2x2 array");
  }
  d.minima.transform = {integer_field(t[0][0]), integer_field(t[0][1]), integer_field(t[1][0]), integer_field(t[1][1])};
  if (j.contains("density")) d.density = density_from_json(j.at("density"));
  if (j.contains("shape")) d.shape = shape_from_json(j.at("shape"));
  return d;
}

inline ReportDocument reduce_report(const Lattice& lattice) {
  ReportDocument d;
  d.command = "reduce";
  d.input = lattice.basis();
  d.det = lattice.det();
  d.minima = successive_minima(lattice);
  return d;
}

inline ReportDocument density_report(const Lattice& lattice, double tol) {
  ReportDocument d = reduce_report(lattice);
  d.command = "density";
  d.density = packing_density(lattice, tol);
  d.shape = shape_parameters(lattice);
  return d;
}

inline Json similarity_document(const Lattice& a, const Lattice& b, double tol) {
  const ShapePoint sa = shape_parameters(a), sb = shape_parameters(b);
  return Json{{"similar", shapes_match(sa, sb, tol)}, {"tol", tol}, {"shape_a", to_json(sa)}, {"shape_b", to_json(sb)}};
}

inline Json voronoi_document(const Lattice& lattice) {
  const VoronoiCell cell = voronoi_cell(lattice);
  Json vertices = Json::array(), relevant = Json::array();
  for (const auto& v : cell.vertices) vertices.push_back(to_json(v));
  for (const auto& v : cell.relevant) relevant.push_back(to_json(v));
  return Json{{"vertices", vertices},
              {"relevant", relevant},
              {"area", cell_area(cell)},
              {"in_radius", cell_in_radius(cell)},
              {"det", lattice.det()}};
}

inline Json to_json(const GridSearchResult& g) {
  return Json{{"best_shape", to_json(g.best_shape)}, {"best_delta", g.best_delta}, {"grid_step", g.grid_step},
              {"argmax_cells", g.argmax_cells},      {"s_count", g.s_count},       {"theta_count", g.theta_count}};
}

inline Json to_json(const VerifySummary& s) {
  Json props = Json::array();
  for (const auto& p : s.properties) {
    props.push_back(Json{{"name", p.name},
                         {"passed", p.passed},
                         {"samples", p.samples},
                         {"worst_residual", p.worst_residual},
                         {"threshold", p.threshold}});
  }
  return Json{{"seed", s.seed},
              {"count", s.count},
              {"step", s.step},
              {"max_density", s.max_density},
              {"bound", kHexagonalDensity},
              {"passed", s.passed()},
              {"properties", props}};
}

// ---------------------------------------------------------------------------
// SVG. Mathematical orientation (y up) is obtained by negating y on output.

namespace svg {

inline std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

struct Bounds {
  double min_x = INFINITY, min_y = INFINITY, max_x = -INFINITY, max_y = -INFINITY;

  void include(const PlaneVector& p, double pad = 0.0) {
    min_x = std::min(min_x, p.x - pad);
    max_x = std::max(max_x, p.x + pad);
    min_y = std::min(min_y, p.y - pad);
    max_y = std::max(max_y, p.y + pad);
  }
};

class Writer {
 public:
  explicit Writer(double stroke) : stroke_(stroke) {}

  void polygon(const std::vector<PlaneVector>& vs, const PlaneVector& offset) {
    body_ << "  <polygon class=\"cell\" points=\"";
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const PlaneVector p = vs[i] + offset;
      bounds_.include(p, stroke_);
      body_ << (i ? " " : "") << num(p.x) << "," << num(-p.y);
    }
    body_ << "\"/>\n";
  }

  void circle(const PlaneVector& c, double r) {
    bounds_.include(c, r + stroke_);
    body_ << "  <circle class=\"packing\" cx=\"" << num(c.x) << "\" cy=\"" << num(-c.y) << "\" r=\"" << num(r)
          << "\"/>\n";
  }

  void point(const PlaneVector& c, double half) {
    bounds_.include(c, half);
    body_ << "  <rect class=\"point\" x=\"" << num(c.x - half) << "\" y=\"" << num(-c.y - half) << "\" width=\""
          << num(2 * half) << "\" height=\"" << num(2 * half) << "\"/>\n";
  }

  std::string finish() const {
    const double x = bounds_.min_x, y = -bounds_.max_y;
    const double w = bounds_.max_x - bounds_.min_x, h = bounds_.max_y - bounds_.min_y;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(x) << " " << num(y) << " " << num(w) << " "
       << num(h) << "\">\n"
       << "  <style>.cell{fill:none;stroke:#1f4e79;stroke-width:" << num(stroke_)
       << "}.packing{fill:#9ecae1;fill-opacity:0.6;stroke:#08519c;stroke-width:" << num(stroke_)
       << "}.point{fill:#000000}</style>\n"
       << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  double stroke_;
  Bounds bounds_;
  std::ostringstream body_;
};

}  // namespace svg

/// The Voronoi cell and its inscribed circle.
inline std::string voronoi_svg(const Lattice& lattice) {
  const VoronoiCell cell = voronoi_cell(lattice);
  const double lambda1 = successive_minima(lattice).lambda1;
  svg::Writer w(0.02 * lambda1);
  w.polygon(cell.vertices, {0.0, 0.0});
  w.circle({0.0, 0.0}, lambda1 / 2.0);
  return w.finish();
}

inline constexpr int kMinExtent = 1;
inline constexpr int kMaxExtent = 20;

/// Lattice points, Voronoi cell translates and inscribed circles for every
/// a*v1 + b*v2 with |a|, |b| <= extent over the minimal basis.
inline std::string packing_svg(const Lattice& lattice, int extent) {
  if (extent < kMinExtent || extent > kMaxExtent) throw std::out_of_range("extent must lie in [1, 20]");
  const MinimaPair m = successive_minima(lattice);
  const VoronoiCell cell = voronoi_cell(lattice);
  svg::Writer w(0.02 * m.lambda1);
  std::vector<PlaneVector> centers;
  for (int a = -extent; a <= extent; ++a) {
    for (int b = -extent; b <= extent; ++b) centers.push_back(m.v1 * a + m.v2 * b);
  }
  for (const auto& c : centers) w.polygon(cell.vertices, c);
  for (const auto& c : centers) w.circle(c, m.lambda1 / 2.0);
  for (const auto& c : centers) w.point(c, 0.03 * m.lambda1);
  return w.finish();
}

}  // namespace latpack::io

#endif  // LATPACK_IO_HPP
