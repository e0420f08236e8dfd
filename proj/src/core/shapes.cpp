#include "gammalab/shapes.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gammalab/constants.hpp"

namespace gammalab {

namespace {

double frac(double x) {
  double f = x - std::floor(x);
  return (f >= 1.0) ? f - 1.0 : f;
}

double torus_axis_dist(double a, double b) {
  double d = std::abs(frac(a) - frac(b));
  return std::min(d, 1.0 - d);
}

void validate_ball(const Ball& b, int dim) {
  require(b.radius > 0.0 && b.radius < 0.5, ErrorCode::invalid_argument,
          "ball: radius must lie in (0, 1/2)");
  (void)dim;
}

void validate_laminate(const Laminate& l, int dim) {
  require(l.axis >= 1 && l.axis <= dim, ErrorCode::invalid_argument,
          "laminate: axis out of range");
  require(l.theta > 0.0 && l.theta < 1.0, ErrorCode::invalid_argument,
          "laminate: theta must lie in (0, 1)");
  require(l.stripes >= 1, ErrorCode::invalid_argument,
          "laminate: stripe count must be >= 1");
}

void validate_polygon(const Polygon& p) {
  require(p.vertices.empty() || p.vertices.size() >= 3,
          ErrorCode::invalid_argument,
          "polytope: need zero (empty set) or at least three vertices");
  for (const auto& v : p.vertices)
    require(v[0] >= 0.0 && v[0] < 1.0 && v[1] >= 0.0 && v[1] < 1.0,
            ErrorCode::invalid_argument,
            "polytope: vertices must lie in the fundamental domain [0,1)^2");
}

double polygon_area(const Polygon& p) {
  double a = 0.0;
  size_t m = p.vertices.size();
  for (size_t i = 0; i < m; ++i) {
    const auto& u = p.vertices[i];
    const auto& v = p.vertices[(i + 1) % m];
    a += u[0] * v[1] - v[0] * u[1];
  }
  return 0.5 * std::abs(a);
}

double polygon_perimeter(const Polygon& p) {
  double len = 0.0;
  size_t m = p.vertices.size();
  for (size_t i = 0; i < m; ++i) {
    const auto& u = p.vertices[i];
    const auto& v = p.vertices[(i + 1) % m];
    len += std::hypot(v[0] - u[0], v[1] - u[1]);
  }
  return len;
}

bool polygon_contains(const Polygon& p, double x, double y) {
  // Crossing-number test; boundary points land on either side, which is
  // fine for cell-center sampling (measure zero).
  bool inside = false;
  size_t m = p.vertices.size();
  for (size_t i = 0, j = m - 1; i < m; j = i++) {
    double xi = p.vertices[i][0], yi = p.vertices[i][1];
    double xj = p.vertices[j][0], yj = p.vertices[j][1];
    if ((yi > y) != (yj > y)) {
      double xcross = xj + (y - yj) / (yi - yj) * (xi - xj);
      if (x < xcross) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

ShapeSpec make_ball(int dim, std::array<double, 3> center, double radius) {
  require(dim == 2 || dim == 3, ErrorCode::invalid_argument,
          "shape: dimension must be 2 or 3");
  Ball b{center, radius};
  validate_ball(b, dim);
  for (int d = 0; d < dim; ++d) b.center[d] = frac(b.center[d]);
  return ShapeSpec{dim, b};
}

ShapeSpec make_laminate(int dim, int axis, double theta, int stripes,
                        double offset) {
  require(dim == 2 || dim == 3, ErrorCode::invalid_argument,
          "shape: dimension must be 2 or 3");
  Laminate l{axis, theta, stripes, frac(offset)};
  validate_laminate(l, dim);
  return ShapeSpec{dim, l};
}

ShapeSpec make_polygon(std::vector<std::array<double, 2>> vertices) {
  Polygon p{std::move(vertices)};
  validate_polygon(p);
  return ShapeSpec{2, p};
}

ShapeSpec make_complement(ShapeSpec inner) {
  int dim = inner.dim;
  return ShapeSpec{dim,
                   Complement{std::make_shared<const ShapeSpec>(std::move(inner))}};
}

ShapeSpec make_square(double cx, double cy, double side) {
  double h = 0.5 * side;
  return make_polygon({{cx - h, cy - h},
                       {cx + h, cy - h},
                       {cx + h, cy + h},
                       {cx - h, cy + h}});
}

ShapeSpec laminate_sequence(int k, double theta) {
  require(k >= 1, ErrorCode::invalid_argument, "laminate_sequence: k >= 1");
  return make_laminate(2, 1, theta, k);
}

double shape_volume(const ShapeSpec& s) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>)
          return unit_ball_volume(s.dim) * std::pow(v.radius, s.dim);
        else if constexpr (std::is_same_v<T, Laminate>)
          return v.theta;
        else if constexpr (std::is_same_v<T, Polygon>)
          return polygon_area(v);
        else
          return 1.0 - shape_volume(*v.inner);
      },
      s.shape);
}

PerimeterEstimate shape_perimeter(const ShapeSpec& s) {
  double value = std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>)
          return unit_sphere_area(s.dim) * std::pow(v.radius, s.dim - 1);
        else if constexpr (std::is_same_v<T, Laminate>)
          return 2.0 * v.stripes;
        else if constexpr (std::is_same_v<T, Polygon>)
          return polygon_perimeter(v);
        else
          return shape_perimeter(*v.inner).value;
      },
      s.shape);
  return PerimeterEstimate{value, PerimeterMethod::analytic, 0.0};
}

bool shape_contains(const ShapeSpec& s, const std::array<double, 3>& point) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) {
          double d2 = 0.0;
          for (int d = 0; d < s.dim; ++d) {
            double dd = torus_axis_dist(point[d], v.center[d]);
            d2 += dd * dd;
          }
          return d2 < v.radius * v.radius;
        } else if constexpr (std::is_same_v<T, Laminate>) {
          double u = frac(point[v.axis - 1] - v.offset);
          double t = u * v.stripes;
          t -= std::floor(t);
          return t < v.theta;
        } else if constexpr (std::is_same_v<T, Polygon>) {
          if (v.vertices.empty()) return false;
          return polygon_contains(v, frac(point[0]), frac(point[1]));
        } else {
          return !shape_contains(*v.inner, point);
        }
      },
      s.shape);
}

ShapeSpec shape_translate(const ShapeSpec& s, const std::array<double, 3>& delta) {
  return std::visit(
      [&](const auto& v) -> ShapeSpec {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) {
          Ball b = v;
          for (int d = 0; d < s.dim; ++d) b.center[d] = frac(b.center[d] + delta[d]);
          return ShapeSpec{s.dim, b};
        } else if constexpr (std::is_same_v<T, Laminate>) {
          Laminate l = v;
          l.offset = frac(l.offset + delta[l.axis - 1]);
          return ShapeSpec{s.dim, l};
        } else if constexpr (std::is_same_v<T, Polygon>) {
          Polygon p = v;
          for (auto& w : p.vertices) {
            w[0] += delta[0];
            w[1] += delta[1];
          }
          validate_polygon(p);  // must stay inside the fundamental domain
          return ShapeSpec{2, p};
        } else {
          return make_complement(shape_translate(*v.inner, delta));
        }
      },
      s.shape);
}

double ball_laminate_threshold(int dim) {
  require(dim >= 2, ErrorCode::invalid_argument,
          "ball_laminate_threshold: n >= 2");
  double n = dim;
  return std::pow(2.0 / n, n / (n + 1.0)) *
         std::pow(unit_ball_volume(dim), -1.0 / (n - 1.0));
}

// --- plain-text records ---------------------------------------------------

namespace {

struct KvList {
  std::vector<std::pair<std::string, std::string>> items;
  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : items)
      if (k == key) return &v;
    return nullptr;
  }
  double num(const std::string& key) const {
    const std::string* v = find(key);
    require(v != nullptr, ErrorCode::invalid_argument,
            "shape record: missing key '" + key + "'");
    return std::stod(*v);
  }
  double num_or(const std::string& key, double fallback) const {
    const std::string* v = find(key);
    return v ? std::stod(*v) : fallback;
  }
};

KvList parse_kv(std::istringstream& in) {
  KvList kv;
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    require(eq != std::string::npos, ErrorCode::invalid_argument,
            "shape record: expected key=value, got '" + tok + "'");
    kv.items.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return kv;
}

std::vector<std::array<double, 2>> parse_vertex_list(const std::string& text) {
  std::vector<std::array<double, 2>> verts;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t open = text.find('(', pos);
    if (open == std::string::npos) break;
    size_t close = text.find(')', open);
    require(close != std::string::npos, ErrorCode::invalid_argument,
            "polytope record: unbalanced parenthesis in vertex list");
    std::string pair = text.substr(open + 1, close - open - 1);
    size_t comma = pair.find(',');
    require(comma != std::string::npos, ErrorCode::invalid_argument,
            "polytope record: vertex needs two coordinates");
    verts.push_back({std::stod(pair.substr(0, comma)),
                     std::stod(pair.substr(comma + 1))});
    pos = close + 1;
  }
  return verts;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

ShapeSpec parse_shape(const std::string& line, int dim) {
  std::istringstream in(line);
  std::string head;
  require(static_cast<bool>(in >> head), ErrorCode::invalid_argument,
          "shape record: empty line");
  if (head == "complement") {
    std::string rest;
    std::getline(in, rest);
    return make_complement(parse_shape(rest, dim));
  }
  if (head == "ball") {
    KvList kv = parse_kv(in);
    std::array<double, 3> c{kv.num("cx"), kv.num("cy"),
                            dim == 3 ? kv.num("cz") : 0.0};
    return make_ball(dim, c, kv.num("r"));
  }
  if (head == "laminate") {
    KvList kv = parse_kv(in);
    return make_laminate(dim, static_cast<int>(kv.num("axis")), kv.num("theta"),
                         static_cast<int>(kv.num("m")), kv.num_or("off", 0.0));
  }
  if (head == "polytope") {
    KvList kv = parse_kv(in);
    require(dim == 2, ErrorCode::invalid_argument,
            "polytope shapes are supported in dimension 2 only");
    const std::string* v = kv.find("v");
    require(v != nullptr, ErrorCode::invalid_argument,
            "polytope record: missing v=(x,y);... list");
    return make_polygon(parse_vertex_list(*v));
  }
  fail(ErrorCode::invalid_argument, "shape record: unknown shape '" + head + "'");
}

std::string format_shape(const ShapeSpec& s) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) {
          std::string out = "ball cx=" + fmt(v.center[0]) + " cy=" + fmt(v.center[1]);
          if (s.dim == 3) out += " cz=" + fmt(v.center[2]);
          return out + " r=" + fmt(v.radius);
        } else if constexpr (std::is_same_v<T, Laminate>) {
          std::string out = "laminate axis=" + std::to_string(v.axis) +
                            " theta=" + fmt(v.theta) + " m=" + std::to_string(v.stripes);
          if (v.offset != 0.0) out += " off=" + fmt(v.offset);
          return out;
        } else if constexpr (std::is_same_v<T, Polygon>) {
          std::string out = "polytope v=";
          for (size_t i = 0; i < v.vertices.size(); ++i) {
            if (i) out += ";";
            out += "(" + fmt(v.vertices[i][0]) + "," + fmt(v.vertices[i][1]) + ")";
          }
          return out;
        } else {
          return "complement " + format_shape(*v.inner);
        }
      },
      s.shape);
}

TorusGrid make_grid(int dim, int samples) {
  require(dim == 2 || dim == 3, ErrorCode::invalid_argument,
          "make_grid: dimension must be 2 or 3");
  require(samples >= 16 && samples <= 4096, ErrorCode::invalid_argument,
          "make_grid: N must lie in [16, 4096]");
  require((samples & (samples - 1)) == 0, ErrorCode::non_power_of_two,
          "make_grid: N must be a power of two");
  return TorusGrid{dim, samples};
}

}  // namespace gammalab
