#pragma once

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gammalab/geometry.hpp"

namespace gammalab {

enum class PerimeterMethod { analytic, slope_fit, l1_count };

struct PerimeterEstimate {
  double value = 0.0;
  PerimeterMethod method = PerimeterMethod::analytic;
  double uncertainty = 0.0;  // analytic estimates carry 0
};

struct ShapeSpec;

/// Ball of radius < 1/2 around `center` (torus metric).
struct Ball {
  std::array<double, 3> center{0.5, 0.5, 0.5};
  double radius = 0.2;
};

/// m equally spaced stripes of total width theta wrapping one axis.
/// Stripe i occupies [i/m + offset, i/m + theta/m + offset) along `axis`
/// (1-based); the offset is a phase used for translation tests.
struct Laminate {
  int axis = 1;
  double theta = 0.5;
  int stripes = 1;
  double offset = 0.0;
};

/// Closed polygon inside the fundamental domain [0,1)^2 (n = 2 only).
/// An empty vertex list denotes the empty set.
struct Polygon {
  std::vector<std::array<double, 2>> vertices;
};

struct Complement {
  std::shared_ptr<const ShapeSpec> inner;
};

struct ShapeSpec {
  int dim = 2;
  std::variant<Ball, Laminate, Polygon, Complement> shape;
};

ShapeSpec make_ball(int dim, std::array<double, 3> center, double radius);
ShapeSpec make_laminate(int dim, int axis, double theta, int stripes,
                        double offset = 0.0);
ShapeSpec make_polygon(std::vector<std::array<double, 2>> vertices);
ShapeSpec make_complement(ShapeSpec inner);

/// Axis-aligned square of side `side` centered at (cx, cy).
ShapeSpec make_square(double cx, double cy, double side);

/// Laminate sequence from the non-compactness construction: k stripes of
/// total width theta, perimeter 2k.
ShapeSpec laminate_sequence(int k, double theta);

/// Exact Lebesgue measure in [0, 1].
double shape_volume(const ShapeSpec& s);

/// Exact perimeter (method = analytic, uncertainty 0).
PerimeterEstimate shape_perimeter(const ShapeSpec& s);

/// Point membership test; `point` has unit-torus coordinates in [0,1).
bool shape_contains(const ShapeSpec& s, const std::array<double, 3>& point);

/// Shape translated by `delta` (unit torus, wraps where representable).
ShapeSpec shape_translate(const ShapeSpec& s, const std::array<double, 3>& delta);

/// min{theta, 1-theta} threshold below which the limit-energy minimizer is a
/// ball: (2/n)^{n/(n+1)} * omega_n^{-1/(n-1)}.
double ball_laminate_threshold(int dim);

/// Plain-text record round-trip, e.g. "ball cx=0.5 cy=0.5 r=0.2".
ShapeSpec parse_shape(const std::string& line, int dim);
std::string format_shape(const ShapeSpec& s);

}  // namespace gammalab
