// Leafwise masses of the measure b * y dx dy / y^2 on boxes, their behaviour
// under the affine group, and positive harmonic functions given by a slope
// and boundary atoms.
#ifndef HYPTILE_HARMONIC_HPP
#define HYPTILE_HARMONIC_HPP

#include <functional>
#include <vector>

#include "hyptile/exact.hpp"
#include "hyptile/geometry.hpp"

namespace hyptile {

/// [x0, x1] x [y0, y1] with x0 <= x1 and 0 < y0 < y1.
struct Rect {
  Rational x0, x1, y0, y1;
};

/// coeff * ln(ratio), kept symbolic so masses compare exactly.
struct LogMass {
  Rational coeff;
  Rational ratio;
  double value() const;
  friend bool operator==(const LogMass&, const LogMass&) = default;
};

/// Integral of b dx dy / y over the rectangle: b (x1 - x0) ln(y1 / y0).
LogMass cylinder_mass_exact(const Rational& b, const Rect& rect);
double cylinder_mass(const Rational& b, const Rect& rect);

/// Image of the rectangle under z -> a z + b.
Rect transport(const AffineMap& g, const Rect& rect);

struct TransportCheck {
  LogMass lhs;  ///< mass of the transported rectangle
  LogMass rhs;  ///< alpha(g) times the mass of the rectangle
  bool equal = false;
  Rational scale;  ///< lhs / original mass, exactly alpha(g) when equal
};

TransportCheck transport_scaling_check(const Rational& b, const Rect& rect, const AffineMap& g);

struct BoundaryAtom {
  double location;
  double mass;
};

/// H(x, y) = slope * y + sum_k mass_k * y / ((s_k - x)^2 + y^2).
struct BoundaryAtoms {
  std::vector<BoundaryAtom> atoms;
  double slope = 0.0;
};

double herglotz_evaluate(const BoundaryAtoms& atoms, double x, double y);

struct BoundaryRecovery {
  double mass;   ///< (1 / pi) * integral of H(x, y_probe) over [a, b]
  double error;  ///< quadrature error estimate, same units
};

/// Boundary mass of [a, b] read from H at height y_probe. NumericError when
/// the adaptive quadrature does not reach its tolerance.
BoundaryRecovery boundary_recover(const std::function<double(double, double)>& h, double a, double b, double y_probe);
BoundaryRecovery boundary_recover(const BoundaryAtoms& atoms, double a, double b, double y_probe);

}  // namespace hyptile

#endif  // HYPTILE_HARMONIC_HPP
