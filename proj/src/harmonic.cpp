#include "hyptile/harmonic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "hyptile/errors.hpp"

namespace hyptile {

namespace {

void validate(const Rect& r) {
  if (r.x1 < r.x0) throw DomainError("rectangle needs x0 <= x1");
  if (!(r.y0 > 0) || !(r.y1 > r.y0)) throw DomainError("rectangle needs 0 < y0 < y1");
}

}  // namespace

double LogMass::value() const { return coeff == 0 ? 0.0 : to_double(coeff) * log_of(ratio); }

LogMass cylinder_mass_exact(const Rational& b, const Rect& rect) {
  validate(rect);
  if (b < 0) throw DomainError("density coefficient must be nonnegative");
  return LogMass{b * (rect.x1 - rect.x0), rect.y1 / rect.y0};
}

double cylinder_mass(const Rational& b, const Rect& rect) { return cylinder_mass_exact(b, rect).value(); }

Rect transport(const AffineMap& g, const Rect& r) {
  validate(r);
  if (!(g.a > 0)) throw DomainError("affine map must have a > 0");
  return Rect{g.a * r.x0 + g.b, g.a * r.x1 + g.b, g.a * r.y0, g.a * r.y1};
}

TransportCheck transport_scaling_check(const Rational& b, const Rect& rect, const AffineMap& g) {
  const LogMass original = cylinder_mass_exact(b, rect);
  TransportCheck out;
  out.lhs = cylinder_mass_exact(b, transport(g, rect));
  out.rhs = LogMass{alpha(g) * original.coeff, original.ratio};
  out.equal = out.lhs == out.rhs || (out.lhs.coeff == 0 && out.rhs.coeff == 0);
  // Both masses share the log factor ln(y1 / y0), so the ratio is exact.
  out.scale = original.coeff == 0 ? Rational(1) : out.lhs.coeff / original.coeff;
  return out;
}

double herglotz_evaluate(const BoundaryAtoms& atoms, double x, double y) {
  if (!(y > 0.0)) throw DomainError("Herglotz representation needs y > 0");
  double h = atoms.slope * y;
  for (const auto& atom : atoms.atoms) {
    const double dx = atom.location - x;
    h += atom.mass * y / (dx * dx + y * y);
  }
  return h;
}

BoundaryRecovery boundary_recover(const std::function<double(double, double)>& h, double a, double b, double y_probe) {
  if (!(y_probe > 0.0)) throw DomainError("probe height must be positive");
  if (!(a < b)) throw DomainError("interval needs a < b");
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0, l1 = 0.0;
  constexpr unsigned max_depth = 20;
  auto integrand = [&](double x) {
    const double v = h(x, y_probe);
    if (!std::isfinite(v)) throw NumericError("integrand is not finite at x = " + std::to_string(x), v);
    return v;
  };
  const double integral = gauss_kronrod<double, 61>::integrate(integrand, a, b, max_depth, 1e-10, &error, &l1);
  if (!std::isfinite(integral) || error > 1e-6 * std::max(1.0, l1))
    throw NumericError("boundary quadrature did not converge", error);
  return BoundaryRecovery{integral / std::numbers::pi, error / std::numbers::pi};
}

BoundaryRecovery boundary_recover(const BoundaryAtoms& atoms, double a, double b, double y_probe) {
  return boundary_recover([&atoms](double x, double y) { return herglotz_evaluate(atoms, x, y); }, a, b, y_probe);
}

}  // namespace hyptile
