#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyptile/errors.hpp"
#include "hyptile/harmonic.hpp"

using namespace hyptile;

namespace {

// Closed-form Poisson integral: (1/pi) int_a^b y / ((s - x)^2 + y^2) dx.
double poisson_mass(double s, double a, double b, double y) {
  return (std::atan((b - s) / y) - std::atan((a - s) / y)) / std::numbers::pi;
}

Rational random_dyadic(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<long> m(-4096, 4096);
  std::uniform_int_distribution<int> e(lo, hi);
  return Rational(m(rng)) * pow2_rational(e(rng));
}

}  // namespace

TEST_CASE("cylinder masses") {
  const Rect unit{0, 1, 1, 2};
  CHECK(cylinder_mass(1, unit) == doctest::Approx(std::log(2.0)));
  CHECK(cylinder_mass(0, unit) == 0.0);
  CHECK(cylinder_mass(Rational(3, 2), Rect{-1, 3, Rational(1, 4), 8}) == doctest::Approx(1.5 * 4 * std::log(32.0)));
  CHECK(cylinder_mass(1, transport(AffineMap::dilation(), unit)) == doctest::Approx(2 * std::log(2.0)));
  CHECK_THROWS_AS(cylinder_mass(1, Rect{1, 0, 1, 2}), DomainError);
  CHECK_THROWS_AS(cylinder_mass(1, Rect{0, 1, 0, 2}), DomainError);
  CHECK_THROWS_AS(cylinder_mass(1, Rect{0, 1, 2, 2}), DomainError);
}

TEST_CASE("transport scaling") {
  const Rect unit{0, 1, 1, 2};
  auto r = transport_scaling_check(1, unit, AffineMap::dilation());
  CHECK(r.equal);
  CHECK(r.lhs.value() == doctest::Approx(2 * std::log(2.0)));
  CHECK(r.rhs.value() == doctest::Approx(2 * std::log(2.0)));
  CHECK(r.scale == 2);

  auto s = transport_scaling_check(1, unit, AffineMap::translation());
  CHECK(s.equal);
  CHECK(s.scale == 1);
  CHECK(s.lhs.value() == doctest::Approx(std::log(2.0)));

  auto h = transport_scaling_check(1, unit, AffineMap{Rational(1, 2), 0});
  CHECK(h.equal);
  CHECK(h.scale == Rational(1, 2));

  std::mt19937_64 rng(17);
  for (int k = 0; k < 100; ++k) {
    AffineMap g{pow2_rational(std::uniform_int_distribution<int>(-12, 12)(rng)), random_dyadic(rng, -8, 4)};
    Rational x0 = random_dyadic(rng, -6, 2), y0 = abs(random_dyadic(rng, -6, 2)) + Rational(1, 64);
    Rect rect{x0, x0 + abs(random_dyadic(rng, -6, 2)), y0, y0 + abs(random_dyadic(rng, -6, 2)) + Rational(1, 128)};
    auto c = transport_scaling_check(Rational(k + 1, 7), rect, g);
    CHECK(c.equal);
    CHECK(c.scale == alpha(g));
    // numerically the closed forms agree as well
    CHECK(c.lhs.value() == doctest::Approx(to_double(alpha(g)) * cylinder_mass(Rational(k + 1, 7), rect)));
  }
}

TEST_CASE("Herglotz evaluation") {
  BoundaryAtoms slope_only{{}, 2.0};
  CHECK(herglotz_evaluate(slope_only, 0.3, 1.7) == doctest::Approx(3.4));
  BoundaryAtoms atom{{{0.0, 1.0}}, 0.0};
  CHECK(herglotz_evaluate(atom, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(herglotz_evaluate(BoundaryAtoms{}, 5.0, 2.0) == 0.0);
  CHECK_THROWS_AS(herglotz_evaluate(atom, 0.0, 0.0), DomainError);
}

TEST_CASE("Herglotz functions are harmonic") {
  BoundaryAtoms h{{{0.0, 1.0}, {1.5, 0.3}, {-2.0, 2.5}}, 0.7};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ux(-3, 3), uy(0.5, 3);
  for (int k = 0; k < 50; ++k) {
    const double x = ux(rng), y = uy(rng);
    double previous = 0.0;
    for (double step : {1e-2, 5e-3}) {
      const double lap = (herglotz_evaluate(h, x + step, y) + herglotz_evaluate(h, x - step, y) +
                          herglotz_evaluate(h, x, y + step) + herglotz_evaluate(h, x, y - step) -
                          4 * herglotz_evaluate(h, x, y)) /
                         (step * step) * y * y;
      // O(h^2): halving the step quarters the residual (up to rounding)
      if (previous != 0.0) CHECK(std::abs(lap) <= std::abs(previous) / 3.0 + 1e-6);
      CHECK(std::abs(lap) < 1e-2);
      previous = lap;
    }
  }
}

TEST_CASE("boundary recovery") {
  BoundaryAtoms atom{{{0.0, 1.0}}, 0.0};
  auto r = boundary_recover(atom, -1, 1, 1e-4);
  CHECK(r.mass == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.mass == doctest::Approx(poisson_mass(0.0, -1, 1, 1e-4)).epsilon(1e-9));

  BoundaryAtoms far{{{5.0, 1.0}}, 0.0};
  CHECK(boundary_recover(far, -1, 1, 1e-4).mass < 1e-4);

  BoundaryAtoms slope{{}, 3.0};
  double previous = 1.0;
  for (double y : {1e-1, 1e-2, 1e-3, 1e-4}) {
    auto s = boundary_recover(slope, -1, 1, y);
    CHECK(s.mass == doctest::Approx(3.0 * y * 2.0 / std::numbers::pi));
    CHECK(s.mass < previous);
    previous = s.mass;
  }
  CHECK(previous < 1e-3);

  BoundaryAtoms several{{{-0.5, 0.25}, {0.2, 1.5}, {0.9, 0.75}, {3.0, 4.0}}, 1.0};
  auto m = boundary_recover(several, -1, 1, 1e-4);
  CHECK(m.mass == doctest::Approx(2.5).epsilon(0.02));
  double oracle = 2.0 * 1e-4 / std::numbers::pi;
  for (const auto& a : several.atoms) oracle += a.mass * poisson_mass(a.location, -1, 1, 1e-4);
  CHECK(m.mass == doctest::Approx(oracle).epsilon(1e-9));

  CHECK_THROWS_AS(boundary_recover(atom, 1, -1, 1e-4), DomainError);
  CHECK_THROWS_AS(boundary_recover(atom, -1, 1, 0.0), DomainError);
  auto nan = [](double, double) { return std::nan(""); };
  CHECK_THROWS_AS(boundary_recover(nan, -1, 1, 1e-4), NumericError);
}
