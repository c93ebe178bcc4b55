#pragma once

// Shared generators and numeric oracles for the test suites.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "pdelyap/polymat.hpp"

namespace pdelyap::testing {

inline Rational random_rational(std::mt19937_64& rng, int num_range = 5, int den_range = 4) {
  std::uniform_int_distribution<int> num(-num_range, num_range);
  std::uniform_int_distribution<int> den(1, den_range);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

/// Dense random polynomial in the variables listed, total degree <= degree.
inline RPoly random_poly(std::mt19937_64& rng, const std::vector<Var>& vars, int degree,
                         double density = 0.7) {
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  std::vector<RPoly::Term> terms;
  std::function<void(std::size_t, Monomial, int)> walk = [&](std::size_t k, Monomial m, int left) {
    if (k == vars.size()) {
      if (keep(rng) < density) terms.push_back({m, random_rational(rng)});
      return;
    }
    for (int e = 0; e <= left; ++e) {
      Monomial n = m;
      n.exp[static_cast<int>(vars[k])] = static_cast<std::uint8_t>(e);
      walk(k + 1, n, left - e);
    }
  };
  walk(0, Monomial{}, degree);
  return RPoly::from_terms(std::move(terms));
}

inline RMatPoly random_matpoly(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                               const std::vector<Var>& vars, int degree) {
  RMatPoly m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_poly(rng, vars, degree);
  return m;
}

/// 20-point Gauss-Legendre quadrature of f over [lo, hi].
inline double gauss_legendre(const std::function<double(double)>& f, double lo, double hi) {
  static const std::array<double, 10> x = {
      0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
      0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
      0.9639719272779138, 0.9931285991850949};
  static const std::array<double, 10> w = {
      0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
      0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
      0.0406014298003869, 0.0176140071391521};
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += w[k] * (f(c - h * x[k]) + f(c + h * x[k]));
  return acc * h;
}

inline std::array<double, kNumVars> point(double s, double theta = 0, double eta = 0, double zeta = 0,
                                          double nu = 0) {
  return {s, theta, eta, zeta, nu};
}

}  // namespace pdelyap::testing
