#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/gaussian.hpp"
#include "solitonlab/scenarios.hpp"
#include "solitonlab/variational.hpp"

using namespace solitonlab;
using std::numbers::pi;

namespace {

const double kSqrtPi = std::sqrt(pi);

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

GaussianTerm normalized_ground_term() {
  const double a = 1.0 / (16.0 * pi);
  return {a, 0.0, 0.25 * std::log(2.0 * a / pi)};
}

}  // namespace

TEST_CASE("moment integrals of the standard Gaussian") {
  const ExponentTriple e{1.0, 0.0, 0.0};
  CHECK(close(moment_integral(0, e), kSqrtPi, 1e-15));
  CHECK(close(moment_integral(1, e), 0.0, 1e-15));
  CHECK(close(moment_integral(2, e), kSqrtPi / 2.0, 1e-15));
  CHECK(close(moment_integral(3, e), 0.0, 1e-15));
  CHECK(close(moment_integral(4, e), 3.0 * kSqrtPi / 4.0, 1e-15));
}

TEST_CASE("shifted moment matches closed form and quadrature") {
  const ExponentTriple e{2.0, 1.0, 0.0};
  const cplx expected = std::sqrt(pi / 2.0) * std::exp(1.0 / 8.0);
  CHECK(close(moment_integral(0, e), expected, 1e-14));
  const cplx quad = oracle::integrate([](double x) { return std::exp(-2.0 * x * x + x); }, -30, 30);
  CHECK(close(moment_integral(0, e), quad, 1e-12));
}

TEST_CASE("moment_integral rejects bad arguments") {
  CHECK_THROWS_AS(moment_integral(0, {0.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(moment_integral(0, {cplx(-1.0, 2.0), 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(moment_integral(5, {1.0, 0.0, 0.0}), UsageError);
  CHECK_THROWS_AS(moment_integral(-1, {1.0, 0.0, 0.0}), UsageError);
}

TEST_CASE("moments() agrees with moment_integral") {
  const ExponentTriple e{cplx(0.7, -0.3), cplx(0.4, 1.1), cplx(-0.2, 0.5)};
  const auto all = moments(e);
  for (int d = 0; d <= kMaxMoment; ++d) CHECK(close(all[d], moment_integral(d, e), 1e-15 * std::abs(all[0]) + 1e-300));
  const auto low = moments(e, 2);
  CHECK(low[3] == cplx(0.0));
  CHECK(low[4] == cplx(0.0));
}

TEST_CASE("product_exponent combines conjugated and plain factors") {
  const GaussianTerm unit{1.0, 0.0, 0.0};
  std::vector<GaussianTerm> one{unit};
  auto e = product_exponent(one, one);
  CHECK(e.a == cplx(2.0));
  CHECK(e.b == cplx(0.0));
  CHECK(e.c == cplx(0.0));

  std::vector<GaussianTerm> chirped{{cplx(1.0, 1.0), cplx(0.0, 1.0), 0.0}};
  e = product_exponent(chirped, {});
  CHECK(e.a == cplx(1.0, -1.0));
  CHECK(e.b == cplx(0.0, -1.0));
  CHECK(e.c == cplx(0.0));

  std::vector<GaussianTerm> two{unit, unit};
  e = product_exponent(two, two);
  CHECK(e.a == cplx(4.0));
  CHECK(e.b == cplx(0.0));
}

TEST_CASE("evaluate sums the terms") {
  const GaussianTerm unit{1.0, 0.0, 0.0};
  CHECK(close(evaluate(std::vector{unit}, 0.0), 1.0, 1e-15));
  CHECK(close(evaluate(std::vector{unit}, 1.0), std::exp(-1.0), 1e-15));
  CHECK(close(evaluate(std::vector{unit, unit}, 0.0), 2.0, 1e-15));
}

TEST_CASE("norm_squared of single Gaussians") {
  CHECK(norm_squared(std::vector<GaussianTerm>{{0.5, 0.0, 0.0}}) == doctest::Approx(kSqrtPi).epsilon(1e-14));
  const GaussianTerm normalized{0.5, 0.0, -0.25 * std::log(pi)};
  CHECK(norm_squared(std::vector{normalized}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm_squared(std::vector{normalized_ground_term()}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm of the single-Gaussian stationary state") {
  const auto st = stationary_state(1);
  CHECK(std::abs(norm_squared(st.state.psi) - 1.0) <= 1e-10);
}

TEST_CASE("second_derivative_factor") {
  auto q = second_derivative_factor({1.0, 0.0, 0.0});
  CHECK(q.c2 == cplx(4.0));
  CHECK(q.c1 == cplx(0.0));
  CHECK(q.c0 == cplx(-2.0));
  q = second_derivative_factor({0.5, 1.0, 0.0});
  CHECK(q.c2 == cplx(1.0));
  CHECK(q.c1 == cplx(-2.0));
  CHECK(q.c0 == cplx(0.0));
  q = second_derivative_factor({1.0, cplx(0.0, 1.0), 0.0});
  CHECK(q.c2 == cplx(4.0));
  CHECK(q.c1 == cplx(0.0, -4.0));
  CHECK(q.c0 == cplx(-3.0));
}

TEST_CASE("second_derivative_factor reproduces a finite-difference derivative") {
  const GaussianTerm g{cplx(0.3, 0.2), cplx(0.5, -0.7), cplx(0.1, 0.4)};
  const auto q = second_derivative_factor(g);
  const double h = 1e-4;
  for (double x : {-1.3, 0.0, 0.8, 2.1}) {
    const cplx fd = (oracle::term_value(g, x + h) - 2.0 * oracle::term_value(g, x) + oracle::term_value(g, x - h)) / (h * h);
    const cplx exact = (q.c2 * x * x + q.c1 * x + q.c0) * oracle::term_value(g, x);
    CHECK(std::abs(fd - exact) < 1e-6);
  }
}

TEST_CASE("energy of the single-Gaussian ground state") {
  CHECK(energy(std::vector{normalized_ground_term()}) == doctest::Approx(-1.0 / (16.0 * pi)).epsilon(1e-13));
  CHECK(std::abs(energy(std::vector{normalized_ground_term()}) + 0.0198944) < 1e-7);
  CHECK(energy(GaussianSum{}) == 0.0);
  CHECK(norm_squared(GaussianSum{}) == 0.0);
}

TEST_CASE("energy parts equal the kinetic and quartic integrals") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<GaussianTerm> psi{oracle::random_term(rng, 0.05, 2.0), oracle::random_term(rng, 0.05, 2.0)};
    const auto w = oracle::window(psi);
    const auto parts = energy_parts(psi);
    const auto kin = [&](double x) { return cplx(std::norm(oracle::sum_derivative(psi, x))); };
    const auto quartic = [&](double x) { return cplx(-0.5 * std::pow(std::norm(oracle::sum_value(psi, x)), 2)); };
    const double k_ref = oracle::integrate(kin, w.lo, w.hi).real();
    const double i_ref = oracle::integrate(quartic, w.lo, w.hi).real();
    CHECK(std::abs(parts.kinetic - k_ref) <= 1e-8 * std::abs(k_ref));
    CHECK(std::abs(parts.interaction - i_ref) <= 1e-8 * std::abs(i_ref));
    CHECK(parts.total() == doctest::Approx(energy(psi)).epsilon(1e-15));
  }
}

TEST_CASE("moments match quadrature for random exponents") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double ra = 0.05 * std::pow(100.0, u(rng));
    const ExponentTriple e{{ra, (2.0 * u(rng) - 1.0) * ra},
                           {4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0},
                           {2.0 * u(rng) - 1.0, 6.0 * u(rng) - 3.0}};
    const auto w = oracle::window(e.a, e.b);
    for (int d = 0; d <= kMaxMoment; ++d) {
      const auto f = [&](double x) { return std::pow(x, d) * oracle::exponent_value(e.a, e.b, e.c, x); };
      const cplx ref = oracle::integrate(f, w.lo, w.hi);
      const double scale = oracle::integrate_abs(f, w.lo, w.hi);
      CHECK(std::abs(moment_integral(d, e) - ref) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("pair brackets are Hermitian") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const GaussianTerm gk = oracle::random_term(rng, 0.025, 2.5);
    const GaussianTerm gn = oracle::random_term(rng, 0.025, 2.5);
    const auto kn = moments(pair_exponent(gk, gn));
    const auto nk = moments(pair_exponent(gn, gk));
    for (int d = 0; d <= kMaxMoment; ++d) CHECK(std::abs(kn[d] - std::conj(nk[d])) <= 1e-13 * std::abs(kn[d]));
  }
}

TEST_CASE("term position and momentum") {
  const double a = 1.0 / (16.0 * pi);
  const GaussianTerm g{a, cplx(2.0 * a * 10.0, 1.0), 0.0};
  CHECK(term_position(g) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(term_momentum(g) == doctest::Approx(1.0).epsilon(1e-14));

  // Momentum of a chirped term equals <-i d/dx> / <1> by quadrature.
  const GaussianTerm c{cplx(0.2, 0.15), cplx(0.6, 0.4), 0.0};
  const std::vector<GaussianTerm> psi{c};
  const auto w = oracle::window(psi);
  const cplx num = oracle::integrate(
      [&](double x) { return std::conj(oracle::term_value(c, x)) * cplx(0, -1) * oracle::term_derivative(c, x); },
      w.lo, w.hi);
  CHECK(term_momentum(c) == doctest::Approx(num.real() / norm_squared(psi)).epsilon(1e-10));
}

TEST_CASE("translation covariance") {
  const auto st = stationary_state(3);
  const auto& psi = st.state.psi;
  const auto shifted = boost_translate(psi, 7.5, 0.0, 0.0);
  for (double x : {-3.0, 0.0, 4.0, 7.5, 12.0}) {
    CHECK(std::abs(evaluate(shifted, x) - evaluate(psi, x - 7.5)) <= 1e-14);
  }
  CHECK(std::abs(norm_squared(shifted) - norm_squared(psi)) <= 1e-12);
  CHECK(std::abs(energy(shifted) - energy(psi)) <= 1e-12);
}

TEST_CASE("boost covariance adds p^2 to the energy") {
  const auto st = stationary_state(2);
  for (double p : {-1.5, 0.05, 1.0}) {
    const auto boosted = boost_translate(st.state.psi, -3.0, p, 0.4);
    CHECK(std::abs(energy(boosted) - (st.energy + p * p)) <= 1e-10);
  }
}
