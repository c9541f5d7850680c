#include "solitonlab/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "solitonlab/errors.hpp"

namespace solitonlab {
namespace {

constexpr double kHermiticityTolerance = 1e-12;

// Hermitian double sums must come out real; `scale` is the sum of the
// magnitudes of the summands so that cancellation does not trip the check.
double checked_real(cplx value, double scale, const char* what) {
  if (std::abs(value.imag()) > kHermiticityTolerance * scale) {
    throw InternalError(std::string(what) + ": Hermitian form has imaginary residue " +
                        format_real(value.imag()) + " (real part " +
                        format_real(value.real()) + ")");
  }
  return value.real();
}

}  // namespace

std::array<cplx, kMaxMoment + 1> moments(const ExponentTriple& e, int max_d) {
  if (max_d < 0 || max_d > kMaxMoment) {
    throw UsageError("moment order " + std::to_string(max_d) + " outside [0, 4]");
  }
  if (!(e.a.real() > 0.0)) {
    throw DomainError("moment integral requires Re(a) > 0, got " + format_real(e.a.real()));
  }
  std::array<cplx, kMaxMoment + 1> m{};
  // Principal branch; Re(a) > 0 keeps pi/a away from the cut.
  m[0] = std::sqrt(std::numbers::pi / e.a) * std::exp(e.b * e.b / (4.0 * e.a) + e.c);
  // Integration by parts: 2a M_{d+1} = b M_d + d M_{d-1}.
  const cplx inv_2a = 1.0 / (2.0 * e.a);
  if (max_d >= 1) m[1] = e.b * m[0] * inv_2a;
  for (int d = 1; d < max_d; ++d) {
    m[d + 1] = (e.b * m[d] + static_cast<double>(d) * m[d - 1]) * inv_2a;
  }
  return m;
}

cplx moment_integral(int d, const ExponentTriple& e) {
  if (d < 0 || d > kMaxMoment) {
    throw UsageError("moment order " + std::to_string(d) + " outside [0, 4]");
  }
  return moments(e, d)[d];
}

ExponentTriple product_exponent(std::span<const GaussianTerm> conjugated,
                                std::span<const GaussianTerm> plain) {
  if (conjugated.empty() && plain.empty()) {
    throw UsageError("product_exponent needs at least one factor");
  }
  ExponentTriple t{};
  for (const auto& g : conjugated) {
    t.a += std::conj(g.alpha);
    t.b += std::conj(g.beta);
    t.c += std::conj(g.gamma);
  }
  for (const auto& g : plain) {
    t.a += g.alpha;
    t.b += g.beta;
    t.c += g.gamma;
  }
  return t;
}

cplx evaluate(std::span<const GaussianTerm> psi, double x) {
  cplx sum{};
  for (const auto& g : psi) sum += std::exp(-g.alpha * x * x + g.beta * x + g.gamma);
  return sum;
}

double norm_squared(std::span<const GaussianTerm> psi) {
  cplx sum{};
  double scale = 0.0;
  for (const auto& gk : psi) {
    for (const auto& gn : psi) {
      const cplx m0 = moments(pair_exponent(gk, gn), 0)[0];
      sum += m0;
      scale += std::abs(m0);
    }
  }
  return checked_real(sum, scale, "norm_squared");
}

QuadraticCoefficients second_derivative_factor(const GaussianTerm& g) {
  return {4.0 * g.alpha * g.alpha, -4.0 * g.alpha * g.beta, g.beta * g.beta - 2.0 * g.alpha};
}

EnergyParts energy_parts(std::span<const GaussianTerm> psi) {
  cplx kinetic{};
  double kinetic_scale = 0.0;
  for (const auto& gk : psi) {
    for (const auto& gn : psi) {
      const auto m = moments(pair_exponent(gk, gn), 2);
      const auto q = second_derivative_factor(gn);
      const cplx term = -(q.c2 * m[2] + q.c1 * m[1] + q.c0 * m[0]);
      kinetic += term;
      kinetic_scale += std::abs(term);
    }
  }

  // |psi|^4 = sum_{k,l,m,n} conj(g_k) conj(g_l) g_m g_n.
  cplx quartic{};
  double quartic_scale = 0.0;
  const std::size_t n = psi.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      const ExponentTriple conj_pair{std::conj(psi[k].alpha + psi[l].alpha),
                                     std::conj(psi[k].beta + psi[l].beta),
                                     std::conj(psi[k].gamma + psi[l].gamma)};
      for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t j = 0; j < n; ++j) {
          const ExponentTriple e{conj_pair.a + psi[m].alpha + psi[j].alpha,
                                 conj_pair.b + psi[m].beta + psi[j].beta,
                                 conj_pair.c + psi[m].gamma + psi[j].gamma};
          const cplx m0 = moments(e, 0)[0];
          quartic += m0;
          quartic_scale += std::abs(m0);
        }
      }
    }
  }
  return {checked_real(kinetic, kinetic_scale, "energy (kinetic)"),
          -0.5 * checked_real(quartic, quartic_scale, "energy (interaction)")};
}

double energy(std::span<const GaussianTerm> psi) { return energy_parts(psi).total(); }

double term_position(const GaussianTerm& g) { return g.beta.real() / (2.0 * g.alpha.real()); }

double term_momentum(const GaussianTerm& g) {
  return g.beta.imag() - g.alpha.imag() * g.beta.real() / g.alpha.real();
}

}  // namespace solitonlab
