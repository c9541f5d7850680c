#pragma once

// Closed-form algebra of complex Gaussians exp(-alpha x^2 + beta x + gamma).
//
// Every bracket that appears in the variational equations (overlaps, kinetic
// terms, quartic interaction terms, moments up to x^4) reduces to a single
// Gaussian exponent and an integral of x^d against it, so the whole module is
// built on moment_integral() and product_exponent().

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace solitonlab {

using cplx = std::complex<double>;

/// One trial-function term exp(-alpha x^2 + beta x + gamma).
/// gamma carries log-amplitude and phase together.
struct GaussianTerm {
  cplx alpha;
  cplx beta;
  cplx gamma;

  bool normalizable() const noexcept { return alpha.real() > 0.0; }
};

using GaussianSum = std::vector<GaussianTerm>;

/// exp(-a x^2 + b x + c), the exponent of a product of Gaussians.
struct ExponentTriple {
  cplx a;
  cplx b;
  cplx c;
};

inline constexpr int kMaxMoment = 4;

/// Integral over the real line of x^d exp(-a x^2 + b x + c), d in [0, 4].
/// Throws DomainError if Re(a) <= 0 and UsageError for d outside the range.
cplx moment_integral(int d, const ExponentTriple& e);

/// All moments M_0..M_{max_d} at once (entries above max_d are zero).
std::array<cplx, kMaxMoment + 1> moments(const ExponentTriple& e, int max_d = kMaxMoment);

/// Exponent of prod conj(g_k) * prod g_n.
ExponentTriple product_exponent(std::span<const GaussianTerm> conjugated,
                                std::span<const GaussianTerm> plain);

/// Two-factor shortcut for conj(g_k) * g_n.
inline ExponentTriple pair_exponent(const GaussianTerm& conjugated, const GaussianTerm& plain) {
  return {std::conj(conjugated.alpha) + plain.alpha, std::conj(conjugated.beta) + plain.beta,
          std::conj(conjugated.gamma) + plain.gamma};
}

cplx evaluate(std::span<const GaussianTerm> psi, double x);

/// <psi|psi>. Throws InternalError if the Hermitian double sum has an
/// imaginary residue above 1e-12 of its scale.
double norm_squared(std::span<const GaussianTerm> psi);

/// d^2/dx^2 g = (c2 x^2 + c1 x + c0) g.
struct QuadraticCoefficients {
  cplx c2;
  cplx c1;
  cplx c0;
};

QuadraticCoefficients second_derivative_factor(const GaussianTerm& g);

struct EnergyParts {
  double kinetic;      // <psi| -d^2/dx^2 |psi>
  double interaction;  // -1/2 integral |psi|^4
  double total() const noexcept { return kinetic + interaction; }
};

EnergyParts energy_parts(std::span<const GaussianTerm> psi);

/// Mean-field energy <-d^2/dx^2 - |psi|^2 / 2>. Not divided by the norm.
double energy(std::span<const GaussianTerm> psi);

/// Center of |g|^2, Re(beta) / (2 Re(alpha)).
double term_position(const GaussianTerm& g);

/// Expectation of -i d/dx for a single term,
/// Im(beta) - Im(alpha) Re(beta) / Re(alpha); equals Im(beta) for real alpha.
double term_momentum(const GaussianTerm& g);

}  // namespace solitonlab
