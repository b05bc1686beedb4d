#ifndef TKTP_COPULA_HPP
#define TKTP_COPULA_HPP

#include <cstdint>
#include <vector>

#include "tktp/sample.hpp"

namespace tktp::copula {

enum class Family { frank, gaussian, independence };
enum class StrengthKind { kendall_tau, spearman_rho, native };

// A bivariate copula with a target association strength. The strength can be
// given as the population Kendall tau, Spearman rho (Gaussian only), or the
// family's native parameter (Frank theta / Gaussian latent correlation).
struct CopulaSpec {
    Family family = Family::independence;
    StrengthKind kind = StrengthKind::native;
    double value = 0.0;

    void validate() const;  // throws ArgumentError on out-of-range strengths
};

// First Debye function D1(x) = (1/x) Int_0^x t/(e^t - 1) dt, by adaptive
// Gauss-Legendre quadrature to ~1e-10 relative accuracy.
double debye1(double x);

// Population Kendall tau of the Frank copula: 1 - (4/theta)(1 - D1(theta)).
double frank_tau_from_theta(double theta);

// Inverts the above; |tau(theta) - tau| < 1e-8. tau must be in (0,1) in
// absolute value; for tau = 0 use the independence family instead.
double frank_theta_from_tau(double tau);

double gaussian_r_from_tau(double tau);  // sin(pi tau / 2)
double gaussian_r_from_rho(double rho);  // 2 sin(pi rho / 6)
double gaussian_tau_from_r(double r);
double gaussian_rho_from_r(double r);
double gaussian_r_from(StrengthKind kind, double value);

// Family-native parameter implied by the spec (Frank theta, Gaussian r).
double native_parameter(const CopulaSpec& spec);

// n draws with uniform (0,1) margins; ids 1..n. Frank uses closed-form
// conditional inversion, Gaussian maps a correlated normal pair through the
// normal CDF. Deterministic in (spec, n, seed).
Sample draw(const CopulaSpec& spec, std::int32_t n, std::uint64_t seed);

struct MixtureComponent {
    CopulaSpec spec;
    double weight = 0.0;
};

// Mixture of one or more associated components with the independence copula
// absorbing the remaining mass. Draws are labeled by source so coverage can
// be scored downstream.
struct MixtureSpec {
    std::vector<MixtureComponent> components;
    std::int32_t n = 0;

    MixtureSpec() = default;
    MixtureSpec(CopulaSpec component, double p, std::int32_t n_draws);

    void validate() const;
};

struct LabeledSample {
    Sample sample;
    std::vector<std::int32_t> label;  // 0 = independence, else 1-based component index
};

LabeledSample sample_mixture(const MixtureSpec& m, std::uint64_t seed);

}  // namespace tktp::copula

#endif
