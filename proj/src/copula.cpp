#include "tktp/copula.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tktp/errors.hpp"
#include "tktp/rng.hpp"

namespace tktp::copula {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGlPoints = 15;
constexpr double kGlNode[kGlPoints] = {
    0.0000000000000000,  -0.2011940939974345, 0.2011940939974345,  -0.3941513470775634,
    0.3941513470775634,  -0.5709721726085388, 0.5709721726085388,  -0.7244177313601701,
    0.7244177313601701,  -0.8482065834104272, 0.8482065834104272,  -0.9372733924007060,
    0.9372733924007060,  -0.9879925180204854, 0.9879925180204854};
constexpr double kGlWeight[kGlPoints] = {
    0.2025782419255613, 0.1984314853271116, 0.1984314853271116, 0.1861610000155622,
    0.1861610000155622, 0.1662692058169939, 0.1662692058169939, 0.1395706779261543,
    0.1395706779261543, 0.1071592204671719, 0.1071592204671719, 0.0703660474881081,
    0.0703660474881081, 0.0307532419961173, 0.0307532419961173};

// t / (e^t - 1), the Debye integrand, with its removable singularity at 0.
double debye_integrand(double t) {
    if (t == 0.0) return 1.0;
    return t / std::expm1(t);
}

double gl_panel(double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < kGlPoints; ++i)
        acc += kGlWeight[i] * debye_integrand(mid + half * kGlNode[i]);
    return acc * half;
}

double adaptive_gl(double a, double b, double whole, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl_panel(a, mid);
    const double right = gl_panel(mid, b);
    if (depth > 40 || std::abs(left + right - whole) <= tol * std::abs(left + right))
        return left + right;
    return adaptive_gl(a, mid, left, tol, depth + 1) + adaptive_gl(mid, b, right, tol, depth + 1);
}

// Frank conditional inverse: v with F(v | u) = t. Stable positive-term form
//   e^{-theta v} = (A(1-t) + t e^{-theta}) / (A(1-t) + t),  A = e^{-theta u},
// evaluated in the log domain for large theta to avoid underflow.
double frank_conditional_v(double theta, double u, double t) {
    if (theta > 35.0) {
        const double la = -theta * u + std::log1p(-t);  // log(A(1-t))
        const double lt = std::log(t);
        auto logsumexp = [](double x, double y) {
            const double m = std::max(x, y);
            return m + std::log1p(std::exp(std::min(x, y) - m));
        };
        const double log_num = logsumexp(la, lt - theta);
        const double log_den = logsumexp(la, lt);
        return -(log_num - log_den) / theta;
    }
    const double a = std::exp(-theta * u);
    const double num = a * (1.0 - t) + t * std::exp(-theta);
    const double den = a * (1.0 - t) + t;
    return -std::log(num / den) / theta;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

// One (u, v) pair for a resolved family/native parameter. Every family
// consumes exactly two uniforms.
void draw_pair(Family family, double param, Rng& rng, double& u, double& v) {
    switch (family) {
        case Family::independence:
            u = rng.next_open_double();
            v = rng.next_open_double();
            return;
        case Family::frank: {
            u = rng.next_open_double();
            const double t = rng.next_open_double();
            if (param > 0.0) {
                v = frank_conditional_v(param, u, t);
            } else {
                // (U, 1-V) under theta ~ (U, V) under -theta.
                v = 1.0 - frank_conditional_v(-param, u, t);
            }
            return;
        }
        case Family::gaussian: {
            const auto [z1, z2] = rng.next_normal_pair();
            const double w = param * z1 + std::sqrt(1.0 - param * param) * z2;
            u = norm_cdf(z1);
            v = norm_cdf(w);
            return;
        }
    }
    throw ArgumentError("draw_pair: unknown family");
}

constexpr std::uint64_t kDrawStream = 0xc0b1a5a17e3d9f41ULL;

}  // namespace

void CopulaSpec::validate() const {
    switch (family) {
        case Family::independence:
            return;
        case Family::frank:
            if (kind == StrengthKind::kendall_tau) {
                if (!(std::abs(value) > 0.0 && std::abs(value) < 1.0))
                    throw ArgumentError("frank: kendall tau must be in (-1,1) and nonzero");
            } else if (kind == StrengthKind::native) {
                if (value == 0.0)
                    throw ArgumentError("frank: theta must be nonzero (use independence)");
            } else {
                throw ArgumentError("frank: strength must be kendall-tau or native theta");
            }
            return;
        case Family::gaussian:
            if (kind == StrengthKind::native || kind == StrengthKind::spearman_rho ||
                kind == StrengthKind::kendall_tau) {
                if (!(std::abs(value) < 1.0))
                    throw ArgumentError("gaussian: strength must be in (-1,1)");
            }
            return;
    }
}

double debye1(double x) {
    if (x == 0.0) return 1.0;
    if (x < 0.0) return debye1(-x) + 0.5 * x;  // D1(-x) = D1(x) + x/2
    const double integral = adaptive_gl(0.0, x, gl_panel(0.0, x), 1e-12, 0);
    return integral / x;
}

double frank_tau_from_theta(double theta) {
    if (theta == 0.0) return 0.0;
    if (theta < 0.0) return -frank_tau_from_theta(-theta);
    return 1.0 - (4.0 / theta) * (1.0 - debye1(theta));
}

double frank_theta_from_tau(double tau) {
    if (tau == 0.0)
        throw ArgumentError("frank_theta_from_tau: tau = 0 is the independence copula");
    if (!(std::abs(tau) < 1.0))
        throw ArgumentError("frank_theta_from_tau: |tau| must be < 1");
    const double target = std::abs(tau);
    double lo = 1e-9, hi = 1.0;
    while (frank_tau_from_theta(hi) < target) {
        hi *= 2.0;
        if (hi > 1e6) throw InternalError("frank_theta_from_tau: bracket failed");
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double f = frank_tau_from_theta(mid) - target;
        if (std::abs(f) < 1e-9) break;
        if (f < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return tau > 0.0 ? mid : -mid;
}

double gaussian_r_from_tau(double tau) { return std::sin(kPi * tau / 2.0); }
double gaussian_r_from_rho(double rho) { return 2.0 * std::sin(kPi * rho / 6.0); }
double gaussian_tau_from_r(double r) { return 2.0 * std::asin(r) / kPi; }
double gaussian_rho_from_r(double r) { return 6.0 * std::asin(0.5 * r) / kPi; }

double gaussian_r_from(StrengthKind kind, double value) {
    if (!(std::abs(value) < 1.0))
        throw ArgumentError("gaussian_r_from: strength must be in (-1,1)");
    switch (kind) {
        case StrengthKind::kendall_tau:
            return gaussian_r_from_tau(value);
        case StrengthKind::spearman_rho:
            return gaussian_r_from_rho(value);
        case StrengthKind::native:
            return value;
    }
    throw ArgumentError("gaussian_r_from: unknown strength kind");
}

double native_parameter(const CopulaSpec& spec) {
    spec.validate();
    switch (spec.family) {
        case Family::independence:
            return 0.0;
        case Family::frank:
            return spec.kind == StrengthKind::native ? spec.value
                                                     : frank_theta_from_tau(spec.value);
        case Family::gaussian:
            return gaussian_r_from(spec.kind, spec.value);
    }
    throw ArgumentError("native_parameter: unknown family");
}

Sample draw(const CopulaSpec& spec, std::int32_t n, std::uint64_t seed) {
    if (n < 1) throw SizeError("copula draw: n must be >= 1");
    const double param = native_parameter(spec);
    Rng rng = Rng::derive(seed, kDrawStream);
    std::vector<double> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
    for (std::int32_t i = 0; i < n; ++i) {
        double u = 0.0, v = 0.0;
        draw_pair(spec.family, param, rng, u, v);
        xs[static_cast<std::size_t>(i)] = u;
        ys[static_cast<std::size_t>(i)] = v;
    }
    return Sample(std::move(xs), std::move(ys));
}

MixtureSpec::MixtureSpec(CopulaSpec component, double p, std::int32_t n_draws) {
    components.push_back({component, p});
    n = n_draws;
    validate();
}

void MixtureSpec::validate() const {
    if (n < 1) throw SizeError("mixture: n must be >= 1");
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight > 0.0 && c.weight < 1.0))
            throw ArgumentError("mixture: component weight must be in (0,1)");
        c.spec.validate();
        total += c.weight;
    }
    if (total >= 1.0) throw ArgumentError("mixture: component weights must sum below 1");
}

LabeledSample sample_mixture(const MixtureSpec& m, std::uint64_t seed) {
    m.validate();
    std::vector<double> params;
    params.reserve(m.components.size());
    for (const auto& c : m.components) params.push_back(native_parameter(c.spec));

    Rng rng = Rng::derive(seed, kDrawStream + 1);
    LabeledSample out;
    out.label.resize(static_cast<std::size_t>(m.n), 0);
    std::vector<double> xs(static_cast<std::size_t>(m.n)), ys(static_cast<std::size_t>(m.n));
    for (std::int32_t i = 0; i < m.n; ++i) {
        const double roll = rng.next_double();
        double acc = 0.0;
        std::int32_t source = 0;
        Family family = Family::independence;
        double param = 0.0;
        for (std::size_t c = 0; c < m.components.size(); ++c) {
            acc += m.components[c].weight;
            if (roll < acc) {
                source = static_cast<std::int32_t>(c) + 1;
                family = m.components[c].spec.family;
                param = params[c];
                break;
            }
        }
        double u = 0.0, v = 0.0;
        draw_pair(family, param, rng, u, v);
        xs[static_cast<std::size_t>(i)] = u;
        ys[static_cast<std::size_t>(i)] = v;
        out.label[static_cast<std::size_t>(i)] = source;
    }
    out.sample = Sample(std::move(xs), std::move(ys));
    return out;
}

}  // namespace tktp::copula
