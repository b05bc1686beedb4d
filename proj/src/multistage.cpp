#include "tktp/multistage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tktp/boundary_cache.hpp"
#include "tktp/errors.hpp"
#include "tktp/rng.hpp"
#include "tktp/threads.hpp"

namespace tktp {

namespace {

// Mean of the truncated geometric on {0, .., m-1} with ratio r.
double truncated_geom_mean(double r, std::int32_t m, double log_r) {
    if (m <= 1) return 0.0;
    // r/(1-r) - m r^m/(1-r^m), with 1-r^m = -expm1(m log r) for accuracy.
    const double rm = std::exp(static_cast<double>(m) * log_r);
    const double one_minus_rm = -std::expm1(static_cast<double>(m) * log_r);
    return r / (1.0 - r) - static_cast<double>(m) * rm / one_minus_rm;
}

}  // namespace

PenaltySequence discordance_increments(std::span<const double> tau_by_stage) {
    const auto n = static_cast<std::int32_t>(tau_by_stage.size());
    if (n < 2) throw SizeError("discordance_increments: need a path of at least 2 stages");
    PenaltySequence p;
    p.n = n;
    p.total_discord.assign(static_cast<std::size_t>(n) + 1, 0.0);
    p.v.assign(static_cast<std::size_t>(n) + 1, 0.0);
    p.m.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::int32_t k = 2; k <= n; ++k) {
        const double tau_k = tau_by_stage[static_cast<std::size_t>(k) - 1];
        if (tau_k < -1.0 - 1e-12 || tau_k > 1.0 + 1e-12)
            throw ArgumentError("discordance_increments: tau out of [-1, 1] at stage " +
                                std::to_string(k));
        const double pairs = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
        p.total_discord[static_cast<std::size_t>(k)] = 0.5 * (1.0 - tau_k) * pairs;
    }
    for (std::int32_t k = 2; k <= n; ++k) {
        const double inc = p.total_discord[static_cast<std::size_t>(k)] -
                           p.total_discord[static_cast<std::size_t>(k) - 1];
        if (inc < -1e-9)
            throw ArgumentError(
                "discordance_increments: tau sequence increases at stage " + std::to_string(k) +
                " (negative penalty)");
        p.v[static_cast<std::size_t>(k)] = std::max(inc, 0.0);
        p.m[static_cast<std::size_t>(k)] = n - k + 1;
    }
    return p;
}

double truncated_geom_mle(std::span<const double> v, std::span<const std::int32_t> m) {
    if (v.empty() || v.size() != m.size())
        throw ArgumentError("truncated_geom_mle: empty or mismatched window");
    double sum_v = 0.0;
    double sum_mean_at_one = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (m[i] < 1) throw ArgumentError("truncated_geom_mle: truncation size below 1");
        if (v[i] < -1e-12 || v[i] > static_cast<double>(m[i] - 1) + 1e-12)
            throw ArgumentError("truncated_geom_mle: penalty " + std::to_string(v[i]) +
                                " outside [0, " + std::to_string(m[i] - 1) + "]");
        sum_v += v[i];
        sum_mean_at_one += 0.5 * static_cast<double>(m[i] - 1);
    }
    // The score has the sign of g(r) = sum v - sum mu_i(r), with mu_i strictly
    // increasing from 0 to (m_i - 1)/2; boundary cases fall out directly.
    if (sum_v <= 0.0) return kThetaMax;
    if (sum_v >= sum_mean_at_one) return 0.0;

    auto g = [&](double r) {
        const double log_r = std::log(r);
        double acc = sum_v;
        for (std::size_t i = 0; i < m.size(); ++i) acc -= truncated_geom_mean(r, m[i], log_r);
        return acc;
    };
    double lo = kMleRLo, hi = kMleRHi;
    if (g(lo) <= 0.0) return kThetaMax;
    if (g(hi) >= 0.0) return 0.0;
    while (hi - lo > kMleRTol) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double r_hat = 0.5 * (lo + hi);
    return std::clamp(-std::log(r_hat), 0.0, kThetaMax);
}

MamleCurve taupath_mamle(std::span<const double> tau_by_stage, std::int32_t window) {
    const auto n = static_cast<std::int32_t>(tau_by_stage.size());
    if (window < 1) throw ArgumentError("taupath_mamle: window must be >= 1");
    if (window >= n)
        throw ArgumentError("taupath_mamle: window " + std::to_string(window) +
                            " leaves no stages for a path of length " + std::to_string(n));
    PenaltySequence pen = discordance_increments(tau_by_stage);

    MamleCurve curve;
    curve.n = n;
    curve.window = window;
    curve.theta.resize(static_cast<std::size_t>(n - window));

    // Penalties can exceed the shrinking truncated support at late stages;
    // clamp into [0, m-1] and keep a record of the affected stages.
    std::vector<double> cv(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int32_t k = 2; k <= n; ++k) {
        const double bound = static_cast<double>(pen.m[static_cast<std::size_t>(k)] - 1);
        const double raw = pen.v[static_cast<std::size_t>(k)];
        const double clamped = std::clamp(raw, 0.0, bound);
        cv[static_cast<std::size_t>(k)] = clamped;
        if (clamped != raw) curve.clamped_stages.push_back(k);
    }

    std::vector<double> wv(static_cast<std::size_t>(window));
    std::vector<std::int32_t> wm(static_cast<std::size_t>(window));
    for (std::int32_t j = window + 1; j <= n; ++j) {
        for (std::int32_t t = 0; t < window; ++t) {
            const std::int32_t k = j - window + 1 + t;
            wv[static_cast<std::size_t>(t)] = cv[static_cast<std::size_t>(k)];
            wm[static_cast<std::size_t>(t)] = pen.m[static_cast<std::size_t>(k)];
        }
        curve.theta[static_cast<std::size_t>(j - window - 1)] = truncated_geom_mle(wv, wm);
    }
    return curve;
}

MamleCurve taupath_mamle(const TauPathResult& path, std::int32_t window) {
    return taupath_mamle(path.tau, window);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return Rng::derive(seed, stream).next_u64();
}

RejectBoundary generate_reject_boundary(std::int32_t n, std::int32_t window, std::int32_t nsim,
                                        double alpha, std::uint64_t seed, const BcsPolicy& policy,
                                        int threads) {
    if (n < window + 2)
        throw ArgumentError("generate_reject_boundary: need n >= window + 2");
    if (nsim < 1) throw ArgumentError("generate_reject_boundary: nsim must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ArgumentError("generate_reject_boundary: alpha must be in (0, 1)");

    const std::int32_t stages = n - window;
    std::vector<double> curves(static_cast<std::size_t>(nsim) * static_cast<std::size_t>(stages));

    const int nthreads = resolve_threads(threads);
    parallel_for(static_cast<std::size_t>(nsim), nthreads, [&](std::size_t rb, std::size_t re) {
        for (std::size_t rep = rb; rep < re; ++rep) {
            Rng rng = Rng::derive(seed, rep);
            const auto px = rng.permutation(n);
            const auto py = rng.permutation(n);
            Sample s(std::vector<double>(px.begin(), px.end()),
                     std::vector<double>(py.begin(), py.end()));
            BcsPolicy null_policy = policy;
            null_policy.parallel_colsums = false;  // replicate-level parallelism instead
            if (null_policy.tie_break == TieBreak::seeded_random)
                null_policy.seed = derive_seed(seed, 0x9d2c5680ULL + rep);
            const TauPathResult path = tau_path(s, null_policy);
            const MamleCurve curve = taupath_mamle(path.tau, window);
            std::copy(curve.theta.begin(), curve.theta.end(),
                      curves.begin() + static_cast<std::ptrdiff_t>(rep * static_cast<std::size_t>(stages)));
        }
    });

    RejectBoundary b;
    b.n = n;
    b.window = window;
    b.alpha = alpha;
    b.nsim = nsim;
    b.seed = seed;
    b.q.resize(static_cast<std::size_t>(stages));
    // Empirical (1-alpha) quantile as the order statistic of rank
    // ceil((1-alpha) nsim); a fresh null value exceeds it with probability
    // close to alpha.
    const auto rank = static_cast<std::size_t>(
        std::clamp<long long>(static_cast<long long>(std::ceil((1.0 - alpha) * nsim)) - 1, 0,
                              static_cast<long long>(nsim) - 1));
    std::vector<double> col(static_cast<std::size_t>(nsim));
    for (std::int32_t st = 0; st < stages; ++st) {
        for (std::int32_t rep = 0; rep < nsim; ++rep)
            col[static_cast<std::size_t>(rep)] =
                curves[static_cast<std::size_t>(rep) * static_cast<std::size_t>(stages) +
                       static_cast<std::size_t>(st)];
        std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(rank), col.end());
        b.q[static_cast<std::size_t>(st)] = col[rank];
    }
    return b;
}

std::int32_t stopping_point(const MamleCurve& mamle, const RejectBoundary& boundary,
                            double alpha) {
    if (mamle.n != boundary.n || mamle.window != boundary.window ||
        mamle.theta.size() != boundary.q.size())
        throw ArgumentError("stopping_point: curve and boundary stage domains differ");
    const std::int32_t n = mamle.n;

    std::vector<std::int32_t> exceed;
    for (std::int32_t j = mamle.first_stage(); j <= n; ++j)
        if (mamle.at_stage(j) > boundary.at_stage(j)) exceed.push_back(j);

    const auto num_exceed = static_cast<std::int32_t>(exceed.size());
    for (std::int32_t i = 1; i <= num_exceed; ++i) {
        const std::int32_t stage = exceed[static_cast<std::size_t>(i) - 1];
        const std::int32_t tail = n - stage;
        const std::int32_t left = num_exceed - i;
        if (static_cast<double>(left) <= alpha * static_cast<double>(tail)) return stage;
    }
    return 0;
}

TktpSelection tktp(const Sample& s, const TktpConfig& config, const RejectBoundary& boundary) {
    const auto n = static_cast<std::int32_t>(s.size());
    s.check(static_cast<std::size_t>(config.window) + 2);

    BcsPolicy policy = config.policy;
    policy.threads = policy.threads == 0 ? config.threads : policy.threads;

    TktpSelection sel;
    sel.taupath = tau_path(s, policy);
    sel.mamle = taupath_mamle(sel.taupath.tau, config.window);
    sel.k_hat = stopping_point(sel.mamle, boundary, config.alpha);

    if (sel.k_hat > 0) {
        if (config.literal_selection) {
            for (std::int32_t j = std::max(sel.k_hat, sel.mamle.first_stage()); j <= n; ++j)
                if (sel.mamle.at_stage(j) > boundary.at_stage(j))
                    sel.selected.push_back(sel.taupath.pi[static_cast<std::size_t>(j) - 1]);
        } else {
            sel.selected.assign(sel.taupath.pi.begin(),
                                sel.taupath.pi.begin() + sel.k_hat);
        }
    }
    return sel;
}

TktpSelection tktp(const Sample& s, const TktpConfig& config) {
    const auto n = static_cast<std::int32_t>(s.size());
    if (n < config.window + 2) throw SizeError("tktp: need n >= window + 2");
    const RejectBoundary boundary =
        config.cache_dir.empty()
            ? generate_reject_boundary(n, config.window, config.nsim, config.alpha, config.seed,
                                       config.policy, config.threads)
            : load_or_generate_boundary(config.cache_dir, n, config.window, config.nsim,
                                        config.alpha, config.seed, config.policy, config.threads);
    return tktp(s, config, boundary);
}

}  // namespace tktp
