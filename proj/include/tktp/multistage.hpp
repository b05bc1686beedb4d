#ifndef TKTP_MULTISTAGE_HPP
#define TKTP_MULTISTAGE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tktp/sample.hpp"
#include "tktp/taupath.hpp"

namespace tktp {

// Estimates are clamped to [0, kThetaMax]; e^-10 is far below empirical
// resolution, and the bounded search domain avoids the r -> 0 / r -> 1
// singularities of the likelihood.
inline constexpr double kThetaMax = 10.0;
inline constexpr double kMleRLo = 1e-6;
inline constexpr double kMleRHi = 1.0 - 1e-6;
inline constexpr double kMleRTol = 1e-9;

// Per-stage discordance increments along a tau-path, with the truncation
// size of each stage of the multistage model. Stage-indexed: entries 0 and 1
// are unused; stage k of a path of length n has m[k] = n - k + 1.
struct PenaltySequence {
    std::int32_t n = 0;
    std::vector<double> total_discord;  // ((1 - T_k) / 2) * C(k,2)
    std::vector<double> v;              // total_discord[k] - total_discord[k-1]
    std::vector<std::int32_t> m;

    double at(std::int32_t k) const { return v[static_cast<std::size_t>(k)]; }
};

// tau_by_stage is the stage-indexed tau sequence produced by the search:
// tau_by_stage[k-1] = T_k, with the leading element fixed at 1.
// Throws ArgumentError if the sequence increases anywhere (negative penalty).
PenaltySequence discordance_increments(std::span<const double> tau_by_stage);

// Windowed MLE of the agreement parameter theta = -log r of the truncated
// geometric stage model: r maximizes
//   sum_i [ log(1-r) - log(1-r^{m_i}) + v_i log r ]
// over (0,1). Penalties must already satisfy 0 <= v_i <= m_i - 1.
// Boundary solutions map to kThetaMax (r at the lower bound) and 0 (upper).
double truncated_geom_mle(std::span<const double> v, std::span<const std::int32_t> m);

// Moving-average MLE curve over backward-looking windows of stages.
// theta is defined for stages window+1 .. n; earlier stages are absent.
struct MamleCurve {
    std::int32_t n = 0;
    std::int32_t window = 0;
    std::vector<double> theta;                // theta[j - window - 1] for stage j
    std::vector<std::int32_t> clamped_stages;  // stages whose penalty was clamped into [0, m-1]

    std::int32_t first_stage() const { return window + 1; }
    std::int32_t stage_count() const { return n - window; }
    double at_stage(std::int32_t j) const {
        return theta[static_cast<std::size_t>(j - window - 1)];
    }
};

MamleCurve taupath_mamle(std::span<const double> tau_by_stage, std::int32_t window);
MamleCurve taupath_mamle(const TauPathResult& path, std::int32_t window);

// Stage-wise (1-alpha) null quantiles of the MAMLE under independence,
// simulated from pairs of independent uniform random permutations.
struct RejectBoundary {
    std::int32_t n = 0;
    std::int32_t window = 0;
    double alpha = 0.0;
    std::int32_t nsim = 0;
    std::uint64_t seed = 0;
    std::vector<double> q;  // same stage layout as MamleCurve

    std::int32_t first_stage() const { return window + 1; }
    double at_stage(std::int32_t j) const { return q[static_cast<std::size_t>(j - window - 1)]; }
};

// The null search uses the same tie-break policy (and algorithm) as the
// analysis run; per-replicate RNG streams derive from (seed, replicate), so
// the result is independent of the thread count.
RejectBoundary generate_reject_boundary(std::int32_t n, std::int32_t window, std::int32_t nsim,
                                        double alpha, std::uint64_t seed,
                                        const BcsPolicy& policy = {}, int threads = 0);

// Earliest exceedance stage after which at most an alpha fraction of the
// remaining stages still exceed the boundary; 0 when nothing exceeds.
std::int32_t stopping_point(const MamleCurve& mamle, const RejectBoundary& boundary, double alpha);

struct TktpConfig {
    double alpha = 0.05;
    std::int32_t window = 5;
    std::int32_t nsim = 10000;
    std::uint64_t seed = 1;
    BcsPolicy policy{};
    std::string cache_dir{};        // non-empty: cache reject boundaries here
    bool literal_selection = false;  // see TktpSelection::selected
    int threads = 0;
};

// Result of the full screen. selected holds the top-k_hat prefix of the
// tau-path ordering -- the subsample the method judges associated. With
// literal_selection the alternative rule {pi[j] : j >= k_hat and theta_j >
// q(j)} is used instead.
struct TktpSelection {
    std::int32_t k_hat = 0;
    std::vector<std::int32_t> selected;  // observation ids
    TauPathResult taupath;
    MamleCurve mamle;
};

TktpSelection tktp(const Sample& s, const TktpConfig& config);
TktpSelection tktp(const Sample& s, const TktpConfig& config, const RejectBoundary& boundary);

// Scalar seed for a derived stream; used to give each simulation replicate
// its own deterministic RNG and tie-break seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace tktp

#endif
