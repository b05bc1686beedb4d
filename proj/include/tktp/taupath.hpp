#ifndef TKTP_TAUPATH_HPP
#define TKTP_TAUPATH_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tktp/concordance.hpp"
#include "tktp/sample.hpp"

namespace tktp {

enum class TieBreak { first_element, seeded_random };
enum class BcsAlgorithm { fastbcs, fastbcs2 };

// Controls the backward conditional search.
// The deterministic first-element policy picks the tied observation at the
// lowest position, which is what reproducible reports and golden tests use;
// seeded_random draws uniformly from the tieset as in the original method.
struct BcsPolicy {
    TieBreak tie_break = TieBreak::first_element;
    std::uint64_t seed = 0;  // consumed only by seeded_random
    BcsAlgorithm algorithm = BcsAlgorithm::fastbcs2;
    bool parallel_colsums = false;
    int threads = 0;                         // 0 = hardware concurrency
    std::int32_t parallel_threshold = 2000;  // parallelize column sums at sizes >= this
    std::int32_t max_n = kDefaultMaxN;
};

// The tau-path: observations ordered from strongest to weakest support of
// monotone association, with the Kendall tau of each nested prefix.
//
// tau is stage-indexed: tau[k-1] is the coefficient over the first k ordered
// observations, and tau[0] is fixed at 1 as the single-observation stage.
struct TauPathResult {
    std::vector<std::int32_t> pi;  // observation ids, tau-path order
    std::vector<double> tau;       // length n, see above

    double tau_at_stage(std::int32_t k) const { return tau[static_cast<std::size_t>(k) - 1]; }
};

// Counters mirroring the probes used for the empirical cost analysis.
struct ProfileCounters {
    std::uint64_t repeat_iterations = 0;    // search loop entries (halting test evaluations)
    std::uint64_t tie_events = 0;           // stages with |tieset| > 1
    std::uint64_t tieset_size_total = 0;    // summed tieset sizes over tie events
    std::uint64_t tie_membership_hits = 0;  // times pi[i] was found in a prior tieset
    std::uint64_t forward_steps = 0;
    std::uint64_t forward_distance = 0;  // summed k - i - 1 over forward steps
    std::int32_t halting_index = 0;
    bool halted_by_concordance = false;

    double mean_tieset_size() const {
        return tie_events == 0
                   ? 0.0
                   : static_cast<double>(tieset_size_total) / static_cast<double>(tie_events);
    }
};

// Optional probe sink. on_stage (fastbcs2 only) reports the maintained column
// sums right after the elimination update of each stage, position order.
struct BcsInstrumentation {
    ProfileCounters counters;
    std::function<void(std::int32_t stage, std::span<const std::int32_t> colsums)> on_stage;
};

// Reference backward conditional search. Each stage recomputes the active
// column sums from the permuted concordance matrix before eliminating the
// observation that contributes least to the prefix tau.
TauPathResult fastbcs(const Sample& s, const BcsPolicy& policy = {},
                      BcsInstrumentation* instr = nullptr);

// Optimized search: column sums are initialized once and maintained
// incrementally across eliminations, transpositions and forward steps.
// Produces results identical to fastbcs under the same tie-break decisions.
TauPathResult fastbcs2(const Sample& s, const BcsPolicy& policy = {},
                       BcsInstrumentation* instr = nullptr);

// Dispatch on policy.algorithm.
TauPathResult tau_path(const Sample& s, const BcsPolicy& policy = {},
                       BcsInstrumentation* instr = nullptr);

// Independent check that r is a sequentially maximal monotone decreasing
// tau-path for s: every backward stage removed a least-contributing
// observation, tau is non-increasing, and the stored tau values match the
// prefix coefficients. Intended for tie-free samples.
bool verify_sequential_maximality(const Sample& s, const TauPathResult& r);

}  // namespace tktp

#endif
