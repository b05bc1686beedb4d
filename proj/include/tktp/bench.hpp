#ifndef TKTP_BENCH_HPP
#define TKTP_BENCH_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tktp/taupath.hpp"

namespace tktp::bench {

// Averaged search counters over repeated runs on independent uniform inputs.
struct ProfileStats {
    std::int32_t n = 0;
    std::int32_t runs = 0;
    double repeat_iterations = 0.0;    // N_R
    double tie_events = 0.0;           // N_T
    double mean_tieset_size = 0.0;
    double tie_membership_hits = 0.0;  // N_M
    double forward_steps = 0.0;        // N_FS
    double forward_distance = 0.0;     // N_FD
    double halting_index = 0.0;        // i_H
    double tie_rate = 0.0;             // N_T / N_R
    double membership_rate = 0.0;      // N_M / N_R
};

// One instrumented run on uniform inputs. The tie-break policy defaults to
// seeded_random, matching the search as originally specified.
ProfileCounters profile_run(std::int32_t n, std::uint64_t seed,
                            BcsAlgorithm algorithm = BcsAlgorithm::fastbcs2,
                            TieBreak tie_break = TieBreak::seeded_random);

ProfileStats profile_average(std::int32_t n, std::int32_t runs, std::uint64_t seed,
                             BcsAlgorithm algorithm = BcsAlgorithm::fastbcs2,
                             TieBreak tie_break = TieBreak::seeded_random);

// Empirical order of growth by the doubling hypothesis: T(2n)/T(n) ~ 2^b
// when the runtime is ~ a n^b.
struct DoublingReport {
    std::string label;
    std::vector<std::int32_t> sizes;
    std::vector<double> mean_ms;
    std::vector<double> sd_ms;
    std::vector<double> ratios;     // ratios[i] = mean_ms[i] / mean_ms[i-1]; NaN at i = 0
    std::vector<double> exponents;  // lg(ratio); NaN at i = 0
};

// Times fn at n = n_lo, 2 n_lo, ... while n <= n_hi. Each size gets one
// unrecorded warm-up run plus `iterations` timed runs on fresh uniform
// inputs (input generation is outside the timed region).
DoublingReport doubling_ratios_fn(const std::function<void(const Sample&)>& fn,
                                  const std::string& label, std::int32_t n_lo, std::int32_t n_hi,
                                  int iterations = 5, std::uint64_t seed = 1);

DoublingReport doubling_ratios(std::int32_t n_lo, std::int32_t n_hi, BcsAlgorithm algorithm,
                               int iterations = 5, std::uint64_t seed = 1, int threads = 1);

void write_doubling_csv(std::ostream& os, const DoublingReport& report);
void write_profile_csv(std::ostream& os, const std::vector<ProfileStats>& stats);

// Uniform sample used by the timing and profiling harnesses.
Sample uniform_sample(std::int32_t n, std::uint64_t seed);

}  // namespace tktp::bench

#endif
