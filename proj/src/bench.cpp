#include "tktp/bench.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "tktp/errors.hpp"
#include "tktp/multistage.hpp"
#include "tktp/rng.hpp"

namespace tktp::bench {

namespace {

constexpr std::uint64_t kInputStream = 0xb3a5c96d17e4f205ULL;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

Sample uniform_sample(std::int32_t n, std::uint64_t seed) {
    Rng rng = Rng::derive(seed, kInputStream);
    std::vector<double> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
    for (auto& v : xs) v = rng.next_double();
    for (auto& v : ys) v = rng.next_double();
    return Sample(std::move(xs), std::move(ys));
}

ProfileCounters profile_run(std::int32_t n, std::uint64_t seed, BcsAlgorithm algorithm,
                            TieBreak tie_break) {
    const Sample s = uniform_sample(n, seed);
    BcsPolicy policy;
    policy.algorithm = algorithm;
    policy.tie_break = tie_break;
    policy.seed = derive_seed(seed, 0x9e0fULL);
    BcsInstrumentation instr;
    tau_path(s, policy, &instr);
    return instr.counters;
}

ProfileStats profile_average(std::int32_t n, std::int32_t runs, std::uint64_t seed,
                             BcsAlgorithm algorithm, TieBreak tie_break) {
    if (runs < 1) throw ArgumentError("profile_average: runs must be >= 1");
    ProfileStats st;
    st.n = n;
    st.runs = runs;
    double tiesum = 0.0;
    for (std::int32_t r = 0; r < runs; ++r) {
        const ProfileCounters c =
            profile_run(n, derive_seed(seed, static_cast<std::uint64_t>(r)), algorithm, tie_break);
        st.repeat_iterations += static_cast<double>(c.repeat_iterations);
        st.tie_events += static_cast<double>(c.tie_events);
        tiesum += static_cast<double>(c.tieset_size_total);
        st.tie_membership_hits += static_cast<double>(c.tie_membership_hits);
        st.forward_steps += static_cast<double>(c.forward_steps);
        st.forward_distance += static_cast<double>(c.forward_distance);
        st.halting_index += static_cast<double>(c.halting_index);
    }
    const auto d = static_cast<double>(runs);
    st.repeat_iterations /= d;
    st.mean_tieset_size = st.tie_events > 0.0 ? tiesum / st.tie_events : 0.0;
    st.tie_events /= d;
    st.tie_membership_hits /= d;
    st.forward_steps /= d;
    st.forward_distance /= d;
    st.halting_index /= d;
    st.tie_rate = st.repeat_iterations > 0.0 ? st.tie_events / st.repeat_iterations : 0.0;
    st.membership_rate =
        st.repeat_iterations > 0.0 ? st.tie_membership_hits / st.repeat_iterations : 0.0;
    return st;
}

DoublingReport doubling_ratios_fn(const std::function<void(const Sample&)>& fn,
                                  const std::string& label, std::int32_t n_lo, std::int32_t n_hi,
                                  int iterations, std::uint64_t seed) {
    if (n_lo < 2) throw ArgumentError("doubling_ratios: n_lo must be >= 2");
    if (n_hi < 2 * n_lo) throw ArgumentError("doubling_ratios: n_hi must be >= 2 * n_lo");
    if (iterations < 1) throw ArgumentError("doubling_ratios: iterations must be >= 1");

    DoublingReport rep;
    rep.label = label;
    for (std::int32_t n = n_lo; n <= n_hi; n *= 2) {
        fn(uniform_sample(n, derive_seed(seed, static_cast<std::uint64_t>(n))));  // warm-up
        double sum = 0.0, sumsq = 0.0;
        for (int it = 0; it < iterations; ++it) {
            const std::uint64_t run_seed =
                derive_seed(seed, (static_cast<std::uint64_t>(n) << 8) + static_cast<std::uint64_t>(it) + 1);
            // Fresh inputs per run; generation stays outside the timed region.
            const Sample s = uniform_sample(n, run_seed);
            const double t0 = now_ms();
            fn(s);
            const double elapsed = now_ms() - t0;
            sum += elapsed;
            sumsq += elapsed * elapsed;
        }
        const double mean = sum / iterations;
        const double var = iterations > 1 ? (sumsq - sum * mean) / (iterations - 1) : 0.0;
        rep.sizes.push_back(n);
        rep.mean_ms.push_back(mean);
        rep.sd_ms.push_back(var > 0.0 ? std::sqrt(var) : 0.0);
        if (rep.mean_ms.size() == 1) {
            rep.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
            rep.exponents.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
            const double ratio = mean / rep.mean_ms[rep.mean_ms.size() - 2];
            rep.ratios.push_back(ratio);
            rep.exponents.push_back(std::log2(ratio));
        }
    }
    return rep;
}

DoublingReport doubling_ratios(std::int32_t n_lo, std::int32_t n_hi, BcsAlgorithm algorithm,
                               int iterations, std::uint64_t seed, int threads) {
    BcsPolicy policy;
    policy.algorithm = algorithm;
    policy.tie_break = TieBreak::seeded_random;
    policy.parallel_colsums = threads > 1;
    policy.threads = threads;
    const std::string label =
        algorithm == BcsAlgorithm::fastbcs ? "fastbcs" : "fastbcs2";
    return doubling_ratios_fn(
        [policy](const Sample& s) {
            BcsPolicy p = policy;
            p.seed = derive_seed(static_cast<std::uint64_t>(s.size()), 0x71eULL);
            tau_path(s, p);
        },
        label, n_lo, n_hi, iterations, seed);
}

void write_doubling_csv(std::ostream& os, const DoublingReport& report) {
    os << "algorithm,n,mean_ms,sd_ms,ratio,lg_ratio\n";
    for (std::size_t i = 0; i < report.sizes.size(); ++i)
        os << report.label << ',' << report.sizes[i] << ',' << report.mean_ms[i] << ','
           << report.sd_ms[i] << ',' << report.ratios[i] << ',' << report.exponents[i] << '\n';
}

void write_profile_csv(std::ostream& os, const std::vector<ProfileStats>& stats) {
    os << "n,runs,repeat_iterations,tie_events,mean_tieset_size,tie_membership_hits,"
          "forward_steps,forward_distance,halting_index,tie_rate,membership_rate\n";
    for (const auto& s : stats)
        os << s.n << ',' << s.runs << ',' << s.repeat_iterations << ',' << s.tie_events << ','
           << s.mean_tieset_size << ',' << s.tie_membership_hits << ',' << s.forward_steps << ','
           << s.forward_distance << ',' << s.halting_index << ',' << s.tie_rate << ','
           << s.membership_rate << '\n';
}

}  // namespace tktp::bench
