#include "tktp/taupath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tktp/errors.hpp"
#include "tktp/rng.hpp"
#include "tktp/threads.hpp"

namespace tktp {

namespace {

constexpr std::uint64_t kTieBreakStream = 0x7a75b0c4d1e5f293ULL;

struct Cells {
    std::vector<std::int8_t> m;  // n*n, natural observation order
    std::int32_t n = 0;
    bool has_ties = false;

    std::int8_t* row(std::int32_t r) {
        return m.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(n);
    }
    const std::int8_t* row(std::int32_t r) const {
        return m.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(n);
    }
};

Cells build_cells(const Sample& s, std::int32_t max_n) {
    s.check(2);
    const auto n = static_cast<std::int32_t>(s.size());
    if (n > max_n)
        throw SizeError("tau path: n = " + std::to_string(n) + " exceeds configured maximum " +
                        std::to_string(max_n));
    Cells c;
    c.n = n;
    c.m.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (std::int32_t i = 0; i < n; ++i) {
        std::int8_t* ri = c.row(i);
        for (std::int32_t j = i + 1; j < n; ++j) {
            const double prod = (s.x[static_cast<std::size_t>(i)] - s.x[static_cast<std::size_t>(j)]) *
                                (s.y[static_cast<std::size_t>(i)] - s.y[static_cast<std::size_t>(j)]);
            std::int8_t sign = 0;
            if (prod > 0.0)
                sign = 1;
            else if (prod < 0.0)
                sign = -1;
            else
                c.has_ties = true;
            ri[j] = sign;
            c.row(j)[i] = sign;
        }
    }
    return c;
}

// Uniform choice from the tieset, or its first element. The tieset is always
// assembled in ascending position order, so both algorithms see the same
// candidates and draw the same random index.
std::size_t choose_tied(const std::vector<std::int32_t>& tiepos, TieBreak tb, Rng& rng) {
    if (tb == TieBreak::seeded_random && tiepos.size() > 1)
        return static_cast<std::size_t>(rng.next_below(tiepos.size()));
    return 0;
}

// Shared post-search bookkeeping: stage taus from integer prefix pair sums,
// id mapping, and a monotonicity self-check for tie-free inputs.
TauPathResult finish_path(const Sample& s, const std::vector<std::int32_t>& pi_obs,
                          const std::vector<std::int64_t>& prefix_pair_sums, bool has_ties) {
    const auto n = static_cast<std::int32_t>(s.size());
    TauPathResult out;
    out.pi.resize(static_cast<std::size_t>(n));
    for (std::int32_t p = 0; p < n; ++p)
        out.pi[static_cast<std::size_t>(p)] = s.ids[static_cast<std::size_t>(pi_obs[static_cast<std::size_t>(p)])];
    out.tau.resize(static_cast<std::size_t>(n));
    out.tau[0] = 1.0;
    for (std::int32_t k = 2; k <= n; ++k) {
        const double pairs = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
        out.tau[static_cast<std::size_t>(k) - 1] =
            static_cast<double>(prefix_pair_sums[static_cast<std::size_t>(k)]) / pairs;
    }
    if (!has_ties) {
        // T_k >= T_{k+1} <=> S_k (k+1) >= S_{k+1} (k-1), exactly in integers.
        for (std::int32_t k = 2; k < n; ++k) {
            const std::int64_t lhs = prefix_pair_sums[static_cast<std::size_t>(k)] * (k + 1);
            const std::int64_t rhs = prefix_pair_sums[static_cast<std::size_t>(k) + 1] * (k - 1);
            if (lhs < rhs)
                throw InternalError("tau path: monotonicity violated at stage " +
                                    std::to_string(k + 1));
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// fastbcs: reference search over a physically permuted matrix.
//
// The matrix rows/columns are swapped on every transposition so that entry
// (a, b) is always the concordance of the observations currently at positions
// a and b. Column sums then become contiguous row-prefix sums (the matrix is
// symmetric), which is what makes the per-stage recomputation vectorizable.
// ---------------------------------------------------------------------------
TauPathResult fastbcs(const Sample& s, const BcsPolicy& policy, BcsInstrumentation* instr) {
    Cells c = build_cells(s, policy.max_n);
    const std::int32_t n = c.n;
    const int threads = policy.parallel_colsums ? resolve_threads(policy.threads) : 1;

    std::vector<std::int32_t> pi(static_cast<std::size_t>(n));
    std::iota(pi.begin(), pi.end(), 0);
    std::vector<std::vector<std::int32_t>> tie(static_cast<std::size_t>(n) + 1);
    std::vector<std::int32_t> colsum(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> tiepos;
    Rng tie_rng = Rng::derive(policy.seed, kTieBreakStream);
    ProfileCounters local;
    ProfileCounters& ctr = instr ? instr->counters : local;

    auto transpose = [&](std::int32_t a, std::int32_t b) {
        if (a == b) return;
        std::swap_ranges(c.row(a), c.row(a) + n, c.row(b));
        std::int8_t* base = c.m.data();
        for (std::int32_t r = 0; r < n; ++r) {
            std::int8_t* rw = base + static_cast<std::size_t>(r) * static_cast<std::size_t>(n);
            std::swap(rw[a], rw[b]);
        }
        std::swap(pi[static_cast<std::size_t>(a)], pi[static_cast<std::size_t>(b)]);
    };

    std::int32_t i = n;
    bool concordant = false;
    for (;;) {
        // Active column sums over the prefix [0, i): row-prefix sums by symmetry.
        auto sum_block = [&](std::size_t jb, std::size_t je) {
            for (std::size_t j = jb; j < je; ++j) {
                const std::int8_t* rj = c.row(static_cast<std::int32_t>(j));
                std::int32_t acc = 0;
                for (std::int32_t u = 0; u < i; ++u) acc += rj[u];
                colsum[j] = acc;
            }
        };
        if (threads > 1 && i >= policy.parallel_threshold)
            parallel_for(static_cast<std::size_t>(i), threads, sum_block);
        else
            sum_block(0, static_cast<std::size_t>(i));

        ++ctr.repeat_iterations;
        std::int64_t total = 0;
        for (std::int32_t j = 0; j < i; ++j) total += colsum[static_cast<std::size_t>(j)];
        if (total == static_cast<std::int64_t>(i) * (i - 1)) {
            ctr.halting_index = i;
            concordant = true;
            break;
        }
        if (i == 2) {
            ctr.halting_index = 2;
            break;
        }

        // Backward elimination: move a least-contributing observation to position i-1.
        std::int32_t minsum = colsum[0];
        for (std::int32_t j = 1; j < i; ++j) minsum = std::min(minsum, colsum[static_cast<std::size_t>(j)]);
        tiepos.clear();
        for (std::int32_t j = 0; j < i; ++j)
            if (colsum[static_cast<std::size_t>(j)] == minsum) tiepos.push_back(j);
        if (tiepos.size() > 1) {
            ++ctr.tie_events;
            ctr.tieset_size_total += tiepos.size();
            auto& ts = tie[static_cast<std::size_t>(i)];
            ts.clear();
            for (const std::int32_t p : tiepos) ts.push_back(pi[static_cast<std::size_t>(p)]);
        }
        const std::int32_t l = tiepos[choose_tied(tiepos, policy.tie_break, tie_rng)];
        transpose(l, i - 1);

        // Tie logic: revisit earlier tiesets containing the observation just
        // eliminated; a dominating alternative triggers a forward step.
        bool stepped = false;
        bool counted_hit = false;
        const std::int32_t ip = i - 1;
        for (std::int32_t k = n; k >= i + 1 && !stepped; --k) {
            const auto& ts = tie[static_cast<std::size_t>(k)];
            if (ts.empty()) continue;
            const std::int32_t a = pi[static_cast<std::size_t>(ip)];
            if (std::find(ts.begin(), ts.end(), a) == ts.end()) continue;
            if (!counted_hit) {
                ++ctr.tie_membership_hits;
                counted_hit = true;
            }
            const std::int32_t kp = k - 1;
            // Cumulative column sums of the current choice (qi) versus the
            // stage-k candidate with the two observations swapped (qk).
            const std::int8_t* ri = c.row(ip);
            const std::int8_t* rk = c.row(kp);
            std::int32_t qi = 0, qk = 0;
            for (std::int32_t u = 0; u < ip; ++u) {
                qi += ri[u];
                qk += rk[u];
            }
            qi += ri[ip];  // diagonal, zero; kept for symmetry with the text
            bool all_ge = qk >= qi;
            bool any_gt = qk > qi;
            for (std::int32_t p = ip + 1; p <= kp && all_ge; ++p) {
                qi += ri[p];
                qk += p < kp ? rk[p] : ri[kp];
                all_ge = qk >= qi;
                any_gt = any_gt || qk > qi;
            }
            if (!(all_ge && any_gt)) continue;

            ++ctr.forward_steps;
            ctr.forward_distance += static_cast<std::uint64_t>(k - i - 1);
            transpose(ip, kp);
            for (std::int32_t m = 0; m <= k; ++m) tie[static_cast<std::size_t>(m)].clear();
            i = k - 1;
            stepped = true;
        }
        if (stepped) continue;
        --i;
    }
    ctr.halted_by_concordance = concordant;

    std::vector<std::int64_t> prefix(static_cast<std::size_t>(n) + 1, 0);
    std::int64_t run = 0;
    for (std::int32_t k = 1; k < n; ++k) {
        const std::int8_t* rk = c.row(k);
        std::int32_t acc = 0;
        for (std::int32_t u = 0; u < k; ++u) acc += rk[u];
        run += acc;
        prefix[static_cast<std::size_t>(k) + 1] = run;
    }
    return finish_path(s, pi, prefix, c.has_ties);
}

// ---------------------------------------------------------------------------
// fastbcs2: incremental search over a logical permutation.
//
// The concordance matrix stays in natural order; pi maps positions to
// observations. Column sums are initialized once and repaired on every
// elimination (one row subtraction), transposition (value swap) and forward
// step (triangular restore), so a stage costs O(i) instead of O(i^2).
// ---------------------------------------------------------------------------
TauPathResult fastbcs2(const Sample& s, const BcsPolicy& policy, BcsInstrumentation* instr) {
    Cells c = build_cells(s, policy.max_n);
    const std::int32_t n = c.n;
    const int threads = policy.parallel_colsums ? resolve_threads(policy.threads) : 1;

    std::vector<std::int32_t> pi(static_cast<std::size_t>(n));
    std::iota(pi.begin(), pi.end(), 0);
    std::vector<std::vector<std::int32_t>> tie(static_cast<std::size_t>(n) + 1);
    std::vector<std::int32_t> colsum(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> tiepos;
    Rng tie_rng = Rng::derive(policy.seed, kTieBreakStream);
    ProfileCounters local;
    ProfileCounters& ctr = instr ? instr->counters : local;

    // One-off initialization; pi is still the identity, so rows are scanned
    // contiguously. This is the initialization the parallel mode splits.
    auto init_block = [&](std::size_t jb, std::size_t je) {
        for (std::size_t j = jb; j < je; ++j) {
            const std::int8_t* rj = c.row(static_cast<std::int32_t>(j));
            std::int32_t acc = 0;
            for (std::int32_t u = 0; u < n; ++u) acc += rj[u];
            colsum[j] = acc;
        }
    };
    if (threads > 1 && n >= policy.parallel_threshold)
        parallel_for(static_cast<std::size_t>(n), threads, init_block);
    else
        init_block(0, static_cast<std::size_t>(n));

    std::int32_t i = n;
    bool concordant = false;
    for (;;) {
        ++ctr.repeat_iterations;
        std::int64_t total = 0;
        for (std::int32_t j = 0; j < i; ++j) total += colsum[static_cast<std::size_t>(j)];
        if (total == static_cast<std::int64_t>(i) * (i - 1)) {
            ctr.halting_index = i;
            concordant = true;
            break;
        }
        if (i == 2) {
            ctr.halting_index = 2;
            break;
        }

        std::int32_t minsum = colsum[0];
        for (std::int32_t j = 1; j < i; ++j) minsum = std::min(minsum, colsum[static_cast<std::size_t>(j)]);
        tiepos.clear();
        for (std::int32_t j = 0; j < i; ++j)
            if (colsum[static_cast<std::size_t>(j)] == minsum) tiepos.push_back(j);
        if (tiepos.size() > 1) {
            ++ctr.tie_events;
            ctr.tieset_size_total += tiepos.size();
            auto& ts = tie[static_cast<std::size_t>(i)];
            ts.clear();
            for (const std::int32_t p : tiepos) ts.push_back(pi[static_cast<std::size_t>(p)]);
        }
        const std::int32_t ip = i - 1;
        const std::int32_t l = tiepos[choose_tied(tiepos, policy.tie_break, tie_rng)];
        std::swap(pi[static_cast<std::size_t>(l)], pi[static_cast<std::size_t>(ip)]);
        std::swap(colsum[static_cast<std::size_t>(l)], colsum[static_cast<std::size_t>(ip)]);

        // Drop the eliminated observation's row from the active column sums.
        {
            const std::int8_t* re = c.row(pi[static_cast<std::size_t>(ip)]);
            for (std::int32_t j = 0; j < i; ++j)
                colsum[static_cast<std::size_t>(j)] -= re[pi[static_cast<std::size_t>(j)]];
        }
        if (instr && instr->on_stage)
            instr->on_stage(i, std::span<const std::int32_t>(colsum.data(),
                                                             static_cast<std::size_t>(i)));

        bool stepped = false;
        bool counted_hit = false;
        for (std::int32_t k = n; k >= i + 1 && !stepped; --k) {
            const auto& ts = tie[static_cast<std::size_t>(k)];
            if (ts.empty()) continue;
            const std::int32_t a = pi[static_cast<std::size_t>(ip)];
            if (std::find(ts.begin(), ts.end(), a) == ts.end()) continue;
            if (!counted_hit) {
                ++ctr.tie_membership_hits;
                counted_hit = true;
            }
            const std::int32_t kp = k - 1;
            const std::int8_t* ra = c.row(a);
            const std::int8_t* rb = c.row(pi[static_cast<std::size_t>(kp)]);
            std::int32_t qi = 0, qk = 0;
            for (std::int32_t u = 0; u < ip; ++u) {
                qi += ra[pi[static_cast<std::size_t>(u)]];
                qk += rb[pi[static_cast<std::size_t>(u)]];
            }
            bool all_ge = qk >= qi;
            bool any_gt = qk > qi;
            for (std::int32_t p = ip + 1; p <= kp && all_ge; ++p) {
                qi += ra[pi[static_cast<std::size_t>(p)]];
                qk += p < kp ? rb[pi[static_cast<std::size_t>(p)]]
                             : ra[pi[static_cast<std::size_t>(kp)]];
                all_ge = qk >= qi;
                any_gt = any_gt || qk > qi;
            }
            if (!(all_ge && any_gt)) continue;

            ++ctr.forward_steps;
            ctr.forward_distance += static_cast<std::uint64_t>(k - i - 1);
            // Restore rows i..k into the sums (stale entries above the prefix
            // hold their frozen elimination-time values, which the triangular
            // limits complete to full prefix-k sums), then re-freeze the new
            // occupant of position k.
            for (std::int32_t jp = ip; jp <= kp; ++jp) {
                const std::int8_t* rj = c.row(pi[static_cast<std::size_t>(jp)]);
                for (std::int32_t lp = 0; lp <= jp; ++lp)
                    colsum[static_cast<std::size_t>(lp)] += rj[pi[static_cast<std::size_t>(lp)]];
            }
            std::swap(pi[static_cast<std::size_t>(ip)], pi[static_cast<std::size_t>(kp)]);
            std::swap(colsum[static_cast<std::size_t>(ip)], colsum[static_cast<std::size_t>(kp)]);
            {
                const std::int8_t* rk = c.row(pi[static_cast<std::size_t>(kp)]);
                for (std::int32_t lp = 0; lp < kp; ++lp)
                    colsum[static_cast<std::size_t>(lp)] -= rk[pi[static_cast<std::size_t>(lp)]];
            }
            for (std::int32_t m = 0; m <= k; ++m) tie[static_cast<std::size_t>(m)].clear();
            i = k - 1;
            stepped = true;
        }
        if (stepped) continue;
        --i;
    }
    ctr.halted_by_concordance = concordant;

    std::vector<std::int64_t> prefix(static_cast<std::size_t>(n) + 1, 0);
    std::int64_t run = 0;
    for (std::int32_t k = 1; k < n; ++k) {
        const std::int8_t* rk = c.row(pi[static_cast<std::size_t>(k)]);
        std::int32_t acc = 0;
        for (std::int32_t u = 0; u < k; ++u) acc += rk[pi[static_cast<std::size_t>(u)]];
        run += acc;
        prefix[static_cast<std::size_t>(k) + 1] = run;
    }
    return finish_path(s, pi, prefix, c.has_ties);
}

TauPathResult tau_path(const Sample& s, const BcsPolicy& policy, BcsInstrumentation* instr) {
    return policy.algorithm == BcsAlgorithm::fastbcs ? fastbcs(s, policy, instr)
                                                     : fastbcs2(s, policy, instr);
}

bool verify_sequential_maximality(const Sample& s, const TauPathResult& r) {
    const auto n = static_cast<std::int32_t>(s.size());
    if (r.pi.size() != s.size() || r.tau.size() != s.size()) return false;
    if (n == 2) return true;

    const ConcordanceMatrix c = concordance_matrix(s);
    // Map ids back to sample positions.
    std::vector<std::int32_t> posn(static_cast<std::size_t>(n));
    {
        std::vector<std::int32_t> id_to_pos;
        for (std::int32_t p = 0; p < n; ++p) {
            std::int32_t found = -1;
            for (std::int32_t q = 0; q < n; ++q)
                if (s.ids[static_cast<std::size_t>(q)] == r.pi[static_cast<std::size_t>(p)]) {
                    found = q;
                    break;
                }
            if (found < 0) return false;
            posn[static_cast<std::size_t>(p)] = found;
        }
    }

    // Integer prefix pair sums and per-stage column sums over the prefix.
    std::vector<std::int64_t> prefix(static_cast<std::size_t>(n) + 1, 0);
    for (std::int32_t k = 1; k < n; ++k) {
        std::int64_t acc = prefix[static_cast<std::size_t>(k)];
        for (std::int32_t u = 0; u < k; ++u)
            acc += c.at(posn[static_cast<std::size_t>(k)], posn[static_cast<std::size_t>(u)]);
        prefix[static_cast<std::size_t>(k) + 1] = acc;
    }

    for (std::int32_t k = n; k >= 3; --k) {
        // The removed observation must minimize the column sum over the
        // prefix, i.e. maximize the tau of the remainder.
        std::int64_t min_colsum = std::numeric_limits<std::int64_t>::max();
        for (std::int32_t t = 0; t < k; ++t) {
            std::int64_t cs = 0;
            for (std::int32_t u = 0; u < k; ++u)
                cs += c.at(posn[static_cast<std::size_t>(t)], posn[static_cast<std::size_t>(u)]);
            min_colsum = std::min(min_colsum, cs);
        }
        std::int64_t removed_colsum = 0;
        for (std::int32_t u = 0; u < k - 1; ++u)
            removed_colsum +=
                c.at(posn[static_cast<std::size_t>(k) - 1], posn[static_cast<std::size_t>(u)]);
        if (removed_colsum != min_colsum) return false;
    }
    for (std::int32_t k = 2; k <= n; ++k) {
        const double pairs = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
        const double want = static_cast<double>(prefix[static_cast<std::size_t>(k)]) / pairs;
        if (std::abs(want - r.tau[static_cast<std::size_t>(k) - 1]) > 1e-12) return false;
        if (k < n) {
            const std::int64_t lhs = prefix[static_cast<std::size_t>(k)] * (k + 1);
            const std::int64_t rhs = prefix[static_cast<std::size_t>(k) + 1] * (k - 1);
            if (lhs < rhs) return false;
        }
    }
    return true;
}

}  // namespace tktp
