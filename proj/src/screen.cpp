#include "tktp/screen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "tktp/boundary_cache.hpp"
#include "tktp/correlation.hpp"
#include "tktp/errors.hpp"
#include "tktp/threads.hpp"

namespace tktp::screen {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// civil-days algorithm).
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned long long>(y - era * 400);
    const unsigned long long doy = (153ULL * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned long long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

// Parses "YYYY-MM-DD" or a plain integer into a sortable key.
bool parse_date_key(const std::string& text, long long& key) {
    const std::string t = trim(text);
    if (t.size() == 10 && t[4] == '-' && t[7] == '-') {
        const auto all_digits = [](const std::string& s, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
            return true;
        };
        if (all_digits(t, 0, 4) && all_digits(t, 5, 7) && all_digits(t, 8, 10)) {
            const long long y = std::stoll(t.substr(0, 4));
            const auto m = static_cast<unsigned>(std::stoi(t.substr(5, 2)));
            const auto d = static_cast<unsigned>(std::stoi(t.substr(8, 2)));
            if (m < 1 || m > 12 || d < 1 || d > 31) return false;
            key = days_from_civil(y, m, d);
            return true;
        }
    }
    if (t.empty()) return false;
    std::size_t pos = 0;
    try {
        key = std::stoll(t, &pos);
    } catch (...) {
        return false;
    }
    return pos == t.size();
}

}  // namespace

std::size_t PriceTable::series_index(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw ArgumentError("price table: unknown series '" + name + "'");
}

PriceTable parse_price_csv(std::istream& in, const std::string& origin) {
    PriceTable t;
    std::string line;
    long row_no = 0;

    if (!std::getline(in, line)) throw DataError(origin + ": empty file");
    ++row_no;
    const auto header = split_csv_row(line);
    if (header.size() < 2) throw DataError(origin + ": header needs a date and one series", row_no);
    std::set<std::string> seen;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const std::string name = trim(header[c]);
        if (name.empty()) throw DataError(origin + ": blank series name", row_no);
        if (!seen.insert(name).second)
            throw DataError(origin + ": duplicate series name '" + name + "'", row_no);
        t.names.push_back(name);
    }
    t.values.assign(t.names.size(), {});
    t.present.assign(t.names.size(), {});

    while (std::getline(in, line)) {
        ++row_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_row(line);
        if (cells.size() != header.size())
            throw DataError(origin + ": expected " + std::to_string(header.size()) +
                                " cells, got " + std::to_string(cells.size()),
                            row_no);
        long long key = 0;
        if (!parse_date_key(cells[0], key))
            throw DataError(origin + ": unparseable time label '" + trim(cells[0]) + "'", row_no);
        if (!t.date_keys.empty() && key <= t.date_keys.back())
            throw DataError(origin + ": dates must be strictly increasing ('" + trim(cells[0]) +
                                "' does not follow '" + t.dates.back() + "')",
                            row_no);
        t.dates.push_back(trim(cells[0]));
        t.date_keys.push_back(key);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const std::string cell = trim(cells[c]);
            if (cell.empty()) {
                t.values[c - 1].push_back(std::numeric_limits<double>::quiet_NaN());
                t.present[c - 1].push_back(0);
                continue;
            }
            try {
                std::size_t pos = 0;
                const double v = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
                t.values[c - 1].push_back(v);
                t.present[c - 1].push_back(1);
            } catch (...) {
                throw DataError(origin + ": unparseable value '" + cell + "' in series '" +
                                    t.names[c - 1] + "'",
                                row_no);
            }
        }
    }
    if (t.dates.empty()) throw DataError(origin + ": no data rows");
    return t;
}

PriceTable load_price_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return parse_price_csv(in, path);
}

Sample lag_align(const PriceTable& table, const std::string& target,
                 const std::string& predictor, std::int32_t lag, std::int32_t min_pairs) {
    if (lag < 0) throw ArgumentError("lag_align: lag must be >= 0");
    const std::size_t ti = table.series_index(target);
    const std::size_t pi = table.series_index(predictor);

    std::vector<double> xs, ys;
    std::vector<std::int32_t> ids;
    const std::size_t rows = table.rows();
    for (std::size_t t = static_cast<std::size_t>(lag); t < rows; ++t) {
        const std::size_t tp = t - static_cast<std::size_t>(lag);
        if (!table.present[pi][tp] || !table.present[ti][t]) continue;
        xs.push_back(table.values[pi][tp]);
        ys.push_back(table.values[ti][t]);
        ids.push_back(static_cast<std::int32_t>(t));
    }
    if (static_cast<std::int32_t>(xs.size()) < min_pairs)
        throw InsufficientDataError("lag_align: only " + std::to_string(xs.size()) +
                                    " usable pairs for '" + target + "' at lag " +
                                    std::to_string(lag) + " (need " + std::to_string(min_pairs) +
                                    ")");
    return Sample(std::move(xs), std::move(ys), std::move(ids));
}

ScreenOutcome screen_pairs(const PriceTable& table, const std::string& predictor,
                           std::int32_t lag, const ScreenConfig& config,
                           std::span<const std::string> targets) {
    table.series_index(predictor);  // validate early
    std::vector<std::string> names(targets.begin(), targets.end());
    if (names.empty()) {
        for (const auto& n : table.names)
            if (n != predictor) names.push_back(n);
    }
    std::sort(names.begin(), names.end());

    struct SlotResult {
        bool ok = false;
        PairResult pair;
        std::string error;
    };
    std::vector<SlotResult> slots(names.size());

    // Aligned samples may differ in length when cells are missing, and each
    // length needs its own null boundary. Build them lazily, shared across
    // worker threads.
    std::map<std::int32_t, RejectBoundary> boundaries;
    std::mutex boundaries_mu;
    auto boundary_for = [&](std::int32_t n) -> RejectBoundary {
        std::lock_guard<std::mutex> lock(boundaries_mu);
        auto it = boundaries.find(n);
        if (it != boundaries.end()) return it->second;
        RejectBoundary b =
            config.tktp.cache_dir.empty()
                ? generate_reject_boundary(n, config.tktp.window, config.tktp.nsim,
                                           config.tktp.alpha, config.tktp.seed,
                                           config.tktp.policy, 1)
                : load_or_generate_boundary(config.tktp.cache_dir, n, config.tktp.window,
                                            config.tktp.nsim, config.tktp.alpha, config.tktp.seed,
                                            config.tktp.policy, 1);
        boundaries.emplace(n, b);
        return b;
    };

    const int threads = resolve_threads(config.threads);
    parallel_for(names.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t idx = b; idx < e; ++idx) {
            SlotResult& slot = slots[idx];
            try {
                Sample aligned =
                    lag_align(table, names[idx], predictor, lag, config.min_pairs);
                if (config.require_complete &&
                    aligned.size() != table.rows() - static_cast<std::size_t>(lag))
                    throw InsufficientDataError("series '" + names[idx] + "' has gaps");
                const Sample screened = config.negate ? negate_y(aligned) : aligned;

                TktpConfig tcfg = config.tktp;
                tcfg.policy.parallel_colsums = false;
                const auto n = static_cast<std::int32_t>(screened.size());
                const TktpSelection sel = tktp(screened, tcfg, boundary_for(n));

                PairResult pr;
                pr.name = names[idx];
                pr.lag = lag;
                pr.n_pairs = n;
                pr.k_hat = sel.k_hat;
                pr.selection.assign(sel.selected.begin(), sel.selected.end());
                std::sort(pr.selection.begin(), pr.selection.end());
                pr.fraction = static_cast<double>(pr.selection.size()) / static_cast<double>(n);
                if (pr.selection.size() >= 3) {
                    // Correlations over the selected pairs, on the original values.
                    std::vector<double> sx, sy;
                    sx.reserve(pr.selection.size());
                    sy.reserve(pr.selection.size());
                    std::size_t walk = 0;
                    for (std::size_t i = 0; i < aligned.size(); ++i) {
                        if (walk < pr.selection.size() && aligned.ids[i] == pr.selection[walk]) {
                            sx.push_back(aligned.x[i]);
                            sy.push_back(aligned.y[i]);
                            ++walk;
                        }
                    }
                    pr.pearson = pearson(sx, sy);
                    pr.kendall = kendall_tau(sx, sy);
                } else {
                    pr.pearson = std::numeric_limits<double>::quiet_NaN();
                    pr.kendall = std::numeric_limits<double>::quiet_NaN();
                }
                slot.ok = true;
                slot.pair = std::move(pr);
            } catch (const std::exception& ex) {
                slot.error = ex.what();
            }
        }
    });

    ScreenOutcome out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!slots[i].ok) {
            out.errors.push_back({names[i], slots[i].error});
            continue;
        }
        out.all.push_back(slots[i].pair);
        if (slots[i].pair.fraction >= config.min_fraction) out.passed.push_back(slots[i].pair);
    }
    return out;
}

double jaccard(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
               bool* both_empty) {
    if (both_empty) *both_empty = a.empty() && b.empty();
    if (a.empty() && b.empty()) return 0.0;
    std::size_t ia = 0, ib = 0, inter = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] == b[ib]) {
            ++inter;
            ++ia;
            ++ib;
        } else if (a[ia] < b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

ClusterReport complete_linkage_clusters(std::span<const PairResult> results, double threshold) {
    if (results.empty()) throw ArgumentError("complete_linkage_clusters: no results");
    const std::size_t n = results.size();

    // Pairwise similarities once.
    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            sim[i][j] = sim[j][i] = jaccard(results[i].selection, results[j].selection);

    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});

    // Complete linkage: merge the pair of clusters with the highest minimum
    // cross similarity, while that similarity still clears the threshold.
    for (;;) {
        double best = -1.0;
        std::size_t ba = 0, bb = 0;
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                double worst = 1.0;
                for (const std::size_t i : clusters[a])
                    for (const std::size_t j : clusters[b]) worst = std::min(worst, sim[i][j]);
                if (worst > best) {
                    best = worst;
                    ba = a;
                    bb = b;
                }
            }
        if (best <= threshold) break;
        clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
        if (clusters.size() == 1) break;
    }

    ClusterReport report;
    report.threshold = threshold;
    std::vector<std::vector<std::string>> named;
    std::vector<std::vector<std::size_t>> kept;
    for (auto& c : clusters) {
        if (c.size() < 2) {
            report.unclustered.push_back(results[c.front()].name);
            continue;
        }
        std::vector<std::string> members;
        for (const std::size_t i : c) members.push_back(results[i].name);
        std::sort(members.begin(), members.end());
        named.push_back(std::move(members));
        kept.push_back(c);
    }
    std::vector<std::size_t> order(named.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (named[a].size() != named[b].size()) return named[a].size() > named[b].size();
        return named[a].front() < named[b].front();
    });
    for (const std::size_t o : order) {
        report.clusters.push_back(named[o]);
        std::map<std::int32_t, std::int32_t> counts;
        for (const std::size_t i : kept[o])
            for (const std::int32_t week : results[i].selection) ++counts[week];
        report.weekly_counts.emplace_back(counts.begin(), counts.end());
    }
    std::sort(report.unclustered.begin(), report.unclustered.end());
    return report;
}

}  // namespace tktp::screen
