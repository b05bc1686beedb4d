#include "tktp/simstudy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "tktp/boundary_cache.hpp"
#include "tktp/errors.hpp"
#include "tktp/threads.hpp"

namespace tktp::simstudy {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - std::floor(pos);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

std::string family_name(copula::Family f) {
    switch (f) {
        case copula::Family::frank: return "frank";
        case copula::Family::gaussian: return "gaussian";
        case copula::Family::independence: return "independence";
    }
    return "?";
}

std::string kind_name(copula::StrengthKind k) {
    switch (k) {
        case copula::StrengthKind::kendall_tau: return "tau";
        case copula::StrengthKind::spearman_rho: return "rho";
        case copula::StrengthKind::native: return "native";
    }
    return "?";
}

}  // namespace

CellSummary run_cell(const CellSpec& cell, std::int32_t R, const StudyConfig& config,
                     const RejectBoundary& boundary, std::uint64_t cell_seed,
                     std::vector<ReplicateRecord>* raw) {
    if (R < 1) throw ArgumentError("run_cell: need at least one replicate");
    if (boundary.n != cell.n || boundary.window != config.window)
        throw ArgumentError("run_cell: boundary does not match cell n/window");

    const copula::CopulaSpec component{cell.family, cell.kind, cell.strength};
    const copula::MixtureSpec mixture(component, cell.p, cell.n);

    TktpConfig tcfg;
    tcfg.alpha = config.alpha;
    tcfg.window = config.window;
    tcfg.nsim = config.nsim;
    tcfg.seed = config.seed;
    tcfg.policy = config.policy;
    tcfg.policy.parallel_colsums = false;  // replicates parallelize instead

    std::vector<ReplicateRecord> rows(static_cast<std::size_t>(R));
    const int threads = resolve_threads(config.threads);
    parallel_for(static_cast<std::size_t>(R), threads, [&](std::size_t rb, std::size_t re) {
        for (std::size_t rep = rb; rep < re; ++rep) {
            const std::uint64_t rep_seed = derive_seed(cell_seed, rep);
            const auto labeled = copula::sample_mixture(mixture, rep_seed);

            TktpConfig rep_cfg = tcfg;
            if (rep_cfg.policy.tie_break == TieBreak::seeded_random)
                rep_cfg.policy.seed = derive_seed(cell_seed, 0x517cc1b7u + rep);
            const TktpSelection sel = tktp(labeled.sample, rep_cfg, boundary);

            ReplicateRecord rec;
            rec.replicate = static_cast<std::int32_t>(rep);
            rec.k_hat = sel.k_hat;
            for (const std::int32_t lab : labeled.label) rec.n_associated += lab > 0 ? 1 : 0;
            for (const std::int32_t id : sel.selected)
                rec.associated_selected += labeled.label[static_cast<std::size_t>(id) - 1] > 0 ? 1 : 0;
            rec.percent_covered =
                rec.n_associated > 0 ? 100.0 * static_cast<double>(rec.associated_selected) /
                                           static_cast<double>(rec.n_associated)
                                     : std::numeric_limits<double>::quiet_NaN();
            rec.percent_selected = 100.0 * static_cast<double>(rec.k_hat) /
                                   static_cast<double>(cell.n);
            rows[rep] = rec;
        }
    });

    CellSummary s;
    s.cell = cell;
    s.replicates = R;
    double sum_k = 0.0, sum_cov = 0.0, sum_pc = 0.0, sum_ps = 0.0;
    std::int64_t n_pc = 0;
    for (const auto& r : rows) {
        sum_k += r.k_hat;
        sum_cov += r.associated_selected;
        sum_ps += r.percent_selected;
        if (!std::isnan(r.percent_covered)) {
            sum_pc += r.percent_covered;
            ++n_pc;
        }
    }
    s.mean_stopping_point = sum_k / R;
    s.mean_coverage_count = sum_cov / R;
    s.mean_percent_selected = sum_ps / R;
    s.mean_percent_covered = n_pc > 0 ? sum_pc / static_cast<double>(n_pc)
                                      : std::numeric_limits<double>::quiet_NaN();
    s.rate_of_coverage = s.mean_stopping_point > 0.0
                             ? s.mean_percent_covered / s.mean_percent_selected
                             : std::numeric_limits<double>::quiet_NaN();

    // Spread statistics; the rate SE comes from the delta method for a ratio
    // of means.
    double sxx = 0.0, syy = 0.0, sxy = 0.0, skk = 0.0, sk3 = 0.0;
    const double mean_k = s.mean_stopping_point;
    for (const auto& r : rows) {
        const double dk = r.k_hat - mean_k;
        skk += dk * dk;
        sk3 += dk * dk * dk;
        if (std::isnan(r.percent_covered)) continue;
        const double dy = r.percent_covered - s.mean_percent_covered;
        const double dx = r.percent_selected - s.mean_percent_selected;
        syy += dy * dy;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    const double denom = std::max<std::int64_t>(n_pc - 1, 1);
    if (s.mean_percent_selected > 0.0 && n_pc > 1) {
        const double rate = s.rate_of_coverage;
        const double var =
            (syy / denom - 2.0 * rate * (sxy / denom) + rate * rate * (sxx / denom)) /
            (s.mean_percent_selected * s.mean_percent_selected * static_cast<double>(n_pc));
        s.se_rate = var > 0.0 ? std::sqrt(var) : 0.0;
    } else {
        s.se_rate = std::numeric_limits<double>::quiet_NaN();
    }
    s.se_stopping_point = R > 1 ? std::sqrt(skk / (R - 1) / R) : 0.0;
    s.se_percent_covered = n_pc > 1 ? std::sqrt(syy / denom / static_cast<double>(n_pc)) : 0.0;
    const double m2 = skk / R;
    s.skewness_k_hat = m2 > 0.0 ? (sk3 / R) / std::pow(m2, 1.5) : 0.0;

    std::vector<double> ks;
    ks.reserve(rows.size());
    for (const auto& r : rows) ks.push_back(r.k_hat);
    std::sort(ks.begin(), ks.end());
    s.k_hat_quantiles = {ks.front(), quantile_sorted(ks, 0.25), quantile_sorted(ks, 0.5),
                         quantile_sorted(ks, 0.75), ks.back()};

    if (raw) raw->insert(raw->end(), rows.begin(), rows.end());
    return s;
}

std::optional<double> rate_of_coverage(const CellSummary& summary) {
    if (!(summary.mean_stopping_point > 0.0)) return std::nullopt;
    return summary.rate_of_coverage;
}

double lis_power_floor(double n) {
    if (n < 1.0) throw ArgumentError("lis_power_floor: n must be >= 1");
    return 2.0 * std::sqrt(n) - 1.758 * std::pow(n, 1.0 / 6.0);
}

GridResult run_grid(const ExperimentGrid& grid, bool keep_raw) {
    if (grid.strengths.empty() || grid.proportions.empty() || grid.sizes.empty())
        throw ArgumentError("run_grid: strengths, proportions and sizes must be non-empty");

    GridResult out;
    // One boundary per sample size, shared across every cell at that size.
    std::map<std::int32_t, RejectBoundary> boundaries;
    for (const std::int32_t n : grid.sizes) {
        if (boundaries.count(n)) continue;
        boundaries.emplace(
            n, grid.config.cache_dir.empty()
                   ? generate_reject_boundary(n, grid.config.window, grid.config.nsim,
                                              grid.config.alpha, grid.config.seed,
                                              grid.config.policy, grid.config.threads)
                   : load_or_generate_boundary(grid.config.cache_dir, n, grid.config.window,
                                               grid.config.nsim, grid.config.alpha,
                                               grid.config.seed, grid.config.policy,
                                               grid.config.threads));
    }

    std::uint64_t cell_index = 0;
    for (const std::int32_t n : grid.sizes)
        for (const double strength : grid.strengths)
            for (const double p : grid.proportions) {
                CellSpec cell{grid.family, grid.kind, strength, p, n};
                const std::uint64_t cell_seed =
                    derive_seed(grid.config.seed, 0xce11ULL + cell_index);
                std::vector<ReplicateRecord> raw;
                out.cells.push_back(run_cell(cell, grid.replicates, grid.config,
                                             boundaries.at(n), cell_seed,
                                             keep_raw ? &raw : nullptr));
                out.raw.push_back(std::move(raw));
                ++cell_index;
            }
    return out;
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char ch : text) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    for (auto& p : parts) {
        const auto b = p.find_first_not_of(" \t");
        const auto e = p.find_last_not_of(" \t");
        p = b == std::string::npos ? "" : p.substr(b, e - b + 1);
    }
    return parts;
}

}  // namespace

ExperimentGrid parse_grid(std::istream& in) {
    ExperimentGrid grid;
    grid.config.window = 3;  // the study default; override per file
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) throw DataError("grid: expected key = value", line_no);
        auto trim = [](std::string t) {
            const auto b = t.find_first_not_of(" \t\r");
            const auto e = t.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : t.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "family") {
                if (value == "frank")
                    grid.family = copula::Family::frank;
                else if (value == "gaussian")
                    grid.family = copula::Family::gaussian;
                else
                    throw DataError("grid: unknown family '" + value + "'", line_no);
            } else if (key == "strength-kind") {
                if (value == "tau")
                    grid.kind = copula::StrengthKind::kendall_tau;
                else if (value == "rho")
                    grid.kind = copula::StrengthKind::spearman_rho;
                else
                    throw DataError("grid: unknown strength-kind '" + value + "'", line_no);
            } else if (key == "strengths") {
                grid.strengths.clear();
                for (const auto& v : split_list(value)) grid.strengths.push_back(std::stod(v));
            } else if (key == "proportions") {
                grid.proportions.clear();
                for (const auto& v : split_list(value)) grid.proportions.push_back(std::stod(v));
            } else if (key == "sizes") {
                grid.sizes.clear();
                for (const auto& v : split_list(value)) grid.sizes.push_back(std::stoi(v));
            } else if (key == "replicates") {
                grid.replicates = std::stoi(value);
            } else if (key == "alpha") {
                grid.config.alpha = std::stod(value);
            } else if (key == "window") {
                grid.config.window = std::stoi(value);
            } else if (key == "nsim") {
                grid.config.nsim = std::stoi(value);
            } else if (key == "seed") {
                grid.config.seed = std::stoull(value);
            } else {
                throw DataError("grid: unknown key '" + key + "'", line_no);
            }
        } catch (const std::invalid_argument&) {
            throw DataError("grid: bad value for '" + key + "'", line_no);
        } catch (const std::out_of_range&) {
            throw DataError("grid: value out of range for '" + key + "'", line_no);
        }
    }
    return grid;
}

ExperimentGrid load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("grid: cannot open " + path);
    return parse_grid(in);
}

void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& cells) {
    os << "family,kind,strength,p,n,replicates,mean_stopping_point,mean_coverage_count,"
          "mean_percent_covered,mean_percent_selected,rate_of_coverage,se_rate,"
          "se_stopping_point,se_percent_covered,skewness_k_hat,"
          "k_hat_min,k_hat_q25,k_hat_median,k_hat_q75,k_hat_max\n";
    for (const auto& c : cells) {
        os << family_name(c.cell.family) << ',' << kind_name(c.cell.kind) << ','
           << c.cell.strength << ',' << c.cell.p << ',' << c.cell.n << ',' << c.replicates << ','
           << c.mean_stopping_point << ',' << c.mean_coverage_count << ','
           << c.mean_percent_covered << ',' << c.mean_percent_selected << ','
           << c.rate_of_coverage << ',' << c.se_rate << ',' << c.se_stopping_point << ','
           << c.se_percent_covered << ',' << c.skewness_k_hat;
        for (const double q : c.k_hat_quantiles) os << ',' << q;
        os << '\n';
    }
}

void write_raw_csv(std::ostream& os, const GridResult& result) {
    os << "family,kind,strength,p,n,replicate,k_hat,n_associated,associated_selected,"
          "percent_covered,percent_selected\n";
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const auto& cell = result.cells[c].cell;
        for (const auto& r : result.raw[c]) {
            os << family_name(cell.family) << ',' << kind_name(cell.kind) << ',' << cell.strength
               << ',' << cell.p << ',' << cell.n << ',' << r.replicate << ',' << r.k_hat << ','
               << r.n_associated << ',' << r.associated_selected << ',' << r.percent_covered
               << ',' << r.percent_selected << '\n';
        }
    }
}

}  // namespace tktp::simstudy
