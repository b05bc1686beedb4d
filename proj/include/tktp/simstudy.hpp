#ifndef TKTP_SIMSTUDY_HPP
#define TKTP_SIMSTUDY_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tktp/copula.hpp"
#include "tktp/multistage.hpp"

namespace tktp::simstudy {

// One cell of the copula-mixture study: a mixture of `strength`-associated
// draws (proportion p) with independent draws, screened at sample size n.
struct CellSpec {
    copula::Family family = copula::Family::frank;
    copula::StrengthKind kind = copula::StrengthKind::kendall_tau;
    double strength = 0.5;
    double p = 0.3;
    std::int32_t n = 500;
};

struct ReplicateRecord {
    std::int32_t replicate = 0;
    std::int32_t k_hat = 0;
    std::int32_t n_associated = 0;
    std::int32_t associated_selected = 0;
    double percent_covered = 0.0;  // 100 * selected-associated / associated
    double percent_selected = 0.0;  // 100 * k_hat / n
};

struct CellSummary {
    CellSpec cell;
    std::int32_t replicates = 0;
    double mean_stopping_point = 0.0;
    double mean_coverage_count = 0.0;
    double mean_percent_covered = 0.0;
    double mean_percent_selected = 0.0;
    double rate_of_coverage = 0.0;  // NaN when mean stopping point is 0
    double se_rate = 0.0;
    double se_stopping_point = 0.0;
    double se_percent_covered = 0.0;
    double skewness_k_hat = 0.0;
    std::array<double, 5> k_hat_quantiles{};  // min, q25, median, q75, max
};

struct StudyConfig {
    double alpha = 0.05;
    std::int32_t window = 5;
    std::int32_t nsim = 10000;
    std::uint64_t seed = 1;
    BcsPolicy policy{};
    std::string cache_dir{};
    int threads = 0;
};

// Runs R replicate screens of one cell against a shared null boundary
// (which must match the cell's n and the config's window). Raw per-replicate
// rows are appended to *raw when given. Deterministic in (cell, R, seed).
CellSummary run_cell(const CellSpec& cell, std::int32_t R, const StudyConfig& config,
                     const RejectBoundary& boundary, std::uint64_t cell_seed,
                     std::vector<ReplicateRecord>* raw = nullptr);

// Rate of coverage: mean percent covered over mean percent selected.
// Empty when the mean stopping point is zero.
std::optional<double> rate_of_coverage(const CellSummary& summary);

// Detectability floor: expected length of the longest increasing subsequence
// under independence, 2 sqrt(n) - 1.758 n^(1/6).
double lis_power_floor(double n);

struct ExperimentGrid {
    copula::Family family = copula::Family::frank;
    copula::StrengthKind kind = copula::StrengthKind::kendall_tau;
    std::vector<double> strengths;
    std::vector<double> proportions;
    std::vector<std::int32_t> sizes;
    std::int32_t replicates = 1;
    StudyConfig config{};
};

struct GridResult {
    std::vector<CellSummary> cells;
    // Raw log rows, parallel per-cell: raw[i] belongs to cells[i].
    std::vector<std::vector<ReplicateRecord>> raw;
};

// All cells share one boundary per (n, window, alpha); boundaries are cached
// via config.cache_dir when set.
GridResult run_grid(const ExperimentGrid& grid, bool keep_raw);

// Key-value grid file, e.g.
//   family = frank
//   strengths = 0.3, 0.5, 0.7
//   proportions = 0.3, 0.4
//   sizes = 500
//   replicates = 2000
//   window = 3
// Unknown keys are an error; omitted keys keep their defaults.
ExperimentGrid parse_grid(std::istream& in);
ExperimentGrid load_grid(const std::string& path);

void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& cells);
void write_raw_csv(std::ostream& os, const GridResult& result);

}  // namespace tktp::simstudy

#endif
