#ifndef TKTP_SCREEN_HPP
#define TKTP_SCREEN_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tktp/multistage.hpp"

namespace tktp::screen {

// Aligned multi-series table: one shared, strictly increasing date axis and
// a completeness mask per cell. Date labels are ISO dates (YYYY-MM-DD) or
// plain integers.
struct PriceTable {
    std::vector<std::string> dates;
    std::vector<long long> date_keys;           // sortable parse of dates
    std::vector<std::string> names;             // series names, header order
    std::vector<std::vector<double>> values;    // [series][row]
    std::vector<std::vector<std::uint8_t>> present;

    std::size_t rows() const { return dates.size(); }
    std::size_t series_count() const { return names.size(); }
    std::size_t series_index(const std::string& name) const;  // throws ArgumentError
};

// Header row of series names; first column holds the time labels; blank
// cells are recorded as missing. Duplicate series names, duplicate or
// out-of-order dates, and unparseable rows are errors (with row numbers).
PriceTable load_price_csv(const std::string& path);
PriceTable parse_price_csv(std::istream& in, const std::string& origin);

// Pairs (predictor[t - lag], target[t]) over rows where both cells are
// present. Sample ids are the 0-based target row indices t, which makes
// selections comparable across series screened on the same table.
Sample lag_align(const PriceTable& table, const std::string& target,
                 const std::string& predictor, std::int32_t lag, std::int32_t min_pairs = 30);

struct ScreenConfig {
    TktpConfig tktp{};
    double min_fraction = 0.60;
    bool negate = false;        // screen negative association (y -> -y)
    std::int32_t min_pairs = 30;
    bool require_complete = false;  // reject series with any gap instead of masking
    int threads = 0;
};

struct PairResult {
    std::string name;
    std::int32_t lag = 0;
    std::int32_t n_pairs = 0;
    std::int32_t k_hat = 0;
    std::vector<std::int32_t> selection;  // target row indices, ascending
    double fraction = 0.0;                // |selection| / n_pairs
    double pearson = 0.0;                 // over the selection; NaN when |selection| < 3
    double kendall = 0.0;
};

struct SeriesError {
    std::string name;
    std::string message;
};

struct ScreenOutcome {
    std::vector<PairResult> passed;   // fraction >= min_fraction, by name
    std::vector<PairResult> all;      // every screened series, by name
    std::vector<SeriesError> errors;  // per-series failures (not fatal)
};

// Screens every series in `targets` (default: all series except the
// predictor) against the lagged predictor. Correlations are computed on the
// original values even when negate is set.
ScreenOutcome screen_pairs(const PriceTable& table, const std::string& predictor,
                           std::int32_t lag, const ScreenConfig& config,
                           std::span<const std::string> targets = {});

// |A and B| / |A or B| over sorted index sets; 0 when both are empty
// (set *both_empty to detect that case and warn).
double jaccard(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
               bool* both_empty = nullptr);

struct ClusterReport {
    double threshold = 0.0;
    // Clusters of size >= 2, members sorted by name; clusters ordered by
    // descending size then first member. Every within-cluster pair has
    // Jaccard similarity > threshold.
    std::vector<std::vector<std::string>> clusters;
    std::vector<std::string> unclustered;
    // Per cluster: (target row index, member count including that row).
    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> weekly_counts;
};

// Agglomerative complete-linkage on distance 1 - J, stopped when no merge
// keeps all within-cluster similarities above the threshold.
ClusterReport complete_linkage_clusters(std::span<const PairResult> results, double threshold);

}  // namespace tktp::screen

#endif
