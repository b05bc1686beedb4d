#ifndef TKTP_CORRELATION_HPP
#define TKTP_CORRELATION_HPP

#include <span>

#include "tktp/sample.hpp"

namespace tktp {

// Kendall tau coefficient T = (A - D) / C(n,2), where A and D count strictly
// concordant and discordant pairs; tied pairs contribute zero. Computed in
// O(n log n) by merge-sort inversion counting, so it equals the normalized
// upper-triangle sum of the concordance matrix without materializing it.
double kendall_tau(std::span<const double> x, std::span<const double> y);
double kendall_tau(const Sample& s);

// Product-moment correlation. Throws DegenerateInputError on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);
double pearson(const Sample& s);

// Pearson correlation of the rank vectors.
double spearman(std::span<const double> x, std::span<const double> y);
double spearman(const Sample& s);

}  // namespace tktp

#endif
