#ifndef TKTP_SAMPLE_HPP
#define TKTP_SAMPLE_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace tktp {

// A paired bivariate sample. ids identify observations in reports and
// selections; they default to 1..n and must be distinct.
struct Sample {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::int32_t> ids;

    Sample() = default;
    Sample(std::vector<double> xs, std::vector<double> ys);
    Sample(std::vector<double> xs, std::vector<double> ys, std::vector<std::int32_t> obs_ids);

    std::size_t size() const { return x.size(); }

    // Throws SizeError / ArgumentError if the invariants do not hold.
    void check(std::size_t min_n = 2) const;
};

// Ranks with ties broken by original index order: rank = 1 + |{j : v[j] < v[i]}|
// + |{j < i : v[j] == v[i]}|. For distinct values this is the usual rank vector.
std::vector<std::int32_t> to_ranks(std::span<const double> values);

// Same sample with y negated; screening it targets negative association.
Sample negate_y(const Sample& s);

}  // namespace tktp

#endif
