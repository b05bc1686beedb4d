#include "tktp/sample.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "tktp/errors.hpp"

namespace tktp {

Sample::Sample(std::vector<double> xs, std::vector<double> ys)
    : x(std::move(xs)), y(std::move(ys)) {
    ids.resize(x.size());
    std::iota(ids.begin(), ids.end(), 1);
}

Sample::Sample(std::vector<double> xs, std::vector<double> ys, std::vector<std::int32_t> obs_ids)
    : x(std::move(xs)), y(std::move(ys)), ids(std::move(obs_ids)) {}

void Sample::check(std::size_t min_n) const {
    if (x.size() != y.size() || x.size() != ids.size())
        throw ArgumentError("sample: x, y and ids must have equal length");
    if (x.size() < min_n)
        throw SizeError("sample: need at least " + std::to_string(min_n) +
                        " observations, got " + std::to_string(x.size()));
    std::unordered_set<std::int32_t> seen(ids.begin(), ids.end());
    if (seen.size() != ids.size()) throw ArgumentError("sample: ids must be distinct");
}

std::vector<std::int32_t> to_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw SizeError("to_ranks: need at least 2 values");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Sorting by (value, index) makes tied values keep their input order.
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return a < b;
    });
    std::vector<std::int32_t> ranks(n);
    for (std::size_t pos = 0; pos < n; ++pos)
        ranks[order[pos]] = static_cast<std::int32_t>(pos) + 1;
    return ranks;
}

Sample negate_y(const Sample& s) {
    Sample out = s;
    for (double& v : out.y) v = -v;
    return out;
}

}  // namespace tktp
