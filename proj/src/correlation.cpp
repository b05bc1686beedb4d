#include "tktp/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tktp/errors.hpp"

namespace tktp {

namespace {

// Number of inversions in v, counted by bottom-up merge sort.
std::int64_t count_inversions(std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> buf(n);
    std::int64_t inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            const std::size_t mid = lo + width;
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t a = lo, b = mid, out = lo;
            while (a < mid && b < hi) {
                if (v[b] < v[a]) {
                    inversions += static_cast<std::int64_t>(mid - a);
                    buf[out++] = v[b++];
                } else {
                    buf[out++] = v[a++];
                }
            }
            while (a < mid) buf[out++] = v[a++];
            while (b < hi) buf[out++] = v[b++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                      buf.begin() + static_cast<std::ptrdiff_t>(hi),
                      v.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return inversions;
}

// Sum over equal-value groups of C(group, 2) for a sorted range.
std::int64_t tied_pairs_sorted(std::span<const double> v) {
    std::int64_t total = 0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i + 1;
        while (j < v.size() && v[j] == v[i]) ++j;
        const auto g = static_cast<std::int64_t>(j - i);
        total += g * (g - 1) / 2;
        i = j;
    }
    return total;
}

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ArgumentError("paired series must have equal length");
    if (x.size() < 2) throw SizeError("need at least 2 observations");
}

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const std::size_t n = x.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    // After sorting by (x, y), an inversion in the y sequence is exactly a
    // strictly discordant pair: x-ties are sorted by y, so they never invert.
    std::vector<double> ys(n);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        ys[i] = y[order[i]];
        xs[i] = x[order[i]];
    }
    std::int64_t ties_xy = 0;  // pairs tied in both coordinates
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i + 1;
            while (j < n && xs[j] == xs[i] && ys[j] == ys[i]) ++j;
            const auto g = static_cast<std::int64_t>(j - i);
            ties_xy += g * (g - 1) / 2;
            i = j;
        }
    }
    const std::int64_t ties_x = tied_pairs_sorted(xs);
    const std::int64_t discordant = count_inversions(ys);
    // ys is now sorted; count y-ties on it.
    const std::int64_t ties_y = tied_pairs_sorted(ys);

    const auto total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
    const std::int64_t untied = total - ties_x - ties_y + ties_xy;
    const std::int64_t concordant = untied - discordant;
    return static_cast<double>(concordant - discordant) / static_cast<double>(total);
}

double kendall_tau(const Sample& s) { return kendall_tau(s.x, s.y); }

double pearson(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateInputError("pearson: zero variance in a margin");
    return sxy / std::sqrt(sxx * syy);
}

double pearson(const Sample& s) { return pearson(s.x, s.y); }

double spearman(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const auto rx = to_ranks(x);
    const auto ry = to_ranks(y);
    std::vector<double> dx(rx.begin(), rx.end());
    std::vector<double> dy(ry.begin(), ry.end());
    return pearson(dx, dy);
}

double spearman(const Sample& s) { return spearman(s.x, s.y); }

}  // namespace tktp
