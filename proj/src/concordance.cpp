#include "tktp/concordance.hpp"

#include <string>
#include <unordered_set>

#include "tktp/errors.hpp"

namespace tktp {

ConcordanceMatrix concordance_matrix(const Sample& s, std::int32_t max_n) {
    s.check(2);
    const auto n = static_cast<std::int32_t>(s.size());
    if (n > max_n)
        throw SizeError("concordance_matrix: n = " + std::to_string(n) +
                        " exceeds configured maximum " + std::to_string(max_n));
    std::vector<std::int8_t> cells(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    bool ties = false;
    for (std::int32_t i = 0; i < n; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
        for (std::int32_t j = i + 1; j < n; ++j) {
            const double dx = s.x[static_cast<std::size_t>(i)] - s.x[static_cast<std::size_t>(j)];
            const double dy = s.y[static_cast<std::size_t>(i)] - s.y[static_cast<std::size_t>(j)];
            const double prod = dx * dy;
            std::int8_t sign = 0;
            if (prod > 0.0)
                sign = 1;
            else if (prod < 0.0)
                sign = -1;
            else
                ties = true;
            cells[base + static_cast<std::size_t>(j)] = sign;
            cells[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(i)] = sign;
        }
    }
    return {n, std::move(cells), ties};
}

double subset_tau(const ConcordanceMatrix& c, std::span<const std::int32_t> idx) {
    const std::size_t k = idx.size();
    if (k < 2) throw ArgumentError("subset_tau: need at least 2 indices");
    std::unordered_set<std::int32_t> seen;
    for (const std::int32_t i : idx) {
        if (i < 0 || i >= c.size())
            throw ArgumentError("subset_tau: index " + std::to_string(i) + " out of range");
        if (!seen.insert(i).second)
            throw ArgumentError("subset_tau: duplicate index " + std::to_string(i));
    }
    std::int64_t sum = 0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) sum += c.at(idx[a], idx[b]);
    const double pairs = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
    return static_cast<double>(sum) / pairs;
}

}  // namespace tktp
