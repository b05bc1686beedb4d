#ifndef TKTP_CONCORDANCE_HPP
#define TKTP_CONCORDANCE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "tktp/sample.hpp"

namespace tktp {

// Largest sample size accepted when materializing a dense concordance matrix.
inline constexpr std::int32_t kDefaultMaxN = 32000;

// Dense symmetric matrix of pairwise concordance signs: +1 concordant,
// -1 discordant, 0 on the diagonal and for tied pairs. Stored row-major
// as signed bytes.
class ConcordanceMatrix {
  public:
    ConcordanceMatrix() = default;
    ConcordanceMatrix(std::int32_t n, std::vector<std::int8_t> cells, bool has_ties)
        : n_(n), cells_(std::move(cells)), has_ties_(has_ties) {}

    std::int32_t size() const { return n_; }
    bool has_ties() const { return has_ties_; }

    std::int8_t at(std::int32_t i, std::int32_t j) const {
        return cells_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                      static_cast<std::size_t>(j)];
    }

    std::span<const std::int8_t> row(std::int32_t i) const {
        return {cells_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_),
                static_cast<std::size_t>(n_)};
    }

    const std::vector<std::int8_t>& cells() const { return cells_; }

  private:
    std::int32_t n_ = 0;
    std::vector<std::int8_t> cells_;
    bool has_ties_ = false;
};

// c[i,j] = sign((x_i - x_j) * (y_i - y_j)). Indices here are 0-based positions
// in the sample, not observation ids.
ConcordanceMatrix concordance_matrix(const Sample& s, std::int32_t max_n = kDefaultMaxN);

// Kendall tau over the sub-sample induced by 0-based positions idx.
// idx must be distinct, in range, and of size >= 2.
double subset_tau(const ConcordanceMatrix& c, std::span<const std::int32_t> idx);

}  // namespace tktp

#endif
