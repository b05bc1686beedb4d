#ifndef TKTP_BOUNDARY_CACHE_HPP
#define TKTP_BOUNDARY_CACHE_HPP

#include <optional>
#include <string>

#include "tktp/multistage.hpp"

namespace tktp {

// On-disk boundary cache. One little-endian binary file per boundary:
//
//   bytes 0..7   magic "TKTPBND\0"
//   u32          format version (kBoundaryFormatVersion)
//   u32          n
//   u32          window
//   f64          alpha
//   u64          nsim
//   u64          seed
//   u32          count = n - window
//   f64[count]   q values for stages window+1 .. n
//
// A file whose magic, version or parameters do not match the request is
// ignored (and regenerated by load_or_generate_boundary). Writes go through
// a temp file followed by an atomic rename.
inline constexpr std::uint32_t kBoundaryFormatVersion = 1;

std::string boundary_cache_filename(std::int32_t n, std::int32_t window, double alpha,
                                    std::int32_t nsim, std::uint64_t seed);

void save_boundary(const std::string& cache_dir, const RejectBoundary& boundary);

// Returns the cached boundary exactly matching (n, window, alpha, nsim, seed),
// or nullopt when absent or unreadable.
std::optional<RejectBoundary> load_boundary(const std::string& cache_dir, std::int32_t n,
                                            std::int32_t window, double alpha, std::int32_t nsim,
                                            std::uint64_t seed);

RejectBoundary load_or_generate_boundary(const std::string& cache_dir, std::int32_t n,
                                         std::int32_t window, std::int32_t nsim, double alpha,
                                         std::uint64_t seed, const BcsPolicy& policy = {},
                                         int threads = 0);

}  // namespace tktp

#endif
