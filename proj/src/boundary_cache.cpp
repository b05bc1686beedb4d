#include "tktp/boundary_cache.hpp"

#include <array>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tktp/errors.hpp"
#include "tktp/rng.hpp"

namespace tktp {

namespace {

constexpr std::array<char, 8> kMagic = {'T', 'K', 'T', 'P', 'B', 'N', 'D', '\0'};

template <typename T>
void put(std::ostream& os, const T& value) {
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool get(std::istream& is, T& value) {
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    return static_cast<bool>(is);
}

}  // namespace

std::string boundary_cache_filename(std::int32_t n, std::int32_t window, double alpha,
                                    std::int32_t nsim, std::uint64_t seed) {
    std::ostringstream name;
    name << "boundary_n" << n << "_w" << window << "_a" << alpha << "_s" << nsim << "_seed" << seed
         << "_v" << kBoundaryFormatVersion << ".bnd";
    return name.str();
}

void save_boundary(const std::string& cache_dir, const RejectBoundary& b) {
    namespace fs = std::filesystem;
    fs::create_directories(cache_dir);
    const fs::path final_path =
        fs::path(cache_dir) / boundary_cache_filename(b.n, b.window, b.alpha, b.nsim, b.seed);
    const fs::path tmp_path =
        final_path.string() + ".tmp" +
        std::to_string(Rng::mix(reinterpret_cast<std::uintptr_t>(&b) ^ b.seed) & 0xffffff);
    {
        std::ofstream os(tmp_path, std::ios::binary | std::ios::trunc);
        if (!os) throw DataError("boundary cache: cannot write " + tmp_path.string());
        os.write(kMagic.data(), kMagic.size());
        put(os, kBoundaryFormatVersion);
        put(os, static_cast<std::uint32_t>(b.n));
        put(os, static_cast<std::uint32_t>(b.window));
        put(os, b.alpha);
        put(os, static_cast<std::uint64_t>(b.nsim));
        put(os, b.seed);
        put(os, static_cast<std::uint32_t>(b.q.size()));
        os.write(reinterpret_cast<const char*>(b.q.data()),
                 static_cast<std::streamsize>(b.q.size() * sizeof(double)));
        if (!os) throw DataError("boundary cache: short write to " + tmp_path.string());
    }
    fs::rename(tmp_path, final_path);
}

std::optional<RejectBoundary> load_boundary(const std::string& cache_dir, std::int32_t n,
                                            std::int32_t window, double alpha, std::int32_t nsim,
                                            std::uint64_t seed) {
    namespace fs = std::filesystem;
    const fs::path path = fs::path(cache_dir) / boundary_cache_filename(n, window, alpha, nsim, seed);
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;

    std::array<char, 8> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kMagic) return std::nullopt;

    std::uint32_t version = 0, fn = 0, fwindow = 0, count = 0;
    std::uint64_t fnsim = 0, fseed = 0;
    double falpha = 0.0;
    if (!get(is, version) || version != kBoundaryFormatVersion) return std::nullopt;
    if (!get(is, fn) || !get(is, fwindow) || !get(is, falpha) || !get(is, fnsim) ||
        !get(is, fseed) || !get(is, count))
        return std::nullopt;
    if (fn != static_cast<std::uint32_t>(n) || fwindow != static_cast<std::uint32_t>(window) ||
        falpha != alpha || fnsim != static_cast<std::uint64_t>(nsim) || fseed != seed ||
        count != static_cast<std::uint32_t>(n - window))
        return std::nullopt;

    RejectBoundary b;
    b.n = n;
    b.window = window;
    b.alpha = alpha;
    b.nsim = nsim;
    b.seed = seed;
    b.q.resize(count);
    is.read(reinterpret_cast<char*>(b.q.data()),
            static_cast<std::streamsize>(b.q.size() * sizeof(double)));
    if (!is) return std::nullopt;
    return b;
}

RejectBoundary load_or_generate_boundary(const std::string& cache_dir, std::int32_t n,
                                         std::int32_t window, std::int32_t nsim, double alpha,
                                         std::uint64_t seed, const BcsPolicy& policy,
                                         int threads) {
    if (auto cached = load_boundary(cache_dir, n, window, alpha, nsim, seed)) return *cached;
    RejectBoundary b = generate_reject_boundary(n, window, nsim, alpha, seed, policy, threads);
    save_boundary(cache_dir, b);
    return b;
}

}  // namespace tktp
