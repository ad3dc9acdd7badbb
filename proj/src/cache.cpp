#include <cstdint>
#include <cstring>
#include <fstream>

#include "rrte/spectral.hpp"

namespace rrte {

// Cache layout (host endian):
//   magic "RRTEDC01", mu_a, mu_s, phase digest, l_max, block_dim,
//   then per block: n_modes, lambda[n_modes], vec[dim*n_modes].
namespace {
constexpr char kMagic[8] = {'R', 'R', 'T', 'E', 'D', 'C', '0', '1'};

template <class T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::ifstream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return bool(is);
}
}  // namespace

void save_decomposition(const std::filesystem::path& path,
                        const SpectralDecomposition& d) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open cache file for writing: " + path.string());
  os.write(kMagic, sizeof kMagic);
  put(os, d.medium.mu_a());
  put(os, d.medium.mu_s());
  std::uint64_t dig = d.medium.phase_digest();
  put(os, dig);
  std::int32_t lm = d.l_max, bd = d.block_dim;
  put(os, lm);
  put(os, bd);
  for (const auto& b : d.blocks) {
    std::int32_t nm = b.n_modes(), dim = b.dim;
    put(os, dim);
    put(os, nm);
    os.write(reinterpret_cast<const char*>(b.lambda.data()),
             std::streamsize(b.lambda.size() * sizeof(double)));
    os.write(reinterpret_cast<const char*>(b.vec.data()),
             std::streamsize(b.vec.size() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("short write to cache file: " + path.string());
}

std::optional<SpectralDecomposition> load_decomposition(
    const std::filesystem::path& path, const OpticalMedium& medium,
    const DecompParams& p) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) return std::nullopt;
  double mu_a = 0, mu_s = 0;
  std::uint64_t dig = 0;
  std::int32_t lm = 0, bd = 0;
  if (!get(is, mu_a) || !get(is, mu_s) || !get(is, dig) || !get(is, lm) || !get(is, bd))
    return std::nullopt;
  if (mu_a != medium.mu_a() || mu_s != medium.mu_s() ||
      dig != medium.phase_digest() || lm < p.l_max || bd != p.block_dim)
    return std::nullopt;
  SpectralDecomposition d{medium, p.l_max, p.block_dim, {}};
  d.blocks.reserve(lm + 1);
  for (int M = 0; M <= lm; ++M) {
    std::int32_t dim = 0, nm = 0;
    if (!get(is, dim) || !get(is, nm)) return std::nullopt;
    BlockSpectrum b;
    b.M = M;
    b.dim = dim;
    b.lambda.resize(nm);
    b.vec.resize(std::size_t(dim) * nm);
    is.read(reinterpret_cast<char*>(b.lambda.data()),
            std::streamsize(b.lambda.size() * sizeof(double)));
    is.read(reinterpret_cast<char*>(b.vec.data()),
            std::streamsize(b.vec.size() * sizeof(double)));
    if (!is) return std::nullopt;
    b.vec_log.resize(b.vec.size());
    b.vec_sign.resize(b.vec.size());
    for (std::size_t i = 0; i < b.vec.size(); ++i) {
      const double v = b.vec[i];
      b.vec_sign[i] = v > 0 ? 1 : (v < 0 ? -1 : 0);
      b.vec_log[i] = v == 0.0 ? -std::numeric_limits<double>::infinity()
                              : std::log(std::abs(v));
    }
    if (M <= p.l_max) d.blocks.push_back(std::move(b));
  }
  return d;
}

}  // namespace rrte
