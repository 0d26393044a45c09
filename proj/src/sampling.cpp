#include "zogd/sampling.hpp"

#include <cmath>

#include "zogd/errors.hpp"

namespace zogd {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// Maps 64 uniform bits to a double strictly inside (0, 1).
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        std::uint64_t counter_hi,
                                        std::uint64_t counter_lo) {
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  std::uint32_t c0 = static_cast<std::uint32_t>(counter_lo);
  std::uint32_t c1 = static_cast<std::uint32_t>(counter_lo >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(counter_hi);
  std::uint32_t c3 = static_cast<std::uint32_t>(counter_hi >> 32);

  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c0, hi0, lo0);
    mulhilo(kPhiloxM1, c2, hi1, lo1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return {c0, c1, c2, c3};
}

void next_normal_pair(SeedStream& stream, double& z0, double& z1) {
  const auto words =
      philox4x32(stream.master_seed, stream.stream_index, stream.block);
  ++stream.block;
  const std::uint64_t bits0 =
      (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  const std::uint64_t bits1 =
      (static_cast<std::uint64_t>(words[2]) << 32) | words[3];
  const double u1 = to_open_unit(bits0);
  const double u2 = to_open_unit(bits1);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  z0 = radius * std::cos(angle);
  z1 = radius * std::sin(angle);
}

Direction sample_direction(SeedStream& stream, int d, long* rejections) {
  if (d < 1) {
    throw InvalidInputError("sample_direction: dimension must be >= 1");
  }
  Direction dir;
  dir.u.resize(d);
  while (true) {
    for (int i = 0; i < d; i += 2) {
      double z0, z1;
      next_normal_pair(stream, z0, z1);
      dir.u[i] = z0;
      if (i + 1 < d) dir.u[i + 1] = z1;
    }
    dir.norm_sq = dir.u.squaredNorm();
    if (dir.norm_sq >= 1e-300) break;
    if (rejections != nullptr) ++(*rejections);
  }
  return dir;
}

double squared_normalized_projection(const Direction& u,
                                     const Eigen::VectorXd& a) {
  if (a.size() != u.u.size()) {
    throw InvalidInputError(
        "squared_normalized_projection: dimension mismatch");
  }
  if (std::fabs(a.norm() - 1.0) > 1e-12) {
    throw InvalidInputError(
        "squared_normalized_projection: a must be a unit vector");
  }
  if (!(u.norm_sq > 0.0)) {
    throw InvalidInputError(
        "squared_normalized_projection: direction has zero norm");
  }
  if (u.u.size() == 1) return 1.0;
  const double inner = u.u.dot(a);
  const double zeta = inner * inner / u.norm_sq;
  return zeta > 1.0 ? 1.0 : zeta;
}

}  // namespace zogd
