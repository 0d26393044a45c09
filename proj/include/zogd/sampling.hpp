#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>

namespace zogd {

/// Counter-based random stream. The pair (master_seed, stream_index)
/// identifies an independent stream; `block` advances as values are drawn.
/// Copying the struct snapshots the stream state, so two copies replay the
/// same sequence. Streams are plain values and safe to hand to concurrent
/// workers as long as each worker owns its own copy.
struct SeedStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  std::uint64_t block = 0;
};

/// Philox4x32-10 keyed permutation: (key, 128-bit counter) -> 4x32 bits.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        std::uint64_t counter_hi,
                                        std::uint64_t counter_lo);

/// Draws the next pair of independent standard normals from the stream
/// (one Philox block, Box-Muller transform). Advances the stream by one block.
void next_normal_pair(SeedStream& stream, double& z0, double& z1);

/// A sampled Gaussian direction with its squared norm cached.
struct Direction {
  Eigen::VectorXd u;
  double norm_sq = 0.0;

  int dim() const { return static_cast<int>(u.size()); }
};

/// Samples u ~ N(0, I_d) from the stream. Directions with squared norm below
/// 1e-300 are resampled; each resample increments *rejections when provided.
/// Throws InvalidInputError for d = 0.
Direction sample_direction(SeedStream& stream, int d,
                           long* rejections = nullptr);

/// Squared normalized projection (u . a)^2 / |u|^2 for a unit vector a.
/// Requires | |a| - 1 | <= 1e-12 and u.norm_sq > 0. Returns a value in [0, 1];
/// returns exactly 1 when d = 1.
double squared_normalized_projection(const Direction& u,
                                     const Eigen::VectorXd& a);

}  // namespace zogd
