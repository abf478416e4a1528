#pragma once

// Seeded random streams and point samplers shared by the Monte-Carlo and
// scanning modules. Work is cut into fixed-size blocks, each with its own
// substream, so results do not depend on how blocks are scheduled.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace pluri {

using Rng = std::mt19937_64;
using CVec = Eigen::VectorXcd;

/// SplitMix64 finaliser applied to (seed, index): seeds for independent substreams.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

inline Rng make_stream(std::uint64_t seed, std::uint64_t index) { return Rng(substream_seed(seed, index)); }

double uniform01(Rng& rng);

/// Uniform point on the unit sphere of C^n (real dimension 2n).
CVec sample_sphere(int n, Rng& rng);

/// Uniform point in the ball of radius r in C^n: Gaussian direction, radius r*U^(1/2n).
CVec sample_ball(int n, double r, Rng& rng);

/// Radical inverse of i in the given prime base (Halton coordinate).
double radical_inverse(std::uint64_t i, unsigned base);

/// Deterministic low-discrepancy points in the ball of radius r: the origin,
/// then Halton points of the cube [-1,1]^{2n} that fall inside the unit ball.
std::vector<CVec> halton_ball_points(int n, double r, int count);

/// Runs fn(block) for block in [0, blocks) on up to `workers` threads.
template <class Fn>
void parallel_blocks(long blocks, int workers, Fn&& fn) {
  if (blocks <= 0) return;
  const long threads = std::clamp<long>(workers, 1, blocks);
  if (threads == 1) {
    for (long b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<long> next{0};
  std::mutex guard;
  long failed_block = blocks;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (long t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (long b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
        try {
          fn(b);
        } catch (...) {
          std::lock_guard lock(guard);
          // lowest failing block wins so the rethrown error is schedule-independent
          if (b < failed_block) {
            failed_block = b;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pluri
