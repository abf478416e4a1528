#pragma once

// Seeded Monte-Carlo integration over balls of C^n under the normalised
// volume measure (the unit ball has mass 1, so B(r) has mass r^{2n}).

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pluri/pmap.hpp"

namespace pluri {

/// Samples per substream block. Results depend on (seed, samples) only, not on
/// the number of worker threads.
inline constexpr long kVolumeBlock = 4096;

class IntegralEstimate {
 public:
  IntegralEstimate() = default;
  IntegralEstimate(long samples, double mean, double m2, double scale, std::uint64_t seed, double r)
      : samples_(samples), mean_(mean), m2_(m2), scale_(scale), seed_(seed), r_(r) {}

  double value() const noexcept { return mean_ * scale_; }
  /// Sample standard deviation over sqrt(samples), scaled like the value.
  double std_error() const noexcept;
  long samples() const noexcept { return samples_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double r() const noexcept { return r_; }

  double mean() const noexcept { return mean_; }
  double m2() const noexcept { return m2_; }
  double scale() const noexcept { return scale_; }

 private:
  long samples_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;  // sum of squared deviations from the mean
  double scale_ = 1.0;
  std::uint64_t seed_ = 0;
  double r_ = 1.0;
};

struct IntegrationConfig {
  long samples = 100000;
  std::uint64_t seed = 42;
  int workers = 1;
};

using Integrand = std::function<double(const CVec&)>;

/// Mean of the integrand at uniform points of B(r), times r^{2n}.
/// Throws IntegrandNonFinite with the offending point.
IntegralEstimate integrate_ball(const Integrand& integrand, int n, double r, const IntegrationConfig& cfg);

/// Integrand op_norm(Dh)^{2n} (1 - op_norm(omega)^2)^n. Samples where Dh is
/// singular or ||omega|| >= 1 contribute zero; more than 0.1% of them raises
/// HypothesisViolated with the first such point.
IntegralEstimate generalized_volume(const PHMap& f, double r, const IntegrationConfig& cfg);

/// Integrand |det J_f| under the same hypothesis monitoring.
IntegralEstimate real_volume(const PHMap& f, double r, const IntegrationConfig& cfg);

struct VolumeProfile {
  std::vector<double> radii;
  std::vector<IntegralEstimate> values;
  double sup_estimate = 0.0;
  bool diverged = false;
};

/// Generalized volume at r_k = 1 - 2^{-k}, k = 1..budget (same seed at every
/// radius). diverged is set when the last two relative increments both exceed 10%.
VolumeProfile sup_generalized_volume(const PHMap& f, const IntegrationConfig& cfg, int budget);

struct VolumeInequality {
  double r = 0.0;
  double k_r_pow_n = 0.0;        // ((1+r)/(1-r))^n
  IntegralEstimate real;         // integral of |det J_f|
  IntegralEstimate generalized;  // V_f(r)
  double difference = 0.0;       // real - K_r^n * generalized, per-sample paired
  double difference_stderr = 0.0;
  bool pass = false;
  bool hard_violation = false;   // difference beyond 5 standard errors
};

/// Both sides from the same sample points; passes iff
/// real <= K_r^n * generalized + 3 * (stderr of the paired difference).
VolumeInequality volume_inequality_check(const PHMap& f, double r, const IntegrationConfig& cfg);

}  // namespace pluri
