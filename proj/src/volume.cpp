#include "pluri/volume.hpp"

#include <cmath>
#include <sstream>

#include "pluri/error.hpp"
#include "pluri/sampling.hpp"

namespace pluri {

double IntegralEstimate::std_error() const noexcept {
  if (samples_ < 2) return 0.0;
  const double n = static_cast<double>(samples_);
  return std::sqrt(m2_ / (n - 1.0)) / std::sqrt(n) * scale_;
}

namespace {

struct Accum {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
};

Accum merge(const Accum& a, const Accum& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Accum out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count), n = static_cast<double>(out.count);
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * (nb / n);
  out.m2 = a.m2 + b.m2 + delta * delta * (na * nb / n);
  return out;
}

enum class SampleStatus { Ok, Bad };

struct BlockResult {
  std::vector<Accum> acc;
  long bad = 0;
  long first_bad = -1;
  CVec first_bad_point;
};

// Pairwise reduction over blocks in a fixed tree order.
std::vector<Accum> reduce(const std::vector<BlockResult>& blocks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return blocks[lo].acc;
  const std::size_t mid = lo + (hi - lo) / 2;
  auto left = reduce(blocks, lo, mid);
  const auto right = reduce(blocks, mid, hi);
  for (std::size_t k = 0; k < left.size(); ++k) left[k] = merge(left[k], right[k]);
  return left;
}

std::vector<cplx> to_std(const CVec& z) { return {z.data(), z.data() + z.size()}; }

std::string describe(const CVec& z) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index k = 0; k < z.size(); ++k) os << (k ? ", " : "") << z[k].real() << (z[k].imag() < 0 ? "" : "+") << z[k].imag() << "i";
  os << ")";
  return os.str();
}

// Runs a k-output integrand over B(r). fn writes `outputs` values and returns
// Bad for points where the hypothesis fails (those contribute zeros).
template <class Fn>
std::vector<IntegralEstimate> integrate_multi(int n, double r, const IntegrationConfig& cfg, std::size_t outputs,
                                              Fn&& fn, bool monitor, const char* what) {
  if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorKind::DomainError, "radius must lie in (0, 1]");
  if (cfg.samples < 100) throw Error(ErrorKind::PreconditionViolated, "at least 100 samples are required");
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "dimension must be >= 1");

  const long blocks = (cfg.samples + kVolumeBlock - 1) / kVolumeBlock;
  std::vector<BlockResult> results(static_cast<std::size_t>(blocks));
  parallel_blocks(blocks, cfg.workers, [&](long b) {
    auto& res = results[static_cast<std::size_t>(b)];
    res.acc.assign(outputs, Accum{});
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(b));
    const long begin = b * kVolumeBlock;
    const long end = std::min(cfg.samples, begin + kVolumeBlock);
    std::vector<double> vals(outputs);
    for (long i = begin; i < end; ++i) {
      const CVec z = sample_ball(n, r, rng);
      std::fill(vals.begin(), vals.end(), 0.0);
      const SampleStatus st = fn(z, vals);
      if (st == SampleStatus::Bad) {
        std::fill(vals.begin(), vals.end(), 0.0);
        if (res.bad++ == 0) {
          res.first_bad = i;
          res.first_bad_point = z;
        }
      }
      for (std::size_t k = 0; k < outputs; ++k) {
        if (!std::isfinite(vals[k]))
          throw Error(ErrorKind::IntegrandNonFinite, std::string(what) + ": integrand is not finite at " + describe(z), {},
                      to_std(z));
        res.acc[k].push(vals[k]);
      }
    }
  });

  if (monitor) {
    long bad = 0;
    const BlockResult* first = nullptr;
    for (const auto& res : results) {
      bad += res.bad;
      if (!first && res.bad > 0) first = &res;
    }
    if (static_cast<double>(bad) > 1e-3 * static_cast<double>(cfg.samples))
      throw Error(ErrorKind::HypothesisViolated,
                  std::string(what) + ": " + std::to_string(bad) + " of " + std::to_string(cfg.samples) +
                      " samples have singular Dh or ||omega|| >= 1; first at " + describe(first->first_bad_point),
                  what, to_std(first->first_bad_point));
  }

  const auto acc = reduce(results, 0, results.size());
  const double mass = std::pow(r, 2.0 * n);
  std::vector<IntegralEstimate> out;
  for (const auto& a : acc) out.emplace_back(a.count, a.mean, a.m2, mass, cfg.seed, r);
  return out;
}

struct PointTerms {
  bool ok = false;
  double generalized = 0.0;
  double real = 0.0;
};

PointTerms evaluate_terms(const PHMap& f, const CVec& z) {
  const CMat dh = d_poly(f.h(), z);
  const auto [dh_norm, dh_gain] = singular_extremes(dh);
  if (dh_gain <= kSingularThreshold) return {};
  const CMat dg = d_poly(f.g(), z);
  const CMat w = dg * inverse(dh);
  const double wn = op_norm(w);
  if (wn >= 1.0) return {};
  const int n = f.n();
  PointTerms t;
  t.ok = true;
  t.generalized = std::pow(dh_norm, 2.0 * n) * std::pow(1.0 - wn * wn, n);
  const cplx inner = determinant(CMat::identity(n) - w * w.conj());
  if (std::abs(inner.imag()) > 1e-10 * std::max(1.0, std::abs(inner)))
    throw Error(ErrorKind::Internal, "block determinant has a non-negligible imaginary part");
  t.real = std::abs(std::norm(determinant(dh)) * inner.real());
  return t;
}

}  // namespace

IntegralEstimate integrate_ball(const Integrand& integrand, int n, double r, const IntegrationConfig& cfg) {
  auto fn = [&](const CVec& z, std::vector<double>& out) {
    out[0] = integrand(z);
    return SampleStatus::Ok;
  };
  return integrate_multi(n, r, cfg, 1, fn, false, "integrate_ball").front();
}

IntegralEstimate generalized_volume(const PHMap& f, double r, const IntegrationConfig& cfg) {
  if (!(r < 1.0)) throw Error(ErrorKind::DomainError, "generalized volume needs r in (0, 1)");
  auto fn = [&](const CVec& z, std::vector<double>& out) {
    const PointTerms t = evaluate_terms(f, z);
    out[0] = t.generalized;
    return t.ok ? SampleStatus::Ok : SampleStatus::Bad;
  };
  return integrate_multi(f.n(), r, cfg, 1, fn, true, "generalized_volume").front();
}

IntegralEstimate real_volume(const PHMap& f, double r, const IntegrationConfig& cfg) {
  if (!(r < 1.0)) throw Error(ErrorKind::DomainError, "real volume needs r in (0, 1)");
  auto fn = [&](const CVec& z, std::vector<double>& out) {
    const PointTerms t = evaluate_terms(f, z);
    out[0] = t.real;
    return t.ok ? SampleStatus::Ok : SampleStatus::Bad;
  };
  return integrate_multi(f.n(), r, cfg, 1, fn, true, "real_volume").front();
}

VolumeProfile sup_generalized_volume(const PHMap& f, const IntegrationConfig& cfg, int budget) {
  if (budget < 3) throw Error(ErrorKind::PreconditionViolated, "sup_generalized_volume needs a budget of at least 3 radii");
  VolumeProfile prof;
  for (int k = 1; k <= budget; ++k) {
    const double r = 1.0 - std::ldexp(1.0, -k);
    prof.radii.push_back(r);
    prof.values.push_back(generalized_volume(f, r, cfg));
  }
  prof.sup_estimate = prof.values.back().value();
  const auto rel_inc = [&](std::size_t i) {
    const double prev = prof.values[i - 1].value();
    return prev > 0.0 ? (prof.values[i].value() - prev) / prev : 0.0;
  };
  const std::size_t m = prof.values.size();
  prof.diverged = rel_inc(m - 1) > 0.1 && rel_inc(m - 2) > 0.1;
  return prof;
}

VolumeInequality volume_inequality_check(const PHMap& f, double r, const IntegrationConfig& cfg) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::DomainError, "volume inequality needs r in (0, 1)");
  const int n = f.n();
  const double kr = std::pow((1.0 + r) / (1.0 - r), n);
  auto fn = [&](const CVec& z, std::vector<double>& out) {
    const PointTerms t = evaluate_terms(f, z);
    out[0] = t.real;
    out[1] = t.generalized;
    out[2] = t.real - kr * t.generalized;
    return t.ok ? SampleStatus::Ok : SampleStatus::Bad;
  };
  const auto est = integrate_multi(n, r, cfg, 3, fn, true, "volume_inequality");
  VolumeInequality v;
  v.r = r;
  v.k_r_pow_n = kr;
  v.real = est[0];
  v.generalized = est[1];
  v.difference = est[2].value();
  v.difference_stderr = est[2].std_error();
  v.pass = v.difference <= 3.0 * v.difference_stderr;
  v.hard_violation = v.difference > 5.0 * v.difference_stderr;
  return v;
}

}  // namespace pluri
