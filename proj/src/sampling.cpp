#include "pluri/sampling.hpp"

#include <cmath>

namespace pluri {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

CVec sample_sphere(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec v(n);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v[k] = {re, im};
      norm2 += re * re + im * im;
    }
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

CVec sample_ball(int n, double r, Rng& rng) {
  CVec dir = sample_sphere(n, rng);
  const double radius = r * std::pow(uniform01(rng), 1.0 / (2.0 * n));
  return dir * radius;
}

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, result = 0.0;
  while (i > 0) {
    result += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return result;
}

std::vector<CVec> halton_ball_points(int n, double r, int count) {
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                         59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
  std::vector<CVec> pts;
  if (count <= 0) return pts;
  pts.push_back(CVec::Zero(n));
  const int dims = 2 * n;
  for (std::uint64_t i = 1; static_cast<int>(pts.size()) < count; ++i) {
    CVec p(n);
    double norm2 = 0.0;
    for (int d = 0; d < dims; ++d) {
      const double x = 2.0 * radical_inverse(i, kPrimes[d % 32]) - 1.0;
      norm2 += x * x;
      if (d < n)
        p[d].real(x);
      else
        p[d - n].imag(x);
    }
    if (norm2 < 1.0 && norm2 > 0.0) pts.push_back(p * r);
  }
  return pts;
}

}  // namespace pluri
