#include "pluri/geomverify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <queue>

#include "pluri/error.hpp"
#include "pluri/sampling.hpp"

namespace pluri {

const char* to_string(ScanStatus s) { return s == ScanStatus::NoViolation ? "no-violation" : "violation"; }

std::string ScanVerdict::statement() const {
  const std::string count = std::to_string(samples);
  return status == ScanStatus::NoViolation ? "no counterexample found at " + count + " samples"
                                           : "violation found at " + count + " samples";
}

namespace {

double real_det(const Eigen::MatrixXd& j) {
  if (j.rows() == 2) return j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
  return j.partialPivLu().determinant();
}

CVec residual(const PHMap& f, const CVec& z, const CVec& target) { return eval_ph(f, z) - target; }

}  // namespace

NewtonResult newton_solve(const PHMap& f, const CVec& target, CVec start, const NewtonOptions& opts) {
  const int n = f.n();
  NewtonResult res;
  res.z = std::move(start);
  CVec r = residual(f, res.z, target);
  double rn = r.norm();
  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    if (rn <= opts.residual_tol) break;
    const Eigen::MatrixXd j = real_jacobian(f, res.z);
    Eigen::VectorXd rhs(2 * n);
    rhs.head(n) = -r.real();
    rhs.tail(n) = -r.imag();
    const Eigen::VectorXd dx = j.partialPivLu().solve(rhs);
    if (!dx.allFinite()) break;
    CVec dz(n);
    for (int k = 0; k < n; ++k) dz[k] = {dx[k], dx[n + k]};

    double step = 1.0;
    bool accepted = false;
    CVec cand;
    CVec rc;
    for (int h = 0; h <= opts.max_halvings; ++h, step *= 0.5) {
      cand = res.z + step * dz;
      rc = residual(f, cand, target);
      if (rc.norm() < rn) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    res.z = std::move(cand);
    r = std::move(rc);
    rn = r.norm();
    if (res.z.norm() > opts.escape_radius) break;
  }
  res.residual = rn;
  res.converged = rn <= opts.residual_tol;
  return res;
}

// ---------------------------------------------------------------------------
// Univalence

namespace {

constexpr long kPairBlock = 1024;

struct PairOutcome {
  bool violated = false;
  ScanWitness witness;
};

PairOutcome check_pair(const PHMap& f, const CVec& z1, const CVec& z2, long index, const UnivalenceConfig& cfg) {
  PairOutcome out;
  const double det = real_det(real_jacobian(f, z1));
  if (det <= 0.0) {
    out.violated = true;
    out.witness.kind = "local";
    out.witness.index = index;
    out.witness.z1 = z1;
    out.witness.det_j = det;
    out.witness.dh_singular = min_gain(d_poly(f.h(), z1)) <= kSingularThreshold;
    return out;
  }

  const CVec w1 = eval_ph(f, z1);
  const double sep_floor = 100.0 * cfg.tol;
  auto collision = [&](const CVec& other) {
    const double img = (w1 - eval_ph(f, other)).norm();
    const double pts = (z1 - other).norm();
    if (img <= cfg.tol && pts >= sep_floor && other.norm() < cfg.radius) {
      out.violated = true;
      out.witness.kind = "collision";
      out.witness.index = index;
      out.witness.z1 = z1;
      out.witness.z2 = other;
      out.witness.image_distance = img;
      out.witness.point_distance = pts;
      return true;
    }
    return false;
  };
  if (collision(z2)) return out;

  NewtonOptions opts;
  opts.max_iterations = 60;
  opts.residual_tol = 1e-14 * std::max(1.0, w1.norm());
  opts.escape_radius = 2.0 * cfg.radius + 1.0;
  const NewtonResult nr = newton_solve(f, w1, z2, opts);
  if (nr.residual <= cfg.tol && (nr.z - z1).norm() >= sep_floor) collision(nr.z);
  return out;
}

}  // namespace

ScanVerdict univalence_scan(const PHMap& f, const UnivalenceConfig& cfg) {
  if (!(cfg.radius > 0.0 && cfg.radius <= 1.0)) throw Error(ErrorKind::DomainError, "scan radius must lie in (0, 1]");
  if (cfg.pairs < 1) throw Error(ErrorKind::PreconditionViolated, "at least one pair is required");
  if (!(cfg.tol > 0.0)) throw Error(ErrorKind::PreconditionViolated, "tolerance must be positive");

  const int n = f.n();
  const long near_batch = std::max<long>(1, cfg.pairs / 10);
  const long total = cfg.pairs + near_batch;
  const long blocks = (total + kPairBlock - 1) / kPairBlock;
  const double log_lo = std::log(10.0 * cfg.tol);
  const double log_hi = std::log(0.1 * cfg.radius);
  constexpr int kStrata = 8;

  std::atomic<long> first_violation{total};
  std::vector<std::optional<ScanWitness>> found(static_cast<std::size_t>(blocks));

  parallel_blocks(blocks, cfg.workers, [&](long b) {
    const long begin = b * kPairBlock;
    if (begin >= first_violation.load()) return;
    const long end = std::min(total, begin + kPairBlock);
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(b));
    for (long i = begin; i < end; ++i) {
      CVec z1, z2;
      if (i < cfg.pairs) {
        z1 = sample_ball(n, cfg.radius, rng);
        z2 = sample_ball(n, cfg.radius, rng);
      } else {
        const long j = i - cfg.pairs;
        const double u = (static_cast<double>(j % kStrata) + uniform01(rng)) / kStrata;
        const double sep = std::exp(log_lo + u * (log_hi - log_lo));
        z1 = sample_ball(n, cfg.radius - sep, rng);
        z2 = z1 + sep * sample_sphere(n, rng);
      }
      PairOutcome o = check_pair(f, z1, z2, i, cfg);
      if (o.violated) {
        found[static_cast<std::size_t>(b)] = std::move(o.witness);
        long cur = first_violation.load();
        while (i < cur && !first_violation.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  });

  ScanVerdict v;
  v.samples = total;
  v.tol = cfg.tol;
  v.seed = cfg.seed;
  for (auto& w : found)
    if (w) {
      v.status = ScanStatus::Violation;
      v.witness = std::move(w);
      break;
    }
  return v;
}

// ---------------------------------------------------------------------------
// Covering

ScanVerdict covering_check(const PHMap& f, const CoveringConfig& cfg) {
  if (!(cfg.target_radius > 0.0)) throw Error(ErrorKind::DomainError, "target radius must be positive");
  if (!(cfg.domain_radius > 0.0)) throw Error(ErrorKind::DomainError, "domain radius must be positive");
  if (cfg.targets < 1) throw Error(ErrorKind::PreconditionViolated, "at least one target is required");

  const int n = f.n();
  const auto starts = halton_ball_points(n, cfg.domain_radius, cfg.starts);
  std::vector<CVec> start_images;
  for (const auto& s : starts) start_images.push_back(eval_ph(f, s));

  constexpr long kTargetBlock = 64;
  const long blocks = (cfg.targets + kTargetBlock - 1) / kTargetBlock;

  struct TargetResult {
    bool reached = false;
    CVec target;
    CVec best_z;
    double best_residual = std::numeric_limits<double>::infinity();
    std::optional<CVec> outside;
  };
  std::vector<TargetResult> results(static_cast<std::size_t>(cfg.targets));

  NewtonOptions opts;
  opts.residual_tol = std::min(1e-13, cfg.residual_tol * 1e-3);
  opts.escape_radius = 4.0 * cfg.domain_radius + 1.0;

  parallel_blocks(blocks, cfg.workers, [&](long b) {
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(b));
    const long begin = b * kTargetBlock;
    const long end = std::min(cfg.targets, begin + kTargetBlock);
    std::vector<std::size_t> order(starts.size());
    for (long i = begin; i < end; ++i) {
      auto& tr = results[static_cast<std::size_t>(i)];
      tr.target = sample_ball(n, cfg.target_radius, rng);
      tr.best_z = starts.front();
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::vector<double> dist(starts.size());
      for (std::size_t s = 0; s < starts.size(); ++s) dist[s] = (start_images[s] - tr.target).norm();
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return dist[a] < dist[c]; });
      for (std::size_t s : order) {
        const NewtonResult nr = newton_solve(f, tr.target, starts[s], opts);
        const bool inside = nr.z.norm() < cfg.domain_radius;
        if (inside && nr.residual < tr.best_residual) {
          tr.best_residual = nr.residual;
          tr.best_z = nr.z;
        }
        if (!inside && nr.residual < cfg.residual_tol && !tr.outside) tr.outside = nr.z;
        if (inside && nr.residual < cfg.residual_tol) {
          tr.reached = true;
          break;
        }
      }
    }
  });

  ScanVerdict v;
  v.samples = cfg.targets;
  v.tol = cfg.residual_tol;
  v.seed = cfg.seed;
  const TargetResult* hardest = nullptr;
  long hardest_index = -1;
  for (long i = 0; i < cfg.targets; ++i) {
    const auto& tr = results[static_cast<std::size_t>(i)];
    if (tr.reached) {
      ++v.reached;
      continue;
    }
    if (!hardest || tr.best_residual > hardest->best_residual) {
      hardest = &tr;
      hardest_index = i;
    }
  }
  if (hardest) {
    v.status = ScanStatus::Violation;
    ScanWitness w;
    w.kind = "uncovered-target";
    w.index = hardest_index;
    w.z1 = hardest->target;
    w.z2 = hardest->best_z;
    w.residual = hardest->best_residual;
    w.outside_preimage = hardest->outside;
    v.witness = std::move(w);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Linear connectivity

namespace {

struct Graph {
  std::vector<std::vector<std::pair<int, double>>> adj;
};

std::vector<double> dijkstra(const Graph& g, int source, std::vector<int>& parent) {
  const std::size_t n = g.adj.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  parent.assign(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(source)] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (const auto& [v, w] : g.adj[static_cast<std::size_t>(u)]) {
      const double nd = d + w;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        parent[static_cast<std::size_t>(v)] = u;
        pq.push({nd, v});
      }
    }
  }
  return dist;
}

// True when every point of the segment [a, b] lies within rc of some cloud point.
bool segment_covered(const std::vector<Eigen::VectorXd>& cloud, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                     double rc) {
  const Eigen::VectorXd dir = b - a;
  const double len = dir.norm();
  if (len <= 2.0 * rc) return true;  // the balls around both endpoints already cover it
  std::vector<std::pair<double, double>> spans;
  for (const auto& p : cloud) {
    const Eigen::VectorXd ap = p - a;
    const double t = ap.dot(dir) / len;
    const double perp2 = std::max(0.0, ap.squaredNorm() - t * t);
    if (perp2 >= rc * rc) continue;
    const double half = std::sqrt(rc * rc - perp2);
    if (t + half < 0.0 || t - half > len) continue;
    spans.push_back({t - half, t + half});
  }
  std::sort(spans.begin(), spans.end());
  double reach = 0.0;
  for (const auto& [lo, hi] : spans) {
    if (lo > reach) return false;
    reach = std::max(reach, hi);
    if (reach >= len) return true;
  }
  return reach >= len;
}

// Shortens a graph path by jumping to the farthest later vertex whose
// connecting segment stays inside the sampled region.
std::vector<int> pull_path(const std::vector<Eigen::VectorXd>& cloud, const std::vector<int>& path, double rc) {
  std::vector<int> out{path.front()};
  std::size_t i = 0;
  while (i + 1 < path.size()) {
    std::size_t next = i + 1;
    const auto& from = cloud[static_cast<std::size_t>(path[i])];
    if (segment_covered(cloud, from, cloud[static_cast<std::size_t>(path.back())], rc)) {
      next = path.size() - 1;
    } else {
      std::size_t lo = i + 1, hi = path.size() - 1;  // lo visible, hi not
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (segment_covered(cloud, from, cloud[static_cast<std::size_t>(path[mid])], rc))
          lo = mid;
        else
          hi = mid;
      }
      next = lo;
    }
    out.push_back(path[next]);
    i = next;
  }
  return out;
}

double polyline_length(const std::vector<Eigen::VectorXd>& cloud, const std::vector<int>& path) {
  double len = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k)
    len += (cloud[static_cast<std::size_t>(path[k])] - cloud[static_cast<std::size_t>(path[k - 1])]).norm();
  return len;
}

}  // namespace

ConnectivityEstimate connectivity_of_cloud(const std::vector<Eigen::VectorXd>& cloud, int k_neighbors,
                                           std::uint64_t seed, long pair_budget) {
  const int n = static_cast<int>(cloud.size());
  if (n < 100) throw Error(ErrorKind::PreconditionViolated, "connectivity estimation needs at least 100 points");
  if (k_neighbors < 1 || k_neighbors >= n) throw Error(ErrorKind::PreconditionViolated, "k_neighbors must lie in [1, points)");

  std::vector<std::vector<double>> d(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dij = (cloud[static_cast<std::size_t>(i)] - cloud[static_cast<std::size_t>(j)]).norm();
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = dij;
      d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = dij;
    }

  std::vector<double> knn(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> row = d[static_cast<std::size_t>(i)];
    row.erase(row.begin() + i);
    std::nth_element(row.begin(), row.begin() + (k_neighbors - 1), row.end());
    knn[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(k_neighbors - 1)];
  }
  std::vector<double> sorted = knn;
  std::sort(sorted.begin(), sorted.end());
  const double median = (n % 2 == 1) ? sorted[static_cast<std::size_t>(n / 2)]
                                     : 0.5 * (sorted[static_cast<std::size_t>(n / 2 - 1)] + sorted[static_cast<std::size_t>(n / 2)]);
  const double eps = 2.0 * median;

  Graph g;
  g.adj.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] <= eps)
        g.adj[static_cast<std::size_t>(i)].push_back({j, d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});

  std::vector<int> parent;
  const auto from0 = dijkstra(g, 0, parent);
  if (std::any_of(from0.begin(), from0.end(), [](double x) { return std::isinf(x); }))
    throw Error(ErrorKind::GraphDisconnected,
                "epsilon-graph is disconnected; raise the number of points or k_neighbors");

  Rng rng = make_stream(seed, 0x636f6e6eULL);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const long sources = std::min<long>(n, std::max<long>(1, static_cast<long>(std::ceil(std::sqrt(double(pair_budget))))));
  const long per_source = (pair_budget + sources - 1) / sources;
  std::uniform_int_distribution<int> pick(0, n - 1);

  ConnectivityEstimate est;
  est.epsilon = eps;
  est.points = n;
  est.k_neighbors = k_neighbors;
  est.m_hat = 1.0;
  const double rc = 0.5 * eps;
  std::vector<int> best_path;
  std::vector<int> path;
  for (long s = 0; s < sources && est.pairs_checked < pair_budget; ++s) {
    const int src = perm[static_cast<std::size_t>(s)];
    dijkstra(g, src, parent);
    for (long t = 0; t < per_source && est.pairs_checked < pair_budget; ++t) {
      int dst = pick(rng);
      if (dst == src) dst = (dst + 1) % n;
      ++est.pairs_checked;
      const double chord = d[static_cast<std::size_t>(src)][static_cast<std::size_t>(dst)];
      if (chord <= 0.0) continue;
      path.clear();
      for (int v = dst; v != -1; v = parent[static_cast<std::size_t>(v)]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      std::vector<int> pulled = pull_path(cloud, path, rc);
      const double len = polyline_length(cloud, pulled);
      const double ratio = len / chord;
      if (best_path.empty() || ratio > est.m_hat) {
        est.m_hat = std::max(ratio, 1.0);
        est.path_length = len;
        est.chord = chord;
        best_path = std::move(pulled);
      }
    }
  }
  for (int v : best_path) est.path_witness.push_back(cloud[static_cast<std::size_t>(v)]);
  return est;
}

std::vector<Eigen::VectorXd> image_cloud(const PHMap& f, double radius, int count, std::uint64_t seed) {
  const int n = f.n();
  Rng rng = make_stream(seed, 0x696d616765ULL);
  std::vector<Eigen::VectorXd> cloud;
  cloud.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const CVec w = eval_ph(f, sample_ball(n, radius, rng));
    Eigen::VectorXd p(2 * n);
    p.head(n) = w.real();
    p.tail(n) = w.imag();
    cloud.push_back(std::move(p));
  }
  return cloud;
}

ConnectivityEstimate connectivity_estimate(const PHMap& f, const ConnectivityConfig& cfg) {
  if (cfg.grid_points < 100) throw Error(ErrorKind::PreconditionViolated, "grid_points must be >= 100");
  if (!(cfg.domain_radius > 0.0 && cfg.domain_radius <= 1.0))
    throw Error(ErrorKind::DomainError, "domain radius must lie in (0, 1]");
  const auto cloud = image_cloud(f, cfg.boundary_rho * cfg.domain_radius, cfg.grid_points, cfg.seed);
  auto est = connectivity_of_cloud(cloud, cfg.k_neighbors, cfg.seed, cfg.pair_budget);
  est.boundary_rho = cfg.boundary_rho;
  return est;
}

// ---------------------------------------------------------------------------
// Landau-Bloch pipeline

LandauBlochReport landau_bloch_verify(const PHMap& f, const LandauBlochConfig& cfg) {
  const int n = f.n();
  const CVec origin = CVec::Zero(n);
  if (eval_ph(f, origin).norm() > 1e-12) throw Error(ErrorKind::HypothesisViolated, "f(0) != 0", "hypotheses");
  if (op_norm(d_poly(f.g(), origin)) > 1e-12) throw Error(ErrorKind::HypothesisViolated, "Dg(0) != 0", "hypotheses");

  LandauBlochReport rep;
  try {
    rep.alpha = std::abs(det_jacobian(f, origin));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DhSingular) throw;
    throw Error(ErrorKind::HypothesisViolated, "Dh(0) is singular", "alpha");
  }
  if (!(rep.alpha > 0.0)) throw Error(ErrorKind::HypothesisViolated, "|det J_f(0)| must be positive", "alpha");

  try {
    rep.profile = sup_generalized_volume(f, cfg.volume, cfg.budget);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::HypothesisViolated) throw;
    throw Error(ErrorKind::HypothesisViolated, e.what(), "volume", e.witness());
  }
  rep.volume = rep.profile.sup_estimate;
  if (rep.profile.diverged)
    throw Error(ErrorKind::HypothesisViolated, "generalized volume does not settle on the radius schedule", "volume");

  BlochInputs in{n, rep.alpha, rep.volume};
  rep.alpha_cap = in.alpha_cap();
  rep.radii = landau_bloch_radii(in);  // throws HypothesisViolated at stage "cap"

  UnivalenceConfig ucfg;
  ucfg.radius = rep.radii.ru;
  ucfg.pairs = cfg.pairs;
  ucfg.seed = substream_seed(cfg.volume.seed, 1);
  ucfg.tol = cfg.tol;
  ucfg.workers = cfg.volume.workers;
  rep.univalence = univalence_scan(f, ucfg);

  CoveringConfig ccfg;
  ccfg.domain_radius = rep.radii.ru;
  ccfg.target_radius = rep.radii.rc;
  ccfg.targets = cfg.targets;
  ccfg.seed = substream_seed(cfg.volume.seed, 2);
  ccfg.workers = cfg.volume.workers;
  rep.covering = covering_check(f, ccfg);

  rep.pass = rep.univalence.status == ScanStatus::NoViolation && rep.covering.status == ScanStatus::NoViolation;
  return rep;
}

}  // namespace pluri
