#include "mixent/sd_search.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "mixent/logsum.hpp"

namespace mixent {

namespace {

using cx = std::complex<double>;

std::vector<cx> scaled_points(const Constellation& constellation, double rho) {
  const double amp = std::sqrt(rho);
  std::vector<cx> pts(constellation.points.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = amp * constellation.points[i];
  return pts;
}

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.indices < b.indices;
}

}  // namespace

SearchSpec SearchSpec::dfs(double alpha) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("DFS alpha must be >= 1");
  SearchSpec s;
  s.mode = SearchMode::Dfs;
  s.alpha = alpha;
  return s;
}

SearchSpec SearchSpec::bfs(std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("BFS k must be >= 1");
  SearchSpec s;
  s.mode = SearchMode::Bfs;
  s.k = k;
  return s;
}

double cost_step(double c_prev, const CVec& v, const CMat& r, int depth,
                 const CVec& partial) {
  const int n = static_cast<int>(r.rows());
  if (depth < 1 || depth > n) throw std::invalid_argument("depth out of range");
  if (partial.size() != depth) throw std::invalid_argument("partial length != depth");
  const int row = n - depth;
  cx acc = v(row);
  for (int i = 0; i < depth; ++i) acc -= r(row, row + i) * partial(i);
  return c_prev + std::norm(acc);
}

std::vector<std::int32_t> babai_anchor_tri(const CMat& r, const CVec& v,
                                           const Constellation& constellation,
                                           double rho) {
  const int n = static_cast<int>(r.rows());
  const auto pts = scaled_points(constellation, rho);

  // Unconstrained ZF solution by back substitution, then per-coordinate
  // nearest-point quantization (not successive cancellation).
  CVec y(n);
  for (int i = n - 1; i >= 0; --i) {
    cx acc = v(i);
    for (int j = i + 1; j < n; ++j) acc -= r(i, j) * y(j);
    y(i) = acc / r(i, i);
  }

  std::vector<std::int32_t> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::int32_t best_m = 0;
    for (std::size_t m = 0; m < pts.size(); ++m) {
      const double d = std::norm(y(i) - pts[m]);
      if (d < best) {
        best = d;
        best_m = static_cast<std::int32_t>(m);
      }
    }
    idx[static_cast<std::size_t>(i)] = best_m;
  }
  return idx;
}

std::vector<std::int32_t> babai_anchor(const ChannelInstance& channel,
                                       const CVec& z,
                                       const Constellation& constellation,
                                       double rho) {
  const CVec v = channel.q.adjoint() * z;
  return babai_anchor_tri(channel.r, v, constellation, rho);
}

double sphere_radius_sq(double alpha, const CVec& v, const CMat& r,
                        const std::vector<std::int32_t>& anchor,
                        const Constellation& constellation, double rho) {
  const auto pts = scaled_points(constellation, rho);
  CVec d(static_cast<Eigen::Index>(anchor.size()));
  for (std::size_t i = 0; i < anchor.size(); ++i)
    d(static_cast<Eigen::Index>(i)) = pts[static_cast<std::size_t>(anchor[i])];
  return alpha * (v - r.triangularView<Eigen::Upper>() * d).squaredNorm();
}

CandidateSet dfs_search(const CVec& v, const CMat& r, double zeta_sq,
                        const Constellation& constellation, double rho) {
  if (!(zeta_sq > 0.0)) throw std::invalid_argument("zeta_sq must be > 0");
  const int n = static_cast<int>(r.rows());
  const int mc = constellation.size;
  const auto pts = scaled_points(constellation, rho);
  const double log_mc = std::log(static_cast<double>(mc));

  CandidateSet out;
  out.mode = SearchMode::Dfs;
  out.radius_sq = zeta_sq;

  LogSumAccumulator pruned;
  std::vector<std::int32_t> path(static_cast<std::size_t>(n), 0);
  std::vector<int> next_sym(static_cast<std::size_t>(n), 0);
  std::vector<double> base_cost(static_cast<std::size_t>(n), 0.0);
  std::vector<cx> interf(static_cast<std::size_t>(n));

  // Explicit stack over rows: row n-1 is depth 1 (the tree root fan), row 0
  // holds the leaves. Symbols are tried in constellation-index order.
  int row = n - 1;
  interf[static_cast<std::size_t>(row)] = v(row);
  base_cost[static_cast<std::size_t>(row)] = 0.0;
  next_sym[static_cast<std::size_t>(row)] = 0;

  while (row < n) {
    const auto urow = static_cast<std::size_t>(row);
    if (next_sym[urow] == mc) {  // row exhausted, backtrack
      ++row;
      continue;
    }
    const int m = next_sym[urow]++;
    const double cost =
        base_cost[urow] +
        std::norm(interf[urow] - r(row, row) * pts[static_cast<std::size_t>(m)]);
    ++out.visited_nodes;

    if (cost <= zeta_sq) {
      path[urow] = static_cast<std::int32_t>(m);
      if (row == 0) {
        out.candidates.push_back(Candidate{path, cost});
      } else {
        const int child = row - 1;
        const auto uchild = static_cast<std::size_t>(child);
        cx acc = v(child);
        for (int j = child + 1; j < n; ++j)
          acc -= r(child, j) * pts[static_cast<std::size_t>(path[static_cast<std::size_t>(j)])];
        interf[uchild] = acc;
        base_cost[uchild] = cost;
        next_sym[uchild] = 0;
        row = child;
      }
    } else {
      // Pruned branch: the M_c^row leaves below it enter the accumulator at
      // this branch's own cost.
      pruned.add(-cost + static_cast<double>(row) * log_mc);
    }
  }

  out.log_pruned_mass = pruned.value();
  std::sort(out.candidates.begin(), out.candidates.end(), candidate_less);
  return out;
}

CandidateSet bfs_search(const CVec& v, const CMat& r, std::uint64_t k,
                        const Constellation& constellation, double rho) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const int n = static_cast<int>(r.rows());
  const int mc = constellation.size;
  const auto pts = scaled_points(constellation, rho);
  const double log_mc = std::log(static_cast<double>(mc));

  CandidateSet out;
  out.mode = SearchMode::Bfs;
  out.radius_sq = std::numeric_limits<double>::infinity();

  LogSumAccumulator pruned;

  struct Partial {
    std::vector<std::int32_t> path;  // root-to-leaf: path[p] is row n-1-p
    double cost;
  };
  auto partial_less = [](const Partial& a, const Partial& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.path < b.path;
  };

  std::vector<Partial> layer{Partial{{}, 0.0}};
  for (int depth = 1; depth <= n; ++depth) {
    const int row = n - depth;
    std::vector<Partial> expanded;
    expanded.reserve(layer.size() * static_cast<std::size_t>(mc));
    for (const Partial& parent : layer) {
      cx acc = v(row);
      for (int p = 0; p < depth - 1; ++p)
        acc -= r(row, n - 1 - p) * pts[static_cast<std::size_t>(parent.path[static_cast<std::size_t>(p)])];
      for (int m = 0; m < mc; ++m) {
        const double cost =
            parent.cost + std::norm(acc - r(row, row) * pts[static_cast<std::size_t>(m)]);
        ++out.visited_nodes;
        Partial child;
        child.path.reserve(static_cast<std::size_t>(depth));
        child.path = parent.path;
        child.path.push_back(static_cast<std::int32_t>(m));
        child.cost = cost;
        expanded.push_back(std::move(child));
      }
    }
    std::sort(expanded.begin(), expanded.end(), partial_less);

    if (depth == n) {
      // Leaf depth: every expansion of a surviving path is returned.
      out.candidates.reserve(expanded.size());
      for (Partial& leaf : expanded) {
        Candidate c;
        c.distance = leaf.cost;
        c.indices.resize(static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p)
          c.indices[static_cast<std::size_t>(n - 1 - p)] = leaf.path[static_cast<std::size_t>(p)];
        out.candidates.push_back(std::move(c));
      }
    } else {
      const std::size_t keep =
          static_cast<std::size_t>(std::min<std::uint64_t>(k, expanded.size()));
      for (std::size_t i = keep; i < expanded.size(); ++i)
        pruned.add(-expanded[i].cost + static_cast<double>(row) * log_mc);
      expanded.resize(keep);
      layer = std::move(expanded);
    }
  }

  out.log_pruned_mass = pruned.value();
  std::sort(out.candidates.begin(), out.candidates.end(), candidate_less);
  return out;
}

std::uint64_t complexity_c(std::uint64_t k, int mc, int nt) {
  constexpr std::uint64_t cap = std::uint64_t(1) << 62;
  const std::uint64_t mcu = static_cast<std::uint64_t>(mc);
  const std::uint64_t fan = k > cap / mcu ? cap : mcu * k;
  std::uint64_t pow = 1;  // mc^(depth-1)
  bool saturated = false;
  std::uint64_t total = 0;
  for (int depth = 1; depth <= nt; ++depth) {
    if (!saturated && pow > cap / mcu) saturated = true;
    if (!saturated) pow *= mcu;  // now mc^depth
    const std::uint64_t nodes = saturated ? fan : std::min(pow, fan);
    if (total > cap - nodes) return cap;
    total += nodes;
  }
  return total;
}

namespace {

// Number of depths whose full fan fits under k: max{k0 : mc^(k0-1) < k}, 0
// when k == 1.
int k0_of(std::uint64_t k, int mc, int nt) {
  int k0 = 0;
  std::uint64_t pow = 1;
  for (int depth = 1; depth <= nt; ++depth) {
    if (pow < k) k0 = depth; else break;
    if (pow > (std::uint64_t(1) << 62) / static_cast<std::uint64_t>(mc)) break;
    pow *= static_cast<std::uint64_t>(mc);
  }
  return k0;
}

}  // namespace

std::uint64_t k_for_budget(std::uint64_t c0, int mc, int nt) {
  const std::uint64_t min_budget = complexity_c(1, mc, nt);
  if (c0 < min_budget)
    throw std::invalid_argument("budget below the k = 1 search cost");

  // Full budget recovers the full search.
  std::uint64_t k_full = 1;
  bool full_known = true;
  for (int i = 0; i < nt - 1; ++i) {
    if (k_full > (std::uint64_t(1) << 62) / static_cast<std::uint64_t>(mc)) {
      full_known = false;
      break;
    }
    k_full *= static_cast<std::uint64_t>(mc);
  }
  if (full_known && c0 >= complexity_c(k_full, mc, nt)) return k_full;

  // The closed form is circular in k0; try every k0 and keep the largest
  // self-consistent k.
  std::uint64_t best = 0;
  using i128 = __int128;
  i128 pow_k0 = 1;  // mc^k0
  for (int k0 = 0; k0 < nt; ++k0, pow_k0 *= mc) {
    const i128 num = i128(c0) * (mc - 1) - i128(mc) * (pow_k0 - 1);
    const i128 den = i128(mc) * (mc - 1) * (nt - k0);
    if (num < den) continue;  // k would be < 1
    const std::uint64_t k = static_cast<std::uint64_t>(num / den);
    if (k0_of(k, mc, nt) != k0) continue;
    if (complexity_c(k, mc, nt) > c0) continue;
    best = std::max(best, k);
  }
  return best > 0 ? best : 1;
}

}  // namespace mixent
