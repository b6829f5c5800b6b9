#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mixent/channel.hpp"
#include "mixent/constellation.hpp"
#include "mixent/linalg.hpp"

namespace mixent {

enum class SearchMode { Dfs, Bfs };

struct Candidate {
  std::vector<std::int32_t> indices;  // indices[i] = constellation index of d_{i+1}
  double distance;                    // ||v - R d||^2
};

/// Result of a tree search over the triangular system v = R d + w.
struct CandidateSet {
  SearchMode mode = SearchMode::Dfs;
  double radius_sq = std::numeric_limits<double>::infinity();  // zeta^2
  std::vector<Candidate> candidates;  // distance ascending, lexicographic ties
  // ln of the pruned-mass accumulator E = sum over pruned branches of
  // exp(-cost at prune) * M_c^(leaves below); -inf when nothing was pruned.
  double log_pruned_mass = -std::numeric_limits<double>::infinity();
  std::uint64_t visited_nodes = 0;  // cost evaluations performed

  double pruned_mass() const { return std::exp(log_pruned_mass); }
};

/// Complexity/accuracy control: alpha scales the DFS sphere radius, k is the
/// kept-path count per BFS depth.
struct SearchSpec {
  SearchMode mode = SearchMode::Dfs;
  double alpha = 1.0;
  std::uint64_t k = 1;

  static SearchSpec dfs(double alpha);
  static SearchSpec bfs(std::uint64_t k);
};

/// One step of the sphere-decoding cost recursion at tree depth `depth`
/// (1-based, counted from the bottom row of R). `partial` holds the symbols
/// chosen so far, partial(0) being the newest (coordinate N_t - depth + 1).
double cost_step(double c_prev, const CVec& v, const CMat& r, int depth,
                 const CVec& partial);

/// Componentwise nearest-constellation quantization of the zero-forcing
/// solution R^{-1} v; distance ties resolve to the lowest point index.
std::vector<std::int32_t> babai_anchor_tri(const CMat& r, const CVec& v,
                                           const Constellation& constellation,
                                           double rho);

/// Babai anchor of a channel output: quantizes the ZF point of z through the
/// channel's cached factors (v = Q^H z). Indices are in the channel's
/// permuted coordinate order.
std::vector<std::int32_t> babai_anchor(const ChannelInstance& channel,
                                       const CVec& z,
                                       const Constellation& constellation,
                                       double rho);

/// alpha * ||v - R d0||^2 for an anchor given as constellation indices.
double sphere_radius_sq(double alpha, const CVec& v, const CMat& r,
                        const std::vector<std::int32_t>& anchor,
                        const Constellation& constellation, double rho);

/// Fixed-radius depth-first search: returns exactly {d : ||v - R d||^2 <=
/// zeta_sq}, accumulating the pruned mass of every cut branch. The radius is
/// never shrunk. An empty result is legal for an externally supplied radius.
CandidateSet dfs_search(const CVec& v, const CMat& r, double zeta_sq,
                        const Constellation& constellation, double rho);

/// K-best breadth-first search: keeps the min(k, M_c^depth) cheapest partial
/// paths per depth (cost ties broken lexicographically), returns every leaf
/// expansion of the surviving paths, and accumulates the pruned mass of each
/// discarded partial path.
CandidateSet bfs_search(const CVec& v, const CMat& r, std::uint64_t k,
                        const Constellation& constellation, double rho);

/// Exact number of nodes bfs_search visits: sum over depths of
/// min(M_c^depth, M_c*k). Saturates at 2^62 for astronomically large trees.
std::uint64_t complexity_c(std::uint64_t k, int mc, int nt);

/// Largest k whose visited-node count stays within the budget c0; inverse of
/// complexity_c. Throws std::invalid_argument when c0 is below the k = 1
/// cost. A budget covering the full tree returns k = M_c^(N_t - 1).
std::uint64_t k_for_budget(std::uint64_t c0, int mc, int nt);

}  // namespace mixent
