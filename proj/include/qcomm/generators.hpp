#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcomm/errors.hpp"
#include "qcomm/hermitian.hpp"
#include "qcomm/partition.hpp"
#include "qcomm/rng.hpp"
#include "qcomm/walk.hpp"

namespace qcomm {

// Six-node demonstration network: two triangles {0,1,2} and {3,4,5} with unit
// couplings, plus variant-dependent bridges between {1,2} and {3,4}.
//   a, b, c: no bridges (the variants differ only in how they are analysed)
//   d, g:    four bridges with coupling +1
//   e, h:    four bridges with seeded random phases exp(i phi)
//   f, i:    bridges into node 3 carry +1, bridges into node 4 carry -1, so
//            walks from the left triangle interfere destructively at node 5
enum class ToyVariant { a, b, c, d, e, f, g, h, i };

struct ToyConfig {
  ToyVariant variant = ToyVariant::a;
  std::uint64_t rng_seed = 0;  // used by the random-phase variants e and h
};

inline ToyVariant toy_variant_from_name(const std::string& name) {
  if (name.size() == 1 && name[0] >= 'a' && name[0] <= 'i') {
    return static_cast<ToyVariant>(name[0] - 'a');
  }
  throw UserError("unknown toy variant '" + name + "', expected a..i");
}

inline HermitianMatrix toy_hamiltonian(const ToyConfig& config) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(6, 6);
  const auto couple = [&h](int i, int j, std::complex<double> w) {
    h(i, j) = w;
    h(j, i) = std::conj(w);
  };
  for (int base : {0, 3}) {
    couple(base, base + 1, 1.0);
    couple(base, base + 2, 1.0);
    couple(base + 1, base + 2, 1.0);
  }
  const std::pair<int, int> bridges[] = {{1, 3}, {1, 4}, {2, 3}, {2, 4}};
  switch (config.variant) {
    case ToyVariant::a:
    case ToyVariant::b:
    case ToyVariant::c:
      break;
    case ToyVariant::d:
    case ToyVariant::g:
      for (auto [i, j] : bridges) couple(i, j, 1.0);
      break;
    case ToyVariant::e:
    case ToyVariant::h: {
      Rng rng(config.rng_seed);
      for (auto [i, j] : bridges) couple(i, j, std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI)));
      break;
    }
    case ToyVariant::f:
    case ToyVariant::i:
      for (auto [i, j] : bridges) couple(i, j, j == 3 ? 1.0 : -1.0);
      break;
  }
  return validate_hermitian(h, 1e-12);
}

// Equal-size planted-community random graph. Each community independently
// receives round(size * mean_degree / 2) distinct internal edges; afterwards
// each edge is, with probability rewire_fraction, re-targeted by moving one
// endpoint to a uniformly random node of another community.
struct PlantedSpec {
  int n = 0;
  int n_communities = 1;
  double mean_degree = 0.0;
  double rewire_fraction = 0.0;
  std::uint64_t rng_seed = 0;
};

struct PlantedNetwork {
  HermitianMatrix hamiltonian;
  Partition planted;
};

inline PlantedNetwork planted_hamiltonian(const PlantedSpec& spec) {
  if (spec.n < 1) throw UserError("planted network needs n >= 1");
  if (spec.n_communities < 1 || spec.n % spec.n_communities != 0) {
    throw UserError("n must be divisible by n_communities");
  }
  if (spec.rewire_fraction < 0.0 || spec.rewire_fraction > 1.0) {
    throw UserError("rewire_fraction must lie in [0, 1]");
  }
  const int size = spec.n / spec.n_communities;
  if (spec.mean_degree < 0.0 || spec.mean_degree >= static_cast<double>(size)) {
    throw InfeasibleDegreeError("mean degree " + std::to_string(spec.mean_degree) +
                                " infeasible for community size " + std::to_string(size));
  }
  const long edges_per_comm = std::lround(size * spec.mean_degree / 2.0);
  const long max_edges = static_cast<long>(size) * (size - 1) / 2;
  if (edges_per_comm > max_edges) {
    throw InfeasibleDegreeError("requested " + std::to_string(edges_per_comm) +
                                " edges per community, only " + std::to_string(max_edges) +
                                " pairs exist");
  }

  Rng rng(spec.rng_seed);
  std::vector<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> present;
  for (int comm = 0; comm < spec.n_communities; ++comm) {
    const int lo = comm * size;
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(max_edges));
    for (int i = lo; i < lo + size; ++i)
      for (int j = i + 1; j < lo + size; ++j) pairs.emplace_back(i, j);
    // Partial Fisher-Yates: the first edges_per_comm slots become the sample.
    for (long e = 0; e < edges_per_comm; ++e) {
      const auto pick = e + static_cast<long>(rng.below(static_cast<std::uint64_t>(
                                static_cast<long>(pairs.size()) - e)));
      std::swap(pairs[static_cast<std::size_t>(e)], pairs[static_cast<std::size_t>(pick)]);
      edges.push_back(pairs[static_cast<std::size_t>(e)]);
      present.insert(pairs[static_cast<std::size_t>(e)]);
    }
  }

  const auto community_of = [size](int node) { return node / size; };
  for (auto& edge : edges) {
    if (rng.uniform01() >= spec.rewire_fraction) continue;
    const int keep = rng.below(2) == 0 ? edge.first : edge.second;
    for (int attempt = 0; attempt < 200; ++attempt) {
      const int w = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.n)));
      if (community_of(w) == community_of(keep)) continue;
      const std::pair<int, int> candidate{std::min(keep, w), std::max(keep, w)};
      if (present.count(candidate)) continue;
      present.erase(edge);
      present.insert(candidate);
      edge = candidate;
      break;
    }
  }

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(spec.n, spec.n);
  for (const auto& [i, j] : present) {
    h(i, j) = 1.0;
    h(j, i) = 1.0;
  }
  std::vector<int> labels(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) labels[static_cast<std::size_t>(i)] = community_of(i);
  return {validate_hermitian(h, 1e-12), Partition(std::move(labels))};
}

// Multiplies each non-zero coupling H_ij (i < j) by exp(i theta) with
// theta ~ Normal(0, sigma^2), preserving all magnitudes. sigma = 0 returns
// the input unchanged, bit for bit.
inline HermitianMatrix randomize_phases(const HermitianMatrix& h, double sigma,
                                        std::uint64_t seed) {
  if (sigma < 0.0) throw NegativeSigmaError("sigma must be non-negative");
  if (sigma == 0.0) return h;
  Rng rng(seed);
  Eigen::MatrixXcd out = h.entries();
  const Eigen::Index n = out.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (out(i, j) == std::complex<double>(0.0, 0.0)) continue;
      const double theta = rng.normal(0.0, sigma);
      out(i, j) *= std::polar(1.0, theta);
      out(j, i) = std::conj(out(i, j));
    }
  }
  return validate_hermitian(out, 1e-12);
}

// Adds a seeded random Hermitian matrix whose entries all have magnitude at
// most epsilon; a generic way to break degeneracies. epsilon = 0 returns the
// input unchanged, bit for bit.
inline HermitianMatrix perturb(const HermitianMatrix& h, double epsilon, std::uint64_t seed) {
  if (epsilon < 0.0) throw UserError("perturbation epsilon must be non-negative");
  if (epsilon == 0.0) return h;
  Rng rng(seed);
  Eigen::MatrixXcd out = h.entries();
  const Eigen::Index n = out.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, i) += rng.uniform(-epsilon, epsilon);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = epsilon * rng.uniform01();
      const double angle = rng.uniform(0.0, 2.0 * M_PI);
      const std::complex<double> v = std::polar(r, angle);
      out(i, j) += v;
      out(j, i) += std::conj(v);
    }
  }
  return validate_hermitian(out, 1e-12);
}

// Independent uniform phases on [0, 2 pi), e.g. for phase-averaging checks.
inline PhaseVector random_phases(Eigen::Index n, Rng& rng) {
  PhaseVector thetas(static_cast<std::size_t>(n));
  for (auto& t : thetas) t = rng.uniform(0.0, 2.0 * M_PI);
  return thetas;
}

// Whether the coupling graph (non-zero off-diagonal entries) is connected.
inline bool is_connected(const HermitianMatrix& h) {
  const Eigen::Index n = h.size();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const Eigen::Index i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && !seen[static_cast<std::size_t>(j)] &&
          h.entries()(i, j) != std::complex<double>(0.0, 0.0)) {
        seen[static_cast<std::size_t>(j)] = 1;
        stack.push_back(j);
      }
    }
  }
  for (char s : seen)
    if (!s) return false;
  return true;
}

}  // namespace qcomm
