#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qcomm/closeness.hpp"
#include "qcomm/errors.hpp"

namespace qcomm {

// Node-to-community assignment in canonical form: labels are renumbered by
// first occurrence, so two partitions are equal iff they group nodes the same
// way regardless of label values.
class Partition {
 public:
  explicit Partition(std::vector<int> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw UserError("partition needs at least one node");
    std::map<int, int> rename;
    for (int& l : labels_) {
      auto it = rename.try_emplace(l, static_cast<int>(rename.size())).first;
      l = it->second;
    }
    count_ = static_cast<int>(rename.size());
  }

  static Partition singletons(int n) {
    std::vector<int> l(static_cast<std::size_t>(n));
    std::iota(l.begin(), l.end(), 0);
    return Partition(std::move(l));
  }

  static Partition single_community(int n) {
    return Partition(std::vector<int>(static_cast<std::size_t>(n), 0));
  }

  int n() const { return static_cast<int>(labels_.size()); }
  int community_count() const { return count_; }
  const std::vector<int>& labels() const { return labels_; }

  std::vector<std::vector<int>> communities() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(count_));
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      out[static_cast<std::size_t>(labels_[i])].push_back(static_cast<int>(i));
    }
    return out;
  }

  bool operator==(const Partition& other) const { return labels_ == other.labels_; }
  bool operator!=(const Partition& other) const { return !(*this == other); }

 private:
  std::vector<int> labels_;
  int count_ = 0;
};

// One agglomeration step may fuse several communities at once when pair
// closenesses tie at the maximum; each record lists the node sets that fused
// into one community at the recorded closeness.
struct MergeRecord {
  double closeness = 0.0;
  std::vector<std::vector<int>> merged;
};

struct DendrogramLevel {
  double merge_closeness = 0.0;  // +infinity for the leaf level
  Partition partition;
};

// Full agglomeration history, finest (singletons) to coarsest (one community).
struct Dendrogram {
  std::vector<DendrogramLevel> levels;
  std::vector<MergeRecord> merges;
};

// Bottom-up average-linkage clustering of the node closeness matrix.
// Each step recomputes community closenesses from the node matrix, finds the
// maximum, and fuses every group of communities connected through pairs lying
// within tie_tol of it. The tolerance is fixed once from the input scale, so
// node relabelings cannot reorder merges through last-ulp differences.
inline Dendrogram agglomerate(const NodeCloseness& c) {
  const int n = static_cast<int>(c.n());
  Dendrogram out;
  out.levels.push_back({std::numeric_limits<double>::infinity(), Partition::singletons(n)});
  if (n == 1) return out;

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) scale = std::max(scale, std::abs(c.entries(i, j)));
  const double tie_tol = 1e-9 * scale;

  std::vector<std::vector<int>> comms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) comms[static_cast<std::size_t>(i)] = {i};

  while (comms.size() > 1) {
    const std::size_t k = comms.size();
    Eigen::MatrixXd pair_c(k, k);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        double sum = 0.0;
        for (int a : comms[i])
          for (int b : comms[j]) sum += c.entries(a, b);
        const double v = sum / (static_cast<double>(comms[i].size()) *
                                static_cast<double>(comms[j].size()));
        pair_c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        best = std::max(best, v);
      }
    }

    // Union-find over communities linked by a tied pair.
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    const auto find = [&parent](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (pair_c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >=
            best - tie_tol) {
          parent[find(i)] = find(j);
        }
      }
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < k; ++i) groups[find(i)].push_back(i);

    std::vector<std::vector<int>> next;
    std::vector<MergeRecord> step_records;
    for (auto& [root, members] : groups) {
      if (members.size() > 1) {
        MergeRecord rec;
        rec.closeness = best;
        for (std::size_t i : members) rec.merged.push_back(comms[i]);
        std::sort(rec.merged.begin(), rec.merged.end());
        step_records.push_back(std::move(rec));
      }
      std::vector<int> fused;
      for (std::size_t i : members) fused.insert(fused.end(), comms[i].begin(), comms[i].end());
      std::sort(fused.begin(), fused.end());
      next.push_back(std::move(fused));
    }
    std::sort(step_records.begin(), step_records.end(),
              [](const MergeRecord& a, const MergeRecord& b) { return a.merged < b.merged; });
    for (auto& rec : step_records) out.merges.push_back(std::move(rec));
    std::sort(next.begin(), next.end());
    comms = std::move(next);

    std::vector<int> labels(static_cast<std::size_t>(n));
    for (std::size_t ci = 0; ci < comms.size(); ++ci)
      for (int a : comms[ci]) labels[static_cast<std::size_t>(a)] = static_cast<int>(ci);
    out.levels.push_back({best, Partition(std::move(labels))});
  }
  return out;
}

// Newman modularity of a non-negative weight matrix under partition x:
//   Q = (1/2m) tr(C^T B C),  B_ij = A_ij - k_i k_j / 2m,
// with the diagonal of A forced to zero and C the community indicator matrix.
inline double modularity(const NodeCloseness& c, const Partition& x) {
  const Eigen::Index n = c.n();
  if (x.n() != static_cast<int>(n)) {
    throw MismatchedNodeSetsError("partition covers " + std::to_string(x.n()) +
                                  " nodes, closeness has " + std::to_string(n));
  }
  Eigen::MatrixXd a = c.entries;
  a.diagonal().setZero();
  if (a.minCoeff() < 0.0) {
    throw NegativeEntriesError("modularity requires non-negative closeness entries");
  }
  const Eigen::VectorXd k = a.rowwise().sum();
  const double two_m = k.sum();
  if (two_m == 0.0) throw DegenerateTotalWeightError("total closeness weight is zero");

  const int nc = x.community_count();
  Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(n, nc);
  for (Eigen::Index i = 0; i < n; ++i) ind(i, x.labels()[static_cast<std::size_t>(i)]) = 1.0;
  const Eigen::MatrixXd b = a - (k * k.transpose()) / two_m;
  return (ind.transpose() * b * ind).trace() / two_m;
}

// Signed extension: positive and negative parts get separate null models and
// the negative part enters with opposite sign,
//   Q = (1/(2m+ + 2m-)) sum_{ij, same community} [B+_ij - B-_ij].
// A part's null model is dropped when its total weight is zero. Coincides
// with modularity whenever all entries are non-negative.
inline double signed_modularity(const NodeCloseness& c, const Partition& x) {
  const Eigen::Index n = c.n();
  if (x.n() != static_cast<int>(n)) {
    throw MismatchedNodeSetsError("partition covers " + std::to_string(x.n()) +
                                  " nodes, closeness has " + std::to_string(n));
  }
  Eigen::MatrixXd a = c.entries;
  a.diagonal().setZero();
  const Eigen::MatrixXd pos = a.cwiseMax(0.0);
  const Eigen::MatrixXd neg = (-a).cwiseMax(0.0);
  const Eigen::VectorXd kp = pos.rowwise().sum();
  const Eigen::VectorXd kn = neg.rowwise().sum();
  const double two_mp = kp.sum();
  const double two_mn = kn.sum();
  if (two_mp == 0.0 && two_mn == 0.0) {
    throw DegenerateTotalWeightError("closeness has no off-diagonal weight");
  }

  const int nc = x.community_count();
  Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(n, nc);
  for (Eigen::Index i = 0; i < n; ++i) ind(i, x.labels()[static_cast<std::size_t>(i)]) = 1.0;

  double q = 0.0;
  if (two_mp > 0.0) {
    const Eigen::MatrixXd bp = pos - (kp * kp.transpose()) / two_mp;
    q += (ind.transpose() * bp * ind).trace();
  }
  if (two_mn > 0.0) {
    const Eigen::MatrixXd bn = neg - (kn * kn.transpose()) / two_mn;
    q -= (ind.transpose() * bn * ind).trace();
  }
  return q / (two_mp + two_mn);
}

// Dendrogram level with the highest signed modularity; ties go to the level
// with fewer communities. A closeness with no off-diagonal weight carries no
// community signal at all, so the coarsest level is returned with Q = 0.
struct BestLevel {
  Partition partition;
  double q = 0.0;
};

inline BestLevel best_level(const Dendrogram& dendrogram, const NodeCloseness& c) {
  if (dendrogram.levels.empty()) throw UserError("dendrogram has no levels");
  Eigen::MatrixXd a = c.entries;
  a.diagonal().setZero();
  if (a.cwiseAbs().sum() == 0.0) {
    return {dendrogram.levels.back().partition, 0.0};
  }
  const DendrogramLevel* best = nullptr;
  double best_q = 0.0;
  for (const auto& level : dendrogram.levels) {
    const double q = signed_modularity(c, level.partition);
    if (best == nullptr || q >= best_q) {  // >= prefers coarser (later) levels on ties
      best = &level;
      best_q = q;
    }
  }
  return {best->partition, best_q};
}

// Normalized mutual information of two partitions of the same node set:
//   NMI = 2 I(X;Y) / (H(X) + H(Y)),
// natural logarithms, 0 log 0 = 0. Both partitions trivial (single community)
// means they agree perfectly: NMI = 1. Entropy terms are accumulated over
// sorted count multisets, which makes nmi(x, y) == nmi(y, x) bit for bit.
inline double nmi(const Partition& x, const Partition& y) {
  if (x.n() != y.n()) {
    throw MismatchedNodeSetsError("partitions cover " + std::to_string(x.n()) + " and " +
                                  std::to_string(y.n()) + " nodes");
  }
  const double n = static_cast<double>(x.n());
  const auto entropy = [n](std::vector<int> counts) {
    std::sort(counts.begin(), counts.end());
    double h = 0.0;
    for (int cnt : counts) {
      if (cnt > 0) {
        const double p = static_cast<double>(cnt) / n;
        h -= p * std::log(p);
      }
    }
    return h;
  };

  std::vector<int> cx(static_cast<std::size_t>(x.community_count()), 0);
  std::vector<int> cy(static_cast<std::size_t>(y.community_count()), 0);
  std::map<std::pair<int, int>, int> joint;
  for (int i = 0; i < x.n(); ++i) {
    const int lx = x.labels()[static_cast<std::size_t>(i)];
    const int ly = y.labels()[static_cast<std::size_t>(i)];
    ++cx[static_cast<std::size_t>(lx)];
    ++cy[static_cast<std::size_t>(ly)];
    ++joint[{lx, ly}];
  }
  std::vector<int> cj;
  cj.reserve(joint.size());
  for (const auto& [key, cnt] : joint) cj.push_back(cnt);

  const double hx = entropy(cx);
  const double hy = entropy(cy);
  if (hx == 0.0 && hy == 0.0) return 1.0;
  const double mi = hx + hy - entropy(std::move(cj));
  const double value = 2.0 * mi / (hx + hy);
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace qcomm
