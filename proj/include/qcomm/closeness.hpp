#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "qcomm/errors.hpp"
#include "qcomm/hermitian.hpp"
#include "qcomm/walk.hpp"

namespace qcomm {

enum class Measure { kTransport, kFidelity, kFidelityPhaseAvg, kPurity, kPurityPhaseAvg };

inline std::string measure_name(Measure m) {
  switch (m) {
    case Measure::kTransport: return "transport";
    case Measure::kFidelity: return "fidelity";
    case Measure::kFidelityPhaseAvg: return "fidelity_phase_avg";
    case Measure::kPurity: return "purity";
    default: return "purity_phase_avg";
  }
}

// Node-pair closeness under one measure and regime. Entries are exactly
// symmetric by construction; all measures share the scale convention
//   c(i, j) = (2/n^2) * A_ij
// with A the measure's pairwise amplitude, so rescaling-invariant consumers
// (clustering, modularity) see every measure on the same footing. The
// diagonal is not used downstream.
struct NodeCloseness {
  Eigen::MatrixXd entries;
  Measure measure = Measure::kTransport;
  RegimeTag regime = RegimeTag::kInfinite;
  double t = 0.0;  // averaging window for the finite regime

  Eigen::Index n() const { return entries.rows(); }
};

namespace detail {

// Copies the upper triangle onto the lower one; exact symmetry, not within eps.
inline void mirror_upper(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) m(j, i) = m(i, j);
}

inline Eigen::VectorXcd uniform_state(Eigen::Index n, const PhaseVector& thetas) {
  if (static_cast<Eigen::Index>(thetas.size()) != n) {
    throw UserError("phase vector has " + std::to_string(thetas.size()) +
                    " entries, expected " + std::to_string(n));
  }
  Eigen::VectorXcd psi(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    psi(a) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), thetas[a]);
  }
  return psi;
}

// Projections of the start state onto each eigenspace: w_k = Lambda_k psi.
inline std::vector<Eigen::VectorXcd> eigenspace_components(const SpectralDecomposition& d,
                                                           const Eigen::VectorXcd& psi) {
  std::vector<Eigen::VectorXcd> w;
  w.reserve(d.size());
  for (const auto& p : d.projectors) w.push_back(p * psi);
  return w;
}

inline NodeCloseness scaled(Eigen::MatrixXd a, Measure m, RegimeTag r, double t) {
  const double n = static_cast<double>(a.rows());
  a *= 2.0 / (n * n);
  mirror_upper(a);
  return {std::move(a), m, r, t};
}

}  // namespace detail

// Short regime: the quadratic coefficient of the averaged transfer matrix is
// |H_ij|^2 off the diagonal (up to a positive factor, irrelevant downstream).
// Diagonal set to zero.
inline NodeCloseness closeness_transport_short(const HermitianMatrix& h) {
  Eigen::MatrixXd a = h.entries().cwiseAbs2();
  a.diagonal().setZero();
  return detail::scaled(std::move(a), Measure::kTransport, RegimeTag::kShort, 0.0);
}

inline NodeCloseness closeness_transport(const SpectralDecomposition& d, double t) {
  const Eigen::MatrixXd r = avg_transfer_matrix(d, t).entries;
  Eigen::MatrixXd a = (r + r.transpose()) / 2.0;
  return detail::scaled(std::move(a), Measure::kTransport, RegimeTag::kFinite, t);
}

inline NodeCloseness closeness_transport_infinite(const SpectralDecomposition& d) {
  Eigen::MatrixXd a = avg_transfer_matrix_infinite(d).entries;
  return detail::scaled(std::move(a), Measure::kTransport, RegimeTag::kInfinite, 0.0);
}

namespace detail {

// Fidelity amplitude A_ij = n^2 Re(rhobar_ij rho0_ji).
inline Eigen::MatrixXd fidelity_amplitude(const Eigen::MatrixXcd& rhobar,
                                          const Eigen::MatrixXcd& rho0) {
  const double n = static_cast<double>(rhobar.rows());
  return n * n * (rhobar.array() * rho0.transpose().array()).real();
}

}  // namespace detail

inline NodeCloseness closeness_fidelity(const SpectralDecomposition& d, const PhaseVector& thetas,
                                        double t) {
  if (t <= 0.0) throw NonPositiveTimeError("averaging window must have t > 0");
  // The start state is pure, so rhobar = W Phi W^dagger with W holding the
  // eigenspace components w_k as columns; two small products instead of the
  // general projector sandwich.
  const Eigen::VectorXcd psi = detail::uniform_state(d.n, thetas);
  const auto m = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXcd w(d.n, m);
  for (Eigen::Index k = 0; k < m; ++k) w.col(k) = d.projectors[static_cast<std::size_t>(k)] * psi;
  Eigen::MatrixXcd kernel(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index k = 0; k < m; ++k)
      kernel(j, k) = phi_kernel(d.eigenvalues[static_cast<std::size_t>(j)] -
                                    d.eigenvalues[static_cast<std::size_t>(k)],
                                t);
  const Eigen::MatrixXcd rhobar = w * kernel * w.adjoint();
  return detail::scaled(detail::fidelity_amplitude(rhobar, psi * psi.adjoint()),
                        Measure::kFidelity, RegimeTag::kFinite, t);
}

inline NodeCloseness closeness_fidelity_infinite(const SpectralDecomposition& d,
                                                 const PhaseVector& thetas) {
  const DensityMatrix rho0 = DensityMatrix::uniform_superposition(d.n, thetas);
  const DensityMatrix rhobar = avg_density_infinite(d, rho0);
  return detail::scaled(detail::fidelity_amplitude(rhobar.entries, rho0.entries),
                        Measure::kFidelity, RegimeTag::kInfinite, 0.0);
}

// Phase-averaged fidelity amplitude:
//   A_ab = <Re(U_aa conj(U_bb))> + delta_ab (1 - <|U_aa|^2>)
// with <.> the time average; via projector diagonals V(a,k) = (Lambda_k)_aa,
//   <Re(U_aa conj(U_bb))> = Re sum_jk phi(E_j - E_k, t) V(a,j) V(b,k).
// The diagonal collapses to exactly 1 in both regimes.
namespace detail {

inline Eigen::MatrixXd projector_diagonals(const SpectralDecomposition& d) {
  Eigen::MatrixXd v(d.n, static_cast<Eigen::Index>(d.size()));
  for (std::size_t k = 0; k < d.size(); ++k) {
    v.col(static_cast<Eigen::Index>(k)) = d.projectors[k].diagonal().real();
  }
  return v;
}

}  // namespace detail

inline NodeCloseness closeness_fidelity_phase_avg(const SpectralDecomposition& d, double t) {
  if (t <= 0.0) throw NonPositiveTimeError("averaging window must have t > 0");
  const auto m = static_cast<Eigen::Index>(d.size());
  const Eigen::MatrixXd v = detail::projector_diagonals(d);
  Eigen::MatrixXcd kernel(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index k = 0; k < m; ++k)
      kernel(j, k) = phi_kernel(d.eigenvalues[j] - d.eigenvalues[k], t);
  Eigen::MatrixXd a = (v * kernel * v.transpose()).real();
  a.diagonal().setConstant(1.0);
  return detail::scaled(std::move(a), Measure::kFidelityPhaseAvg, RegimeTag::kFinite, t);
}

inline NodeCloseness closeness_fidelity_phase_avg_infinite(const SpectralDecomposition& d) {
  const Eigen::MatrixXd v = detail::projector_diagonals(d);
  Eigen::MatrixXd a = v * v.transpose();
  a.diagonal().setConstant(1.0);
  return detail::scaled(std::move(a), Measure::kFidelityPhaseAvg, RegimeTag::kInfinite, 0.0);
}

// Purity amplitude A_ij = n^2 <|rho_ij(t)|^2>. With the pure start state,
// rho_ij(t) = sum_jk exp(-i (E_j - E_k) t) w_j(i) conj(w_k(j)); terms are
// bucketed by their exact frequency so the kernel sees each beat once:
//   <|rho|^2> = sum_{nu, nu'} phi(nu - nu', t) B^nu .* conj(B^nu').
inline NodeCloseness closeness_purity(const SpectralDecomposition& d, const PhaseVector& thetas,
                                      double t) {
  if (t <= 0.0) throw NonPositiveTimeError("averaging window must have t > 0");
  const auto w = detail::eigenspace_components(d, detail::uniform_state(d.n, thetas));
  std::map<double, Eigen::Index> slot;
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (std::size_t k = 0; k < d.size(); ++k) {
      slot.try_emplace(d.eigenvalues[j] - d.eigenvalues[k],
                       static_cast<Eigen::Index>(slot.size()));
    }
  }
  // Buckets live as flattened rows of v, so the double kernel sum becomes one
  // matrix product: acc_e = sum_pq phi(nu_p - nu_q) v(p, e) conj(v(q, e)).
  const auto nb = static_cast<Eigen::Index>(slot.size());
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(nb, d.n * d.n);
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (std::size_t k = 0; k < d.size(); ++k) {
      const Eigen::MatrixXcd outer = w[j] * w[k].adjoint();
      v.row(slot.at(d.eigenvalues[j] - d.eigenvalues[k])) +=
          Eigen::Map<const Eigen::RowVectorXcd>(outer.data(), d.n * d.n);
    }
  }
  Eigen::MatrixXcd kernel(nb, nb);
  for (const auto& [nu, p] : slot)
    for (const auto& [nu2, q] : slot) kernel(p, q) = phi_kernel(nu - nu2, t);
  const Eigen::MatrixXcd mixed = kernel * v.conjugate();
  const Eigen::VectorXcd flat = (v.array() * mixed.array()).colwise().sum();
  Eigen::MatrixXd acc =
      Eigen::Map<const Eigen::MatrixXcd>(flat.data(), d.n, d.n).real();
  const double n = static_cast<double>(d.n);
  return detail::scaled(n * n * acc, Measure::kPurity, RegimeTag::kFinite, t);
}

// Long-time limit: A_ij = n^2 (|rhobar_ij|^2 + sum_{k != m} |(Lambda_k rho0 Lambda_m)_ij|^2).
// With the pure start the cross terms separate: |(Lambda_k rho0 Lambda_m)_ij|^2
// = |w_k(i)|^2 |w_m(j)|^2.
inline NodeCloseness closeness_purity_infinite(const SpectralDecomposition& d,
                                               const PhaseVector& thetas) {
  const auto w = detail::eigenspace_components(d, detail::uniform_state(d.n, thetas));
  Eigen::MatrixXcd rhobar = Eigen::MatrixXcd::Zero(d.n, d.n);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(d.n);
  Eigen::MatrixXd same_k = Eigen::MatrixXd::Zero(d.n, d.n);
  for (const auto& wk : w) {
    rhobar += wk * wk.adjoint();
    const Eigen::VectorXd r = wk.cwiseAbs2();
    q += r;
    same_k += r * r.transpose();
  }
  Eigen::MatrixXd a = rhobar.cwiseAbs2() + (q * q.transpose() - same_k);
  const double n = static_cast<double>(d.n);
  return detail::scaled(n * n * a, Measure::kPurity, RegimeTag::kInfinite, 0.0);
}

// Phase-averaged purity amplitude:
//   A_ab = 1 + delta_ab - sum_x <|U_ax|^2 |U_bx|^2>.
// |U_ax(t)|^2 = sum_jk exp(-i (E_j - E_k) t) (Lambda_j)_ax conj((Lambda_k)_ax);
// bucketing by exact frequency nu gives matrices D^nu with
//   sum_x <|U_ax|^2 |U_bx|^2> = sum_{nu, nu'} phi(nu + nu', t) (D^nu D^nu'^T)_ab.
inline NodeCloseness closeness_purity_phase_avg(const SpectralDecomposition& d, double t) {
  if (t <= 0.0) throw NonPositiveTimeError("averaging window must have t > 0");
  std::map<double, Eigen::MatrixXcd> buckets;
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (std::size_t k = 0; k < d.size(); ++k) {
      const double nu = d.eigenvalues[j] - d.eigenvalues[k];
      auto it = buckets.try_emplace(nu, Eigen::MatrixXcd::Zero(d.n, d.n)).first;
      it->second.array() += d.projectors[j].array() * d.projectors[k].conjugate().array();
    }
  }
  std::vector<const Eigen::MatrixXcd*> mats;
  std::vector<double> nus;
  for (const auto& [nu, b] : buckets) {
    nus.push_back(nu);
    mats.push_back(&b);
  }
  Eigen::MatrixXcd overlap = Eigen::MatrixXcd::Zero(d.n, d.n);
  for (std::size_t p = 0; p < mats.size(); ++p) {
    Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(d.n, d.n);
    for (std::size_t s = 0; s < mats.size(); ++s) {
      mixed += phi_kernel(nus[p] + nus[s], t) * (*mats[s]);
    }
    overlap += (*mats[p]) * mixed.transpose();
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(d.n, d.n) - overlap.real();
  a.diagonal().array() += 1.0;
  return detail::scaled(std::move(a), Measure::kPurityPhaseAvg, RegimeTag::kFinite, t);
}

// Long-time limit, per eigenspace pairs:
//   A_ab = 1 + delta_ab - sum_x ( Rinf_ax Rinf_bx + |S(x)_ab|^2 - sum_k r^k_ax r^k_bx )
// where Rinf = sum_k |Lambda_k|^2 elementwise, S(x) = sum_k col_x(Lambda_k) col_x(Lambda_k)^dagger
// and r^k = |Lambda_k|^2 elementwise.
inline NodeCloseness closeness_purity_phase_avg_infinite(const SpectralDecomposition& d) {
  const Eigen::Index n = d.n;
  Eigen::MatrixXd rinf = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd same_k = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::MatrixXd> rk;
  rk.reserve(d.size());
  for (const auto& p : d.projectors) {
    rk.push_back(p.cwiseAbs2());
    rinf += rk.back();
  }
  for (const auto& r : rk) same_k += r * r.transpose();
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& p : d.projectors) s += p.col(x) * p.col(x).adjoint();
    cross += s.cwiseAbs2();
  }
  Eigen::MatrixXd a =
      Eigen::MatrixXd::Ones(n, n) - (rinf * rinf.transpose() + cross - same_k);
  a.diagonal().array() += 1.0;
  return detail::scaled(std::move(a), Measure::kPurityPhaseAvg, RegimeTag::kInfinite, 0.0);
}

// Mean pairwise closeness between two disjoint node sets:
//   c(A, B) = (1/|A||B|) sum_{i in A, j in B} entries[i][j].
// The mean (rather than min or max linkage) is what makes merged communities
// interpolate between their parts.
inline double community_closeness(const NodeCloseness& c, const std::vector<int>& a,
                                  const std::vector<int>& b) {
  if (a.empty() || b.empty()) throw EmptyCommunityError("community node sets must be non-empty");
  std::vector<char> seen(static_cast<std::size_t>(c.n()), 0);
  for (int i : a) {
    if (i < 0 || i >= c.n()) throw UserError("node id " + std::to_string(i) + " out of range");
    if (seen[static_cast<std::size_t>(i)]++) {
      throw OverlappingCommunitiesError("node " + std::to_string(i) + " listed twice");
    }
  }
  for (int j : b) {
    if (j < 0 || j >= c.n()) throw UserError("node id " + std::to_string(j) + " out of range");
    if (seen[static_cast<std::size_t>(j)]++) {
      throw OverlappingCommunitiesError("node " + std::to_string(j) +
                                        " appears in both communities");
    }
  }
  double sum = 0.0;
  for (int i : a)
    for (int j : b) sum += c.entries(i, j);
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace qcomm
