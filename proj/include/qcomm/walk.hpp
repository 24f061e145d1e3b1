#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qcomm/errors.hpp"
#include "qcomm/hermitian.hpp"

namespace qcomm {

// Evolution regime a quantity was computed in. Short means the quadratic
// small-time expansion, finite a uniform time average over [0, t], infinite
// the t -> infinity limit of that average.
enum class RegimeTag { kShort, kFinite, kInfinite };

inline std::string regime_name(RegimeTag r) {
  switch (r) {
    case RegimeTag::kShort: return "short";
    case RegimeTag::kFinite: return "finite";
    default: return "infinite";
  }
}

// Uniform time average of exp(-i*delta*t') over t' in [0, t]:
//   phi(delta, t) = (1 - exp(-i*delta*t)) / (i*delta*t), phi(0, t) = 1.
// Written in the cancellation-free form sinc(x) - i*(1 - cos x)/x, x = delta*t.
inline std::complex<double> phi_kernel(double delta, double t) {
  const double x = delta * t;
  if (x == 0.0) return {1.0, 0.0};
  const double half_sin = std::sin(0.5 * x);
  return {std::sin(x) / x, -2.0 * half_sin * half_sin / x};
}

// U(t) = exp(-iHt) = sum_k exp(-i E_k t) Lambda_k.
inline Eigen::MatrixXcd propagator(const SpectralDecomposition& d, double t) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d.n, d.n);
  for (std::size_t k = 0; k < d.size(); ++k) {
    u += std::exp(std::complex<double>(0.0, -d.eigenvalues[k] * t)) * d.projectors[k];
  }
  return u;
}

// Site-to-site transition probabilities of a continuous-time walk. Rows and
// columns each sum to 1 (unitarity), entries lie in [0, 1] up to roundoff.
struct TransferMatrix {
  Eigen::MatrixXd entries;
  RegimeTag regime = RegimeTag::kFinite;
  double t = 0.0;  // evolution time; unused for the infinite regime

  Eigen::Index size() const { return entries.rows(); }
};

// R_ab(t) = |U_ab(t)|^2.
inline TransferMatrix transfer_matrix(const SpectralDecomposition& d, double t) {
  return {propagator(d, t).cwiseAbs2(), RegimeTag::kFinite, t};
}

// Time average of R over [0, t] via the kernel:
//   Rbar_ab = Re sum_jk phi(E_j - E_k, t) (Lambda_j)_ab conj((Lambda_k)_ab).
inline TransferMatrix avg_transfer_matrix(const SpectralDecomposition& d, double t) {
  if (t <= 0.0) throw NonPositiveTimeError("averaging window must have t > 0");
  const std::size_t m = d.size();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d.n, d.n);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      const auto w = phi_kernel(d.eigenvalues[j] - d.eigenvalues[k], t);
      acc.array() += w * d.projectors[j].array() * d.projectors[k].conjugate().array();
    }
  }
  return {acc.real(), RegimeTag::kFinite, t};
}

// t -> infinity: the kernel keeps only j == k, Rbar_ab = sum_k |(Lambda_k)_ab|^2.
inline TransferMatrix avg_transfer_matrix_infinite(const SpectralDecomposition& d) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d.n, d.n);
  for (const auto& p : d.projectors) acc += p.cwiseAbs2();
  return {acc, RegimeTag::kInfinite, 0.0};
}

// Quadratic small-time expansion of the average:
//   Rbar_ab = delta_ab (1 - t^2/3 (H^2)_aa) + t^2/3 |H_ab|^2 + O(t^3).
inline TransferMatrix short_time_avg_transfer(const HermitianMatrix& h, double t) {
  const double w = t * t / 3.0;
  Eigen::MatrixXd r = w * h.entries().cwiseAbs2();
  const Eigen::VectorXd hsq_diag = (h.entries() * h.entries()).diagonal().real();
  r.diagonal().array() += 1.0 - w * hsq_diag.array();
  return {r, RegimeTag::kShort, t};
}

// Per-node phases theta_a for the initial superposition.
using PhaseVector = std::vector<double>;

inline PhaseVector zero_phases(Eigen::Index n) { return PhaseVector(static_cast<std::size_t>(n), 0.0); }

// Density operator: Hermitian, unit trace, positive semidefinite (within tol).
struct DensityMatrix {
  Eigen::MatrixXcd entries;

  Eigen::Index size() const { return entries.rows(); }

  // Pure state (1/sqrt(n)) sum_a exp(i theta_a) |a>, the walk's standard start.
  static DensityMatrix uniform_superposition(Eigen::Index n, const PhaseVector& thetas) {
    if (n < 1) throw UserError("state needs at least one node");
    if (static_cast<Eigen::Index>(thetas.size()) != n) {
      throw UserError("phase vector has " + std::to_string(thetas.size()) +
                      " entries, expected " + std::to_string(n));
    }
    Eigen::VectorXcd psi(n);
    for (Eigen::Index a = 0; a < n; ++a) {
      psi(a) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), thetas[a]);
    }
    return {psi * psi.adjoint()};
  }

  void validate(double tol = 1e-9) const {
    if (entries.rows() != entries.cols()) throw NonSquareError("density matrix not square");
    if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > tol) {
      throw UserError("density matrix not Hermitian within tolerance");
    }
    if (std::abs(entries.trace() - std::complex<double>(1.0, 0.0)) > tol) {
      throw UserError("density matrix trace deviates from 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries);
    if (solver.info() != Eigen::Success) throw EigensolverError("positivity check failed");
    if (solver.eigenvalues().minCoeff() < -tol) {
      throw UserError("density matrix has a negative eigenvalue beyond tolerance");
    }
  }
};

// rho(t) = U rho U^dagger.
inline DensityMatrix evolve_density(const SpectralDecomposition& d, const DensityMatrix& rho0,
                                    double t) {
  const Eigen::MatrixXcd u = propagator(d, t);
  return {u * rho0.entries * u.adjoint()};
}

// Time average of rho over [0, t]:
//   rhobar = sum_jk phi(E_j - E_k, t) Lambda_j rho0 Lambda_k
// evaluated as sum_j (Lambda_j rho0) M_j with M_j = sum_k phi_jk Lambda_k.
inline DensityMatrix avg_density(const SpectralDecomposition& d, const DensityMatrix& rho0,
                                 double t) {
  if (t <= 0.0) throw NonPositiveTimeError("averaging window must have t > 0");
  const std::size_t m = d.size();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d.n, d.n);
  for (std::size_t j = 0; j < m; ++j) {
    Eigen::MatrixXcd mj = Eigen::MatrixXcd::Zero(d.n, d.n);
    for (std::size_t k = 0; k < m; ++k) {
      mj += phi_kernel(d.eigenvalues[j] - d.eigenvalues[k], t) * d.projectors[k];
    }
    acc += d.projectors[j] * rho0.entries * mj;
  }
  return {acc};
}

// t -> infinity: coherences between distinct eigenspaces vanish,
//   rhobar = sum_k Lambda_k rho0 Lambda_k.
inline DensityMatrix avg_density_infinite(const SpectralDecomposition& d,
                                          const DensityMatrix& rho0) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d.n, d.n);
  for (const auto& p : d.projectors) acc += p * rho0.entries * p;
  return {acc};
}

}  // namespace qcomm
