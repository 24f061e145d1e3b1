#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qcomm/errors.hpp"

namespace qcomm {

// Square complex matrix known to be exactly Hermitian (H == H^dagger entrywise).
// Obtain one through validate_hermitian; generators construct theirs the same way.
class HermitianMatrix {
 public:
  const Eigen::MatrixXcd& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.rows(); }

  friend HermitianMatrix validate_hermitian(const Eigen::MatrixXcd& m, double tolerance);

 private:
  explicit HermitianMatrix(Eigen::MatrixXcd m) : entries_(std::move(m)) {}
  Eigen::MatrixXcd entries_;
};

// Checks max_ij |M_ij - conj(M_ji)| <= tolerance, then returns (M + M^dagger)/2.
// The symmetrization is the identity on inputs that are already exactly Hermitian.
inline HermitianMatrix validate_hermitian(const Eigen::MatrixXcd& m, double tolerance) {
  if (tolerance <= 0.0) throw UserError("hermiticity tolerance must be positive");
  if (m.rows() != m.cols()) {
    throw NonSquareError("matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() == 0) throw UserError("matrix must have at least one node");
  const double asymmetry = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > tolerance) {
    throw AsymmetryError("max asymmetry " + std::to_string(asymmetry) +
                         " exceeds tolerance " + std::to_string(tolerance));
  }
  return HermitianMatrix((m + m.adjoint()) / 2.0);
}

// Eigendecomposition with near-degenerate eigenvalues grouped into joint
// eigenspaces: distinct eigenvalues E_k with orthogonal projectors Lambda_k,
// so that sum_k Lambda_k = I and H = sum_k E_k Lambda_k.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;           // ascending, one per eigenspace
  std::vector<Eigen::MatrixXcd> projectors;  // Lambda_k, same order
  Eigen::Index n = 0;

  std::size_t size() const { return eigenvalues.size(); }

  Eigen::MatrixXcd reconstruct() const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) h += eigenvalues[k] * projectors[k];
    return h;
  }
};

// Groups sorted eigenvalues greedily: a new eigenspace starts when the gap to
// the previous eigenvalue exceeds degeneracy_tol * max(1, spectral range).
// Each group's eigenvalue is the group mean; its projector sums the outer
// products of the group's eigenvectors.
inline SpectralDecomposition spectral_decompose(const HermitianMatrix& h,
                                                double degeneracy_tol = 1e-9) {
  if (degeneracy_tol < 0.0) throw UserError("degeneracy tolerance must be non-negative");
  const Eigen::Index n = h.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.entries());
  if (solver.info() != Eigen::Success) {
    throw EigensolverError("eigensolver failed to converge on " + std::to_string(n) +
                           "x" + std::to_string(n) + " matrix");
  }
  const Eigen::VectorXd evs = solver.eigenvalues();
  const Eigen::MatrixXcd vecs = solver.eigenvectors();

  const double range = (n > 0) ? evs(n - 1) - evs(0) : 0.0;
  const double gap_threshold = degeneracy_tol * std::max(1.0, range);

  SpectralDecomposition d;
  d.n = n;
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || evs(i) - evs(i - 1) > gap_threshold) {
      const Eigen::Index count = i - begin;
      d.eigenvalues.push_back(evs.segment(begin, count).mean());
      const auto block = vecs.middleCols(begin, count);
      d.projectors.push_back(block * block.adjoint());
      begin = i;
    }
  }
  return d;
}

}  // namespace qcomm
