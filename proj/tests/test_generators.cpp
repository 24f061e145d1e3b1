#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include <qcomm/generators.hpp>
#include <qcomm/hermitian.hpp>
#include <qcomm/rng.hpp>

using Catch::Approx;
using qcomm::HermitianMatrix;
using qcomm::Partition;
using qcomm::PlantedSpec;
using qcomm::ToyVariant;

namespace {

HermitianMatrix toy(ToyVariant v, uint64_t seed = 0) {
  return qcomm::toy_hamiltonian({v, seed});
}

int cross_edges(const HermitianMatrix& h, const Partition& p) {
  int count = 0;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    for (Eigen::Index j = i + 1; j < h.size(); ++j) {
      if (h.entries()(i, j) != std::complex<double>(0.0, 0.0) &&
          p.labels()[static_cast<size_t>(i)] != p.labels()[static_cast<size_t>(j)]) {
        ++count;
      }
    }
  }
  return count;
}

int total_edges(const HermitianMatrix& h) {
  int count = 0;
  for (Eigen::Index i = 0; i < h.size(); ++i)
    for (Eigen::Index j = i + 1; j < h.size(); ++j)
      if (h.entries()(i, j) != std::complex<double>(0.0, 0.0)) ++count;
  return count;
}

}  // namespace

TEST_CASE("variant names map onto the nine panels") {
  CHECK(qcomm::toy_variant_from_name("a") == ToyVariant::a);
  CHECK(qcomm::toy_variant_from_name("i") == ToyVariant::i);
  CHECK_THROWS_AS(qcomm::toy_variant_from_name("j"), qcomm::UserError);
  CHECK_THROWS_AS(qcomm::toy_variant_from_name("ab"), qcomm::UserError);
  CHECK_THROWS_AS(qcomm::toy_variant_from_name(""), qcomm::UserError);
}

TEST_CASE("detached variants are two unit triangles") {
  HermitianMatrix h = toy(ToyVariant::a);
  REQUIRE(h.size() == 6);
  for (int base : {0, 3}) {
    CHECK(h.entries()(base, base + 1) == std::complex<double>(1.0, 0.0));
    CHECK(h.entries()(base, base + 2) == std::complex<double>(1.0, 0.0));
    CHECK(h.entries()(base + 1, base + 2) == std::complex<double>(1.0, 0.0));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) CHECK(h.entries()(i, j) == std::complex<double>(0.0, 0.0));
  CHECK(h.entries().diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((toy(ToyVariant::b).entries() - h.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((toy(ToyVariant::c).entries() - h.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(qcomm::is_connected(h));
}

TEST_CASE("bridged variants add the four cross couplings") {
  HermitianMatrix h = toy(ToyVariant::d);
  for (auto [i, j] : {std::pair{1, 3}, {1, 4}, {2, 3}, {2, 4}}) {
    CHECK(h.entries()(i, j) == std::complex<double>(1.0, 0.0));
  }
  CHECK(h.entries()(0, 3) == std::complex<double>(0.0, 0.0));
  CHECK(h.entries()(0, 4) == std::complex<double>(0.0, 0.0));
  CHECK(h.entries()(0, 5) == std::complex<double>(0.0, 0.0));
  CHECK((toy(ToyVariant::g).entries() - h.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(qcomm::is_connected(h));
}

TEST_CASE("random-phase variants keep unit bridge magnitudes") {
  HermitianMatrix h = toy(ToyVariant::e, 12345);
  for (auto [i, j] : {std::pair{1, 3}, {1, 4}, {2, 3}, {2, 4}}) {
    CHECK(std::abs(h.entries()(i, j)) == Approx(1.0).margin(1e-15));
    CHECK(h.entries()(j, i) == std::conj(h.entries()(i, j)));
  }
  CHECK((toy(ToyVariant::e, 12345).entries() - h.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((toy(ToyVariant::h, 12345).entries() - h.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((toy(ToyVariant::e, 54321).entries() - h.entries()).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("signed variants flip the couplings into one bridgehead") {
  HermitianMatrix h = toy(ToyVariant::f);
  CHECK(h.entries()(1, 3) == std::complex<double>(1.0, 0.0));
  CHECK(h.entries()(2, 3) == std::complex<double>(1.0, 0.0));
  CHECK(h.entries()(1, 4) == std::complex<double>(-1.0, 0.0));
  CHECK(h.entries()(2, 4) == std::complex<double>(-1.0, 0.0));
  CHECK((toy(ToyVariant::i).entries() - h.entries()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("planted networks are deterministic simple graphs") {
  PlantedSpec spec{60, 4, 6.0, 0.05, 7};
  qcomm::PlantedNetwork net = qcomm::planted_hamiltonian(spec);
  qcomm::PlantedNetwork again = qcomm::planted_hamiltonian(spec);
  CHECK((net.hamiltonian.entries() - again.hamiltonian.entries()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(net.planted == again.planted);

  REQUIRE(net.hamiltonian.size() == 60);
  CHECK(net.planted.community_count() == 4);
  for (int i = 0; i < 60; ++i) {
    CHECK(net.planted.labels()[static_cast<size_t>(i)] == i / 15);
    for (int j = 0; j < 60; ++j) {
      const std::complex<double> v = net.hamiltonian.entries()(i, j);
      CHECK((v == std::complex<double>(0.0, 0.0) || v == std::complex<double>(1.0, 0.0)));
      if (i == j) CHECK(v == std::complex<double>(0.0, 0.0));
    }
  }
  // Rewiring moves edges without changing their number.
  CHECK(total_edges(net.hamiltonian) == 4 * std::lround(15 * 6.0 / 2.0));
}

TEST_CASE("rewiring fraction controls the cross-community edges") {
  PlantedSpec pure{40, 4, 4.0, 0.0, 11};
  qcomm::PlantedNetwork net = qcomm::planted_hamiltonian(pure);
  CHECK(cross_edges(net.hamiltonian, net.planted) == 0);

  PlantedSpec mixed{40, 4, 4.0, 0.3, 11};
  qcomm::PlantedNetwork noisy = qcomm::planted_hamiltonian(mixed);
  const int cross = cross_edges(noisy.hamiltonian, noisy.planted);
  CHECK(cross > 0);
  CHECK(cross < total_edges(noisy.hamiltonian));

  PlantedSpec scrambled{40, 4, 4.0, 1.0, 11};
  qcomm::PlantedNetwork all = qcomm::planted_hamiltonian(scrambled);
  CHECK(cross_edges(all.hamiltonian, all.planted) >
        total_edges(all.hamiltonian) * 3 / 4);
}

TEST_CASE("planted parameters are validated") {
  CHECK_THROWS_AS(qcomm::planted_hamiltonian({0, 1, 1.0, 0.0, 0}), qcomm::UserError);
  CHECK_THROWS_AS(qcomm::planted_hamiltonian({10, 3, 1.0, 0.0, 0}), qcomm::UserError);
  CHECK_THROWS_AS(qcomm::planted_hamiltonian({12, 4, 3.0, 0.0, 0}),
                  qcomm::InfeasibleDegreeError);
  CHECK_THROWS_AS(qcomm::planted_hamiltonian({12, 4, -1.0, 0.0, 0}),
                  qcomm::InfeasibleDegreeError);
  CHECK_THROWS_AS(qcomm::planted_hamiltonian({12, 4, 2.0, -0.1, 0}), qcomm::UserError);
  CHECK_THROWS_AS(qcomm::planted_hamiltonian({12, 4, 2.0, 1.1, 0}), qcomm::UserError);
  CHECK_NOTHROW(qcomm::planted_hamiltonian({12, 4, 2.0, 1.0, 0}));
}

TEST_CASE("phase randomization preserves magnitudes and symmetry") {
  HermitianMatrix h = toy(ToyVariant::d);
  HermitianMatrix out = qcomm::randomize_phases(h, 0.7, 13);
  for (Eigen::Index i = 0; i < 6; ++i) {
    CHECK(out.entries()(i, i) == h.entries()(i, i));
    for (Eigen::Index j = i + 1; j < 6; ++j) {
      CHECK(std::abs(out.entries()(i, j)) ==
            Approx(std::abs(h.entries()(i, j))).margin(1e-15));
      CHECK(out.entries()(j, i) == std::conj(out.entries()(i, j)));
      if (h.entries()(i, j) == std::complex<double>(0.0, 0.0)) {
        CHECK(out.entries()(i, j) == std::complex<double>(0.0, 0.0));
      }
    }
  }
  HermitianMatrix again = qcomm::randomize_phases(h, 0.7, 13);
  CHECK((again.entries() - out.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((out.entries() - h.entries()).cwiseAbs().maxCoeff() > 1e-3);

  HermitianMatrix frozen = qcomm::randomize_phases(h, 0.0, 13);
  CHECK((frozen.entries() - h.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(qcomm::randomize_phases(h, -0.1, 13), qcomm::NegativeSigmaError);
}

TEST_CASE("perturbation is bounded, Hermitian, and splits degeneracies") {
  HermitianMatrix h = toy(ToyVariant::a);
  const double eps = 1e-6;
  HermitianMatrix out = qcomm::perturb(h, eps, 17);
  Eigen::MatrixXcd diff = out.entries() - h.entries();
  CHECK(diff.cwiseAbs().maxCoeff() <= eps * (1.0 + 1e-12));
  CHECK(diff.cwiseAbs().maxCoeff() > 0.0);
  CHECK((out.entries() - out.entries().adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.entries().diagonal().imag().cwiseAbs().maxCoeff() == 0.0);

  HermitianMatrix again = qcomm::perturb(h, eps, 17);
  CHECK((again.entries() - out.entries()).cwiseAbs().maxCoeff() == 0.0);
  HermitianMatrix other = qcomm::perturb(h, eps, 18);
  CHECK((other.entries() - out.entries()).cwiseAbs().maxCoeff() > 0.0);

  // The detached triangles have a degenerate spectrum; a generic perturbation
  // separates all six levels.
  CHECK(qcomm::spectral_decompose(h).size() == 2);
  CHECK(qcomm::spectral_decompose(out).size() == 6);

  HermitianMatrix frozen = qcomm::perturb(h, 0.0, 17);
  CHECK((frozen.entries() - h.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(qcomm::perturb(h, -1e-9, 17), qcomm::UserError);
}

TEST_CASE("random phase vectors are uniform on the circle") {
  qcomm::Rng rng(19);
  qcomm::PhaseVector thetas = qcomm::random_phases(1000, rng);
  REQUIRE(thetas.size() == 1000);
  double mean = 0.0;
  for (double t : thetas) {
    CHECK(t >= 0.0);
    CHECK(t < 2.0 * M_PI);
    mean += t;
  }
  mean /= 1000.0;
  CHECK(mean == Approx(M_PI).margin(0.2));
}

TEST_CASE("connectivity test walks the coupling graph") {
  CHECK(qcomm::is_connected(toy(ToyVariant::d)));
  CHECK_FALSE(qcomm::is_connected(toy(ToyVariant::a)));
  Eigen::MatrixXcd single(1, 1);
  single << 0.0;
  CHECK(qcomm::is_connected(qcomm::validate_hermitian(single, 1e-9)));
}
