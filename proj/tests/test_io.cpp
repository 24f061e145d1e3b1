#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include <qcomm/closeness.hpp>
#include <qcomm/generators.hpp>
#include <qcomm/io.hpp>
#include <qcomm/partition.hpp>
#include <qcomm/rng.hpp>

#include "oracles.hpp"

using qcomm::HermitianMatrix;
using qcomm::Partition;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/qcomm_io_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("Hamiltonians round-trip bit for bit") {
  qcomm::Rng rng(3);
  HermitianMatrix h =
      qcomm::validate_hermitian(oracles::random_hermitian(14, rng), 1e-9);
  TempFile f("roundtrip.json");
  qcomm::save_hamiltonian(h, f.path);
  HermitianMatrix back = qcomm::load_hamiltonian(f.path);
  REQUIRE(back.size() == 14);
  CHECK((back.entries() - h.entries()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a real-only file loads with zero imaginary part") {
  TempFile f("real_only.json");
  write(f.path, R"({"n": 2, "real": [[0.0, 1.5], [1.5, -2.0]]})");
  HermitianMatrix h = qcomm::load_hamiltonian(f.path);
  CHECK(h.entries()(0, 1) == std::complex<double>(1.5, 0.0));
  CHECK(h.entries()(1, 1) == std::complex<double>(-2.0, 0.0));
  CHECK(h.entries().imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("saving omits an identically zero imaginary part") {
  Eigen::MatrixXcd real_valued(2, 2);
  real_valued << 0.0, 1.0, 1.0, 0.0;
  TempFile f("no_imag.json");
  qcomm::save_hamiltonian(qcomm::validate_hermitian(real_valued, 1e-9), f.path);
  qcomm::Json j = qcomm::detail::load_json_file(f.path);
  CHECK_FALSE(j.contains("imag"));
  Eigen::MatrixXcd with_imag(2, 2);
  with_imag << 0.0, std::complex<double>(0.0, 1.0), std::complex<double>(0.0, -1.0), 0.0;
  TempFile g("with_imag.json");
  qcomm::save_hamiltonian(qcomm::validate_hermitian(with_imag, 1e-9), g.path);
  CHECK(qcomm::detail::load_json_file(g.path).contains("imag"));
}

TEST_CASE("malformed Hamiltonian files raise parse errors") {
  TempFile f("bad.json");

  write(f.path, "not json at all {");
  CHECK_THROWS_AS(qcomm::load_hamiltonian(f.path), qcomm::ParseError);

  write(f.path, R"({"real": [[0.0]]})");
  CHECK_THROWS_AS(qcomm::load_hamiltonian(f.path), qcomm::ParseError);

  write(f.path, R"({"n": 0, "real": []})");
  CHECK_THROWS_AS(qcomm::load_hamiltonian(f.path), qcomm::ParseError);

  write(f.path, R"({"n": 2})");
  CHECK_THROWS_AS(qcomm::load_hamiltonian(f.path), qcomm::ParseError);

  write(f.path, R"({"n": 2, "real": [[0.0, 1.0]]})");
  CHECK_THROWS_AS(qcomm::load_hamiltonian(f.path), qcomm::ParseError);

  write(f.path, R"({"n": 2, "real": [[0.0, 1.0], [1.0]]})");
  CHECK_THROWS_WITH(qcomm::load_hamiltonian(f.path),
                    Catch::Matchers::ContainsSubstring("row 1"));

  write(f.path, R"({"n": 2, "real": [[0.0, 1.0], [1.0, "x"]]})");
  CHECK_THROWS_AS(qcomm::load_hamiltonian(f.path), qcomm::ParseError);

  write(f.path, R"({"n": 2, "real": [[0.0, 1.0], [1.0, 0.0]], "hermiticity_tol": 0.0})");
  CHECK_THROWS_AS(qcomm::load_hamiltonian(f.path), qcomm::ParseError);

  CHECK_THROWS_AS(qcomm::load_hamiltonian("/tmp/qcomm_io_test_does_not_exist.json"),
                  qcomm::ParseError);
}

TEST_CASE("a non-Hermitian file is rejected with a dedicated error") {
  TempFile f("skew.json");
  write(f.path, R"({"n": 2, "real": [[0.0, 1.0], [-1.0, 0.0]]})");
  CHECK_THROWS_AS(qcomm::load_hamiltonian(f.path), qcomm::HermiticityError);

  // A generous stored tolerance lets a slightly drifted matrix through.
  write(f.path, R"({"n": 2, "real": [[0.0, 1.0], [1.001, 0.0]], "hermiticity_tol": 0.01})");
  HermitianMatrix h = qcomm::load_hamiltonian(f.path);
  CHECK(h.entries()(0, 1).real() == Catch::Approx(1.0005));
}

TEST_CASE("partitions round-trip with their provenance") {
  Partition p(std::vector<int>{0, 0, 1, 1, 2});
  TempFile f("partition.json");
  qcomm::save_partition(p, 0.37, "transport", "infinite", std::int64_t{42}, f.path,
                        qcomm::Json{{"toy", "a"}});
  qcomm::Json j = qcomm::detail::load_json_file(f.path);
  CHECK(j["modularity"].get<double>() == 0.37);
  CHECK(j["measure"] == "transport");
  CHECK(j["regime"] == "infinite");
  CHECK(j["seed"].get<std::int64_t>() == 42);
  CHECK(j["config"]["toy"] == "a");
  CHECK(qcomm::load_partition(f.path) == p);

  qcomm::save_partition(p, 0.0, "transport", "infinite", std::nullopt, f.path);
  CHECK(qcomm::detail::load_json_file(f.path)["seed"].is_null());

  write(f.path, R"({"labels": []})");
  CHECK_THROWS_AS(qcomm::load_partition(f.path), qcomm::ParseError);
  write(f.path, R"({"labels": [0, 1.5]})");
  CHECK_THROWS_AS(qcomm::load_partition(f.path), qcomm::ParseError);
  write(f.path, R"({})");
  CHECK_THROWS_AS(qcomm::load_partition(f.path), qcomm::ParseError);
}

TEST_CASE("dendrogram files list merges in order") {
  qcomm::NodeCloseness c = qcomm::closeness_transport_infinite(
      qcomm::spectral_decompose(qcomm::toy_hamiltonian({qcomm::ToyVariant::a, 0})));
  qcomm::Dendrogram d = qcomm::agglomerate(c);
  TempFile f("dendrogram.json");
  qcomm::save_dendrogram(d, f.path, qcomm::Json{{"toy", "a"}});
  qcomm::Json j = qcomm::detail::load_json_file(f.path);
  REQUIRE(j["merges"].size() == 3);
  CHECK(j["merges"][0]["merged"] ==
        qcomm::Json::array({qcomm::Json::array({0}), qcomm::Json::array({1}),
                            qcomm::Json::array({2})}));
  CHECK(j["merges"][2]["closeness"].get<double>() == Catch::Approx(0.0).margin(1e-14));
  CHECK(j["config"]["toy"] == "a");
}

TEST_CASE("closeness CSV carries config comments and full precision") {
  Eigen::MatrixXd m(2, 2);
  m << 0.125, 1.0 / 3.0, 1.0 / 3.0, 0.125;
  qcomm::NodeCloseness c{m, qcomm::Measure::kTransport, qcomm::RegimeTag::kInfinite, 0.0};
  TempFile f("closeness.csv");
  qcomm::save_closeness_csv(c, f.path, {"measure: transport", "regime: infinite"});
  std::ifstream in(f.path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# measure: transport");
  std::getline(in, line);
  CHECK(line == "# regime: infinite");
  std::getline(in, line);
  CHECK(line == "node,0,1");
  std::getline(in, line);
  CHECK(line == "0,0.125,0.33333333333333331");
}
