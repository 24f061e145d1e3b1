// qcomm: community detection in quantum networks from the command line.
//
// Subcommands:
//   partition    detect communities in one network and write the results
//   compare      NMI between two stored partitions
//   phase-sweep  partition stability under random coupling phases
//   generate     emit a toy or planted-community network as JSON
//
// Exit codes: 0 success, 1 invalid input or flags, 2 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcomm/qcomm.hpp"

namespace {

using namespace qcomm;

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UserError(flag + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw UserError(flag + ": empty list");
  return out;
}

// Network source shared by partition, phase-sweep and generate.
struct SourceOptions {
  std::string input_path;
  std::string toy;
  bool planted = false;
  int n = 0;
  int communities = 0;
  double degree = 0.0;
  double rewire = 0.0;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--input", input_path, "Hamiltonian JSON file");
    cmd->add_option("--toy", toy, "toy network variant a..i");
    cmd->add_flag("--planted", planted, "planted-community random network");
    cmd->add_option("--n", n, "planted: number of nodes");
    cmd->add_option("--communities", communities, "planted: number of communities");
    cmd->add_option("--degree", degree, "planted: mean intra-community degree");
    cmd->add_option("--rewire", rewire, "planted: fraction of edges re-targeted");
  }

  struct Network {
    HermitianMatrix hamiltonian;
    std::optional<Partition> planted_partition;
    bool seeded = false;
  };

  Network resolve(std::uint64_t seed) const {
    const int sources = (!input_path.empty() ? 1 : 0) + (!toy.empty() ? 1 : 0) + (planted ? 1 : 0);
    if (sources != 1) {
      throw UserError("choose exactly one network source: --input, --toy or --planted");
    }
    if (!input_path.empty()) {
      return {load_hamiltonian(input_path), std::nullopt, false};
    }
    if (!toy.empty()) {
      const ToyVariant v = toy_variant_from_name(toy);
      const bool uses_seed = v == ToyVariant::e || v == ToyVariant::h;
      return {toy_hamiltonian({v, seed}), std::nullopt, uses_seed};
    }
    if (n <= 0 || communities <= 0) {
      throw UserError("--planted requires --n and --communities");
    }
    PlantedNetwork net = planted_hamiltonian({n, communities, degree, rewire, seed});
    return {std::move(net.hamiltonian), std::move(net.planted), true};
  }

  Json config_json() const {
    Json j;
    if (!input_path.empty()) j["input"] = input_path;
    if (!toy.empty()) j["toy"] = toy;
    if (planted) {
      j["planted"] =
          Json{{"n", n}, {"communities", communities}, {"degree", degree}, {"rewire", rewire}};
    }
    return j;
  }
};

// Analysis settings shared by partition and phase-sweep.
struct AnalysisOptions {
  std::string measure_name = "transport";
  std::string regime_name = "infinite";
  double t = 0.0;
  std::string phases_text;
  double perturb_epsilon = 0.0;
  double degeneracy_tol = 1e-9;
  CLI::Option* t_option = nullptr;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--measure", measure_name,
                    "transport | fidelity | fidelity_phase_avg | purity | purity_phase_avg")
        ->required();
    cmd->add_option("--regime", regime_name, "short | finite | infinite")->required();
    t_option = cmd->add_option("--t", t, "averaging window for the finite regime");
    cmd->add_option("--phases", phases_text, "comma-separated start phases, default all zero");
    cmd->add_option("--perturb", perturb_epsilon,
                    "magnitude of a seeded Hermitian perturbation applied first");
    cmd->add_option("--degeneracy-tol", degeneracy_tol,
                    "relative gap below which eigenvalues share an eigenspace");
  }

  Measure measure() const { return measure_from_name(measure_name); }

  bool t_given() const { return t_option != nullptr && t_option->count() > 0; }

  RegimeTag regime() const {
    const RegimeTag r = regime_from_name(regime_name);
    if (r == RegimeTag::kFinite && (!t_given() || t <= 0.0)) {
      throw UserError("the finite regime requires --t with a positive value");
    }
    return r;
  }

  PhaseVector phases(Eigen::Index n) const {
    if (phases_text.empty()) return zero_phases(n);
    const auto values = parse_double_list(phases_text, "--phases");
    if (static_cast<Eigen::Index>(values.size()) != n) {
      throw UserError("--phases lists " + std::to_string(values.size()) + " values, network has " +
                      std::to_string(n) + " nodes");
    }
    return values;
  }

  Json config_json() const {
    Json j;
    j["measure"] = measure_name;
    j["regime"] = regime_name;
    if (t_given()) j["t"] = t;
    if (!phases_text.empty()) j["phases"] = phases_text;
    j["perturb"] = perturb_epsilon;
    j["degeneracy_tol"] = degeneracy_tol;
    return j;
  }
};

struct PipelineResult {
  NodeCloseness closeness;
  Dendrogram dendrogram;
  BestLevel best;
};

PipelineResult run_pipeline(const HermitianMatrix& h, const AnalysisOptions& analysis) {
  const NodeCloseness c = compute_closeness(h, analysis.measure(), analysis.regime(), analysis.t,
                                            analysis.phases(h.size()), analysis.degeneracy_tol);
  Dendrogram dendrogram = agglomerate(c);
  BestLevel best = best_level(dendrogram, c);
  return {c, std::move(dendrogram), std::move(best)};
}

std::string communities_to_string(const Partition& p) {
  std::ostringstream out;
  out << "[";
  const auto comms = p.communities();
  for (std::size_t i = 0; i < comms.size(); ++i) {
    out << (i ? "," : "") << "[";
    for (std::size_t j = 0; j < comms[i].size(); ++j) out << (j ? "," : "") << comms[i][j];
    out << "]";
  }
  out << "]";
  return out.str();
}

int cmd_partition(const SourceOptions& source, const AnalysisOptions& analysis,
                  std::uint64_t seed, const std::string& out_dir) {
  auto net = source.resolve(seed);
  bool seeded = net.seeded;
  HermitianMatrix h = net.hamiltonian;
  if (analysis.perturb_epsilon != 0.0) {
    h = perturb(h, analysis.perturb_epsilon, seed + 1);  // distinct stream from the generator
    seeded = true;
  }
  const PipelineResult result = run_pipeline(h, analysis);

  Json config = source.config_json();
  config.update(analysis.config_json());
  config["seed"] = seed;
  config["out"] = out_dir;

  std::filesystem::create_directories(out_dir);
  const auto path = [&out_dir](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  std::vector<std::string> csv_header;
  csv_header.push_back("qcomm partition");
  csv_header.push_back("config: " + config.dump());
  save_closeness_csv(result.closeness, path("closeness.csv"), csv_header);
  save_dendrogram(result.dendrogram, path("dendrogram.json"), config);
  save_partition(result.best.partition, result.best.q, analysis.measure_name,
                 analysis.regime_name,
                 seeded ? std::optional<std::int64_t>(static_cast<std::int64_t>(seed))
                        : std::nullopt,
                 path("partition.json"), config);

  std::cout << "communities: " << communities_to_string(result.best.partition) << "\n"
            << "modularity: " << result.best.q << "\n"
            << "wrote closeness.csv, dendrogram.json, partition.json to " << out_dir << "\n";
  return 0;
}

int cmd_compare(const std::string& path_x, const std::string& path_y) {
  const Partition x = load_partition(path_x);
  const Partition y = load_partition(path_y);
  std::printf("%.6f\n", nmi(x, y));
  return 0;
}

int cmd_phase_sweep(const SourceOptions& source, const AnalysisOptions& analysis,
                    std::uint64_t seed, const std::string& sigmas_text, int samples,
                    const std::string& out_dir) {
  if (samples < 1) throw UserError("--samples must be at least 1");
  const auto sigmas = parse_double_list(sigmas_text, "--sigmas");
  for (double s : sigmas) {
    if (s < 0.0) throw NegativeSigmaError("--sigmas must be non-negative");
  }

  auto net = source.resolve(seed);
  HermitianMatrix base = net.hamiltonian;
  if (analysis.perturb_epsilon != 0.0) base = perturb(base, analysis.perturb_epsilon, seed + 1);
  const Partition zero_phase = run_pipeline(base, analysis).best.partition;

  struct Row {
    double sigma;
    double mean_zero, sd_zero;
    double mean_planted = std::nan(""), sd_planted = std::nan("");
  };
  const auto mean_sd = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var = v.size() > 1 ? var / static_cast<double>(v.size() - 1) : 0.0;
    return std::pair<double, double>(mean, std::sqrt(var));
  };

  std::vector<Row> rows;
  for (double sigma : sigmas) {
    std::vector<double> vs_zero, vs_planted;
    for (int j = 0; j < samples; ++j) {
      const HermitianMatrix hs =
          randomize_phases(base, sigma, seed + static_cast<std::uint64_t>(j));
      const Partition p = run_pipeline(hs, analysis).best.partition;
      vs_zero.push_back(nmi(p, zero_phase));
      if (net.planted_partition) vs_planted.push_back(nmi(p, *net.planted_partition));
    }
    Row row;
    row.sigma = sigma;
    std::tie(row.mean_zero, row.sd_zero) = mean_sd(vs_zero);
    if (!vs_planted.empty()) std::tie(row.mean_planted, row.sd_planted) = mean_sd(vs_planted);
    rows.push_back(row);
  }

  Json config = source.config_json();
  config.update(analysis.config_json());
  config["seed"] = seed;
  config["sigmas"] = sigmas;
  config["samples"] = samples;
  config["out"] = out_dir;

  std::filesystem::create_directories(out_dir);
  const std::string csv_path = (std::filesystem::path(out_dir) / "sweep.csv").string();
  std::ostringstream csv;
  csv.precision(17);
  csv << "# qcomm phase-sweep\n# config: " << config.dump() << "\n";
  csv << "sigma,mean_nmi_vs_zero_phase,stddev_vs_zero_phase,"
         "mean_nmi_vs_planted,stddev_vs_planted\n";
  for (const auto& row : rows) {
    csv << row.sigma << "," << row.mean_zero << "," << row.sd_zero << "," << row.mean_planted
        << "," << row.sd_planted << "\n";
  }
  std::ofstream out(csv_path);
  if (!out) throw UserError("cannot write '" + csv_path + "'");
  out << csv.str();

  for (const auto& row : rows) {
    std::cout << "sigma " << row.sigma << ": nmi vs zero phase " << row.mean_zero << " +- "
              << row.sd_zero;
    if (!std::isnan(row.mean_planted)) {
      std::cout << ", vs planted " << row.mean_planted << " +- " << row.sd_planted;
    }
    std::cout << "\n";
  }
  std::cout << "wrote sweep.csv to " << out_dir << "\n";
  return 0;
}

int cmd_generate(const SourceOptions& source, std::uint64_t seed, double hermiticity_tol,
                 const std::string& out_dir) {
  if (!source.input_path.empty()) {
    throw UserError("generate builds networks; --input is not a generator");
  }
  auto net = source.resolve(seed);

  Json config = source.config_json();
  config["seed"] = seed;
  config["out"] = out_dir;

  Json metadata;
  metadata["config"] = config;
  metadata["connected"] = is_connected(net.hamiltonian);

  std::filesystem::create_directories(out_dir);
  const auto path = [&out_dir](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  save_hamiltonian(net.hamiltonian, path("hamiltonian.json"), hermiticity_tol, metadata);
  std::cout << "wrote hamiltonian.json";
  if (net.planted_partition) {
    save_partition(*net.planted_partition, std::nan(""), "planted", "none",
                   static_cast<std::int64_t>(seed), path("planted_partition.json"), config);
    std::cout << ", planted_partition.json";
  }
  std::cout << " to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"community detection in quantum networks"};
  app.require_subcommand(1);

  SourceOptions part_source, sweep_source, gen_source;
  AnalysisOptions part_analysis, sweep_analysis;
  std::uint64_t part_seed = 0, sweep_seed = 0, gen_seed = 0;
  std::string part_out = ".", sweep_out = ".", gen_out = ".";
  std::string compare_x, compare_y;
  std::string sweep_sigmas = "0,0.3,0.6,1.0";
  int sweep_samples = 50;
  double gen_tol = 1e-9;

  auto* partition_cmd =
      app.add_subcommand("partition", "detect communities in one network");
  part_source.add_flags(partition_cmd);
  part_analysis.add_flags(partition_cmd);
  partition_cmd->add_option("--seed", part_seed, "seed for all randomized stages");
  partition_cmd->add_option("--out", part_out, "output directory");

  auto* compare_cmd = app.add_subcommand("compare", "NMI between two stored partitions");
  compare_cmd->add_option("partition_x", compare_x, "first partition JSON")->required();
  compare_cmd->add_option("partition_y", compare_y, "second partition JSON")->required();

  auto* sweep_cmd =
      app.add_subcommand("phase-sweep", "partition stability under random coupling phases");
  sweep_source.add_flags(sweep_cmd);
  sweep_analysis.add_flags(sweep_cmd);
  sweep_cmd->add_option("--sigmas", sweep_sigmas, "comma-separated phase spreads");
  sweep_cmd->add_option("--samples", sweep_samples, "samples per sigma");
  sweep_cmd->add_option("--seed", sweep_seed, "base seed; sample j uses seed + j");
  sweep_cmd->add_option("--out", sweep_out, "output directory");

  auto* generate_cmd = app.add_subcommand("generate", "emit a network as JSON");
  gen_source.add_flags(generate_cmd);
  generate_cmd->add_option("--seed", gen_seed, "generator seed");
  generate_cmd->add_option("--hermiticity-tol", gen_tol, "tolerance stored in the file");
  generate_cmd->add_option("--out", gen_out, "output directory");

  try {
    app.parse(argc, argv);
    if (partition_cmd->parsed()) {
      return cmd_partition(part_source, part_analysis, part_seed, part_out);
    }
    if (compare_cmd->parsed()) return cmd_compare(compare_x, compare_y);
    if (sweep_cmd->parsed()) {
      return cmd_phase_sweep(sweep_source, sweep_analysis, sweep_seed, sweep_sigmas,
                             sweep_samples, sweep_out);
    }
    return cmd_generate(gen_source, gen_seed, gen_tol, gen_out);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const UserError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
