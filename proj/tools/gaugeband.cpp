// gaugeband <experiment> --config path.json [--out dir] [--h 0.4 --M 64 ...]
#include <iostream>

#include <CLI11.hpp>

#include "gaugeband/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical band computations for lattice Pauli potentials"};
  app.set_help_flag("--help", "Print this help message and exit");
  std::string experiment, config_path, out_dir, branch;
  std::vector<double> h;
  std::optional<int> M, P, K, Q, P_omega, j_max;
  app.add_option("experiment", experiment, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(gaugeband::ExperimentNames()));
  app.add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--h", h, "Semiclassical parameter(s), replacing h_list")->expected(1, -1);
  app.add_option("--M", M, "Plane-wave cutoff");
  app.add_option("--P", P, "Grid points per axis");
  app.add_option("--K", K, "Brillouin samples per axis");
  app.add_option("--Q", Q, "Eikonal resolution");
  app.add_option("--P-omega", P_omega, "Dirichlet intervals");
  app.add_option("--j-max", j_max, "Number of bands");
  app.add_option("--branch", branch, "Unitary branch: auto, general or delta0");
  CLI11_PARSE(app, argc, argv);

  try {
    gaugeband::ExperimentConfig c = gaugeband::LoadConfig(config_path);
    c.experiment = experiment;
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (!h.empty()) c.h_list = h;
    if (M) c.M = *M;
    if (P) c.P = *P;
    if (K) c.K = *K;
    if (Q) c.Q = *Q;
    if (P_omega) c.P_omega = *P_omega;
    if (j_max) c.j_max = *j_max;
    if (!branch.empty()) c.branch = branch;
    c = gaugeband::ParseConfig(gaugeband::ToJson(c));
    const int code = gaugeband::Run(c);
    std::cout << experiment << ": "
              << (code == 0 ? "passed" : code == 2 ? "thresholds failed" : "error")
              << " (" << c.out_dir << "/report.json)\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "gaugeband: " << e.what() << "\n";
    return 1;
  }
}
