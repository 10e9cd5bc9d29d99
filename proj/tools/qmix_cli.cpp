// qmix: command-line front end.
//
//   qmix synth       --config FILE [--out FILE]
//   qmix combine     --config FILE [--out FILE] [--verify]
//   qmix orbit       --config FILE [--out FILE] [--steps N] [--mub]
//   qmix epi-scan    [--config FILE] [--n 2|3] [--functional NAME] [--d D]
//                    [--samples N] [--seed N] [--threads T] [--dump FILE] [--out FILE]
//   qmix flat-search [--attempts N] [--seed N] [--out FILE]
//
// Exit status: 0 ok, 2 usage or config, 3 domain constraint, 4 invariant violation.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qmix/experiments.hpp"

namespace {

using qmix::json;

json read_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw qmix::InvalidArgument("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw qmix::InvalidArgument("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw qmix::InvalidArgument("cannot write '" + out + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unitary combinations of qudit states"};
  app.require_subcommand(1);

  std::string config, out, dump_path, functional = "von_neumann";
  std::uint64_t seed = 1;
  std::int64_t samples = 10000;
  int steps = 360, n = 2, d = 2, threads = 0, attempts = 2000;
  bool verify = false, mub = false, diagonal = false;

  auto* synth = app.add_subcommand("synth", "Coefficients from per-irrep unitaries");
  synth->add_option("--config", config, "JSON config")->required();
  synth->add_option("--out", out, "Output file (default stdout)");

  auto* combine = app.add_subcommand("combine", "Combine two or three states");
  combine->add_option("--config", config, "JSON config")->required();
  combine->add_option("--out", out, "Output file (default stdout)");
  combine->add_flag("--verify", verify, "Cross-check all evaluators");

  auto* orbit = app.add_subcommand("orbit", "Trace the orbit at fixed weights as CSV");
  orbit->add_option("--config", config, "JSON config")->required();
  orbit->add_option("--out", out, "CSV output file (default stdout)");
  orbit->add_option("--steps", steps, "Base resolution (>= 12)");
  orbit->add_flag("--mub", mub, "Append the Bloch vector of the combined x, y, z states");

  auto* scan = app.add_subcommand("epi-scan", "Monte-Carlo scan of the entropy inequality");
  scan->add_option("--config", config, "JSON config (keys as the flags)");
  scan->add_option("--n", n, "Number of states (2 or 3)");
  scan->add_option("--functional", functional, "von_neumann, renyi_0.5, renyi_2 or neg_purity");
  scan->add_option("--d", d, "Local dimension (2..4)");
  scan->add_option("--samples", samples, "Number of samples");
  scan->add_option("--seed", seed, "Base seed");
  scan->add_option("--threads", threads, "Worker threads (0: all cores)");
  scan->add_flag("--diagonal", diagonal, "Draw mutually commuting states");
  scan->add_option("--dump", dump_path, "Write counterexamples here (n = 3)");
  scan->add_option("--out", out, "Report file (default stdout)");

  auto* flat = app.add_subcommand("flat-search", "Search for flat unitary coefficient vectors");
  flat->add_option("--attempts", attempts, "Random starts");
  flat->add_option("--seed", seed, "Seed");
  flat->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      emit(out, qmix::dump(qmix::run_synth(read_config(config))));
    } else if (*combine) {
      emit(out, qmix::dump(qmix::run_combine(read_config(config), verify)));
    } else if (*orbit) {
      const json cfg = read_config(config);
      const auto run = qmix::run_orbit(cfg, steps);
      std::ostringstream csv;
      qmix::write_orbit_table(csv, run.orbits, mub || cfg.value("mub", false));
      emit(out, csv.str());
      std::cerr << run.summary.dump() << "\n";
    } else if (*scan) {
      const json cfg = read_config(config);
      qmix::ScanOptions opts;
      opts.n = cfg.value("n", n);
      opts.functional = cfg.value("functional", functional);
      opts.d = cfg.value("d", d);
      opts.samples = cfg.value("samples", samples);
      opts.seed = cfg.value("seed", seed);
      opts.threads = cfg.value("threads", threads);
      opts.diagonal_states = cfg.value("diagonal_states", diagonal);
      const auto report = qmix::epi_scan(opts);
      const json j = qmix::to_json(report);
      if (!report.counterexamples.empty()) {
        std::cerr << "epi-scan: " << report.counterexamples.size() << " sample(s) below "
                  << opts.dump_threshold << "\n";
        if (!dump_path.empty())
          emit(dump_path, qmix::dump({{"format", qmix::kFormat}, {"counterexamples", j["report"]["counterexamples"]}}));
      }
      emit(out, qmix::dump(j));
    } else if (*flat) {
      emit(out, qmix::dump(qmix::run_flat_search(attempts, seed)));
    }
  } catch (const std::exception& e) {
    std::cerr << "qmix: " << e.what() << "\n";
    return qmix::exit_code_for(e);
  }
  return 0;
}
