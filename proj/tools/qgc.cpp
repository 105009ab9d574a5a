#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qgc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bilinear control on quantum graphs with periodic half-lines"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;

  const std::map<std::string, std::string> about{
      {"spectrum", "eigenvalues and mode shapes, with boundary verification"},
      {"bmatrix", "Galerkin matrix of the control potential"},
      {"check", "gap, decay and non-resonance hypotheses"},
      {"evolve", "simulate a drive and track norms"},
      {"steer", "local steering to a random nearby target"},
      {"roundtrip", "steer, re-simulate, then plan between two targets"},
  };
  for (const auto& name : qgc::subcommands()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "random seed (overrides config)");
    sub->add_option("--format", format, "csv or structured")->check(CLI::IsMember({"csv", "structured"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? qgc::kExitOk : qgc::kExitInputError;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw qgc::Error(qgc::ErrorCode::IoError, "cannot read " + config_path);
    std::ostringstream text;
    text << in.rdbuf();
    const auto base = std::filesystem::path(config_path).parent_path();
    qgc::RunConfig cfg = qgc::parse_config(text.str(), base.empty() ? "." : base.string());
    if (!out_dir.empty()) cfg.out = out_dir;
    if (seed) cfg.seed = *seed;

    const qgc::RunResult res = qgc::run(sub, cfg, qgc::format_from_string(format));
    for (const auto& a : res.artifacts) std::cout << a << "\n";
    return res.exit_code;
  } catch (const qgc::Error& e) {
    std::cerr << "qgc " << sub << ": " << e.what() << "\n";
    return qgc::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "qgc " << sub << ": internal error: " << e.what() << "\n";
    return qgc::kExitInputError;
  }
}
