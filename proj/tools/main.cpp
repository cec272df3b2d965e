#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace etale::cli;
  CLI::App app{"Finite étale groupoids, pseudogroup sheaves and their sheafification"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig config;
  std::string report_path, format = "json";
  app.add_option("--report", report_path, "write the JSON report to this file instead of stdout");
  app.add_option("--format", format, "report rendering on stdout")->check(CLI::IsMember({"json", "text"}));

  std::string path, suite, direction, kind, out_path;
  auto* validate = app.add_subcommand("validate", "structural checks for a space, presheaf, pseudogroup or groupoid");
  validate->add_option("file", path)->required();
  auto* check = app.add_subcommand("check", "run a verification suite");
  check->add_option("file", path)->required();
  check->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"prop11", "def21", "prop24", "prop25", "prop45", "universality"}));
  auto* roundtrip = app.add_subcommand("roundtrip", "groupoid -> pseudogroup -> groupoid or the reverse");
  roundtrip->add_option("file", path)->required();
  roundtrip->add_option("--direction", direction)->required()->check(CLI::IsMember({"g2p2g", "p2g2p"}));
  auto* corpus = app.add_subcommand("corpus", "generate the corpus and run the invariant battery");
  corpus->add_option("--seed", config.seed, "corpus seed");
  corpus->add_option("--max-points", config.max_points, "largest space size (1-4)");
  corpus->add_option("--random-groupoids", config.random_groupoids, "number of random étale groupoids");
  auto* dot = app.add_subcommand("dot", "export a DOT graph");
  dot->add_option("file", path)->required();
  dot->add_option("--kind", kind)->required()->check(CLI::IsMember({"space", "etale", "groupoid"}));
  dot->add_option("-o,--output", out_path, "DOT output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  CommandResult result;
  if (*validate) result = cmd_validate(path, config);
  else if (*check) result = cmd_check(path, suite, config);
  else if (*roundtrip) result = cmd_roundtrip(path, direction, config);
  else if (*corpus) result = cmd_corpus(config);
  else result = cmd_dot(path, kind, config);

  if (*dot && result.exit_code == kExitPass) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return kExitInput;
    }
    out << result.artifact;
  }
  const std::string rendered = format == "text" ? render_text(result.report) : result.report.dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(report_path);
    out << result.report.dump(2) << "\n";
    if (format == "text") std::cout << rendered;
  }
  return result.exit_code;
}
