#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qmk/cli.hpp"
#include "qmk/graded_algebra.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qmk: graded supermanifold charts and homological vector fields"};
  app.set_help_all_flag("--help-all");

  std::string command;
  std::vector<std::string> args;
  std::string input;
  std::string format = "text";
  unsigned long seed = 1;
  app.add_option("command", command,
                 "check-q2 | two-layer | verify-identities | axioms | morphism | linfty | recover")
      ->required();
  app.add_option("args", args, "field or map names; for recover, the tables file");
  app.add_option("--input,-i", input, "chart document or tables file");
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--seed", seed, "seed for the random identity samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (const char* limit = std::getenv("QMK_MAX_TERMS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(limit, &end, 10);
    if (end == limit || *end != '\0') {
      std::cerr << "error: QMK_MAX_TERMS must be a non-negative integer\n";
      return 2;
    }
    qmk::set_term_limit(static_cast<std::size_t>(v));
  }

  if (command == "recover" && input.empty() && !args.empty()) {
    input = args.front();
    args.erase(args.begin());
  }
  if (input.empty()) {
    std::cerr << "error: no input file (use --input)\n";
    return 2;
  }
  std::ifstream in(input);
  if (!in) {
    std::cerr << "error: cannot read '" << input << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  qmk::CommandOptions options;
  options.format = format == "structured" ? qmk::OutputFormat::structured : qmk::OutputFormat::text;
  options.seed = seed;
  const qmk::CommandResult r = qmk::run_command(command, args, buf.str(), options);
  (r.status == 2 ? std::cerr : std::cout) << r.output;
  return r.status;
}
