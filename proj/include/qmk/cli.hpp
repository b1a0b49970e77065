#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qmk {

enum class OutputFormat { text, structured };

struct CommandOptions {
  OutputFormat format = OutputFormat::text;
  unsigned long seed = 1;
  std::size_t random_samples = 50;
};

struct CommandResult {
  int status = 0;  // 0 all checks pass, 1 a check failed, 2 usage or input error
  std::string output;
};

/// Runs one command on the text of its input file. `args` are the
/// positional arguments after the command name (field and map names).
CommandResult run_command(std::string_view command, const std::vector<std::string>& args,
                          std::string_view input, const CommandOptions& options = {});

}  // namespace qmk
