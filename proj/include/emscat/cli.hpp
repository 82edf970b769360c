#ifndef EMSCAT_CLI_HPP
#define EMSCAT_CLI_HPP

namespace emscat::cli {

/// Full command-line front end (subcommands shape, bie-validate, scatter,
/// homogenize, design). Returns the process exit code: 0 success, 2 config
/// error, 3 regime/feasibility error, 4 numerical failure.
int run(int argc, const char* const* argv);

}  // namespace emscat::cli

#endif
