#pragma once

#include <filesystem>
#include <iosfwd>

#include "solitonlab/config.hpp"

namespace solitonlab {

/// Executes `command` on `config`, writing snapshots.csv, observables.csv and
/// summary.txt into `out_dir` (created if missing). hamiltonian-scan writes
/// no snapshots. Library errors propagate.
void execute(Command command, const RunConfig& config, const std::filesystem::path& out_dir);

/// Like execute(), but reports failures on `err` and returns the exit status:
/// 0 on success, Error::exit_code() for library errors, 10 otherwise.
int run(Command command, const RunConfig& config, const std::filesystem::path& out_dir,
        std::ostream& err);

/// Worker threads for compare, read from SOLITONLAB_THREADS (default 1).
/// With two or more the engines run concurrently.
int compare_threads();

}  // namespace solitonlab
