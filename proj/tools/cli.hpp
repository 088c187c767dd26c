#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "helmkit/bounds.hpp"
#include "helmkit/config.hpp"
#include "helmkit/parallel.hpp"

namespace helmkit::cli {

/// Runs one subcommand. args[0] is the program name. Returns the exit status:
/// 0 success, 1 a check reported failure, 2 bad input, 3 numerical failure,
/// 4 anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Ledger from ledger.file, supplied [ledger] values, and the estimators for
/// whatever is missing. Per-estimator diagnostics go to `diagnostics`.
ConstantsLedger build_ledger(const RunConfig& config, const Executor& exec, nlohmann::ordered_json* diagnostics = nullptr);

}  // namespace helmkit::cli
