#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rmtedge {

// Note emitted when (n, p) falls outside the regime covered by the proof of
// the second-order result (p odd or n = p); the approximation is still used.
std::optional<std::string> warn_theory_gap(int n, int p);

// Runs one command-line request. Reports go to `out` (or the --out file),
// warnings and diagnostics to `err`. Returns the exit status: 0 success,
// 2 usage error, 3 numeric failure.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rmtedge
