#pragma once

#include <exception>
#include <optional>
#include <string>

#include "pmsval/json_io.hpp"

namespace pmsval {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kExtendedGroupLabel = "model of vbar_E Kbar(X)";

struct CommandOptions {
    std::optional<std::size_t> tail_window;
    std::optional<io::json> probes;    ///< array of elements; overrides the problem's probes
    std::optional<std::size_t> rank;   ///< for "leaves"
    bool want_dot = false;             ///< render the decision tree into CommandResult::dot
};

struct CommandResult {
    io::json report;
    int exit_code = 0;
    std::optional<std::string> dot;
};

/// classify | ve | rank | sup | oracle-check | probe | leaves.
/// Library errors propagate; use error_report to map them.
CommandResult run_command(const std::string& command, const io::json& problem, const CommandOptions& options = {});

/// Machine-readable diagnostics and the exit code (2 schema, 3 invariant,
/// 4 indeterminate, 1 otherwise).
CommandResult error_report(const std::exception& e);

}  // namespace pmsval
