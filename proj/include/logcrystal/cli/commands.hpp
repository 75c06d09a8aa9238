#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "logcrystal/cli/config.hpp"

namespace logcrystal::cli {

using Cell = std::variant<double, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json footer = nlohmann::json::object();
};

// What a command produced: the main table plus optional companion tables
// written next to it as <path>.<suffix>.csv.
struct CommandOutput {
    Table main;
    std::vector<std::pair<std::string, Table>> companions;
    std::vector<std::string> warnings;
};

// All take a config already passed through resolve().
CommandOutput cmd_spectrum(const RunConfig& config);
CommandOutput cmd_dynamics(const RunConfig& config);
CommandOutput cmd_landscape(const RunConfig& config);
CommandOutput cmd_husimi(const RunConfig& config);
CommandOutput cmd_hom(const RunConfig& config);

CommandOutput run(Command command, const RunConfig& resolved);

// '#'-prefixed header with version, command and resolved config; numbers
// with 17 significant digits.
void write_csv(std::ostream& os, Command command, const RunConfig& config, const Table& table);
void write_json(std::ostream& os, Command command, const RunConfig& config, const Table& table);

// Resolves, runs and writes. Returns the process exit code: 0 success,
// 2 configuration error, 3 resource bound exceeded.
int execute(Command command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace logcrystal::cli
