#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ulef/group.hpp"

namespace ulef {

struct RunConfig {
  std::string command;
  std::vector<std::filesystem::path> inputs;
  std::optional<int> radius;
  std::optional<long long> capacity;
  std::optional<int> subdivide;
  std::optional<int> grid;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> out;
  bool plots = false;
  bool corrupt_orientation = false;  // selftest only
};

struct CommandOutput {
  int exit_code = 0;
  json report;
  std::map<std::string, std::string> plots;  // file name -> SVG
};

CommandOutput cmd_validate(const json& doc, const RunConfig& cfg);
CommandOutput cmd_map_analyze(const json& doc, const RunConfig& cfg);
CommandOutput cmd_field_analyze(const json& doc, const RunConfig& cfg);
/// {"group": spec} or a bare group spec.
CommandOutput cmd_amenability(const json& doc, const RunConfig& cfg);
/// {"group": spec, "constant": c, "finite": [[word, value], ...]}
CommandOutput cmd_decide_class(const json& doc, const RunConfig& cfg);
CommandOutput cmd_selftest(const RunConfig& cfg);

/// Reads the input, runs the command, writes report.json (and plots) under
/// --out or prints the report. Errors go to `err` as JSON; the return value
/// is the exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace ulef
