#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypermads/space.hpp"

namespace hypermads {

// Run configuration parsed from a parameter file. Hyperparameter lines use
// positional fields
//
//   KEYWORD  INITIAL  LB  UB  FIXED/VAR
//
// where trailing fields are optional and "-" keeps the default for a slot.
// "#" starts a comment. Configuration keywords: DATASET (mandatory),
// MAX_BB_EVAL (mandatory, >= 1), NUMBER_OF_CLASSES (only with DATASET
// CUSTOM), REMAINING_HPS (FIXED pins every keyword not mentioned in the
// file; default VAR). Extensions: SEED, OUTPUT_DIR, EXTERNAL_COMMAND,
// EVAL_TIMEOUT, INPUT_SIZE (the last three only with DATASET CUSTOM).
struct RunConfig {
  std::string dataset;        // as written (e.g. MNIST, CIFAR10, CUSTOM)
  int number_of_classes = 0;  // resolved for built-ins, user-set for CUSTOM
  int max_bb_eval = 0;
  SpaceSpec space;  // bounds, initial values (as defaults) and fixedness
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  std::string external_command;          // CUSTOM only
  double eval_timeout_seconds = 86400;   // CUSTOM only

  bool operator==(const RunConfig&) const = default;
};

struct ParseError {
  int line = 0;  // 0 for file-level problems
  std::string message;

  bool operator==(const ParseError&) const = default;
};

// All problems in a file are reported, not just the first.
struct ParseResult {
  std::optional<RunConfig> config;  // set iff errors is empty
  std::vector<ParseError> errors;
};

ParseResult parse_params(std::istream& in);
ParseResult parse_params_text(const std::string& text);
ParseResult parse_params_file(const std::string& path);

// Starting point: layer counts and per-layer values replicated from the
// initial values in the config.
Point initial_point(const RunConfig& config);

// Canonical text form; parse(serialize(c)) reproduces c exactly.
std::string serialize(const RunConfig& config);

}  // namespace hypermads
