#include <iostream>
#include <string>

#include "hypermads/driver.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

void print_usage(std::ostream& out) {
  out << "Run           : hypermads parameters_file\n"
         "Info          : hypermads -i\n"
         "Help          : hypermads -h\n"
         "Version       : hypermads -v\n"
         "Usage         : hypermads -u\n"
         "Neighbors     : hypermads -n parameters_file\n";
}

void print_info(std::ostream& out) {
  out << "--------------------------------------------------\n"
         "  hypermads - version "
      << kVersion
      << "\n"
         "  hyperparameter search for convolutional networks\n"
         "--------------------------------------------------\n\n";
  print_usage(out);
}

void print_help(std::ostream& out) {
  out << "hypermads runs a mesh adaptive direct search over the\n"
         "hyperparameters of a convolutional network: architecture (conv\n"
         "layer groups, fully-connected sizes), training (batch size,\n"
         "optimizer and its parameters, dropout, activation).\n"
         "\n"
         "The parameter file lists one keyword per line:\n"
         "\n"
         "  KEYWORD  INITIAL  LB  UB  FIXED/VAR\n"
         "\n"
         "Trailing fields are optional; '-' keeps a default. '#' starts a\n"
         "comment. Mandatory: DATASET, MAX_BB_EVAL. Optional: the 16\n"
         "hyperparameter keywords (NUM_CON_LAYERS, OUTPUT_CHANNELS,\n"
         "KERNELS, STRIDES, PADDINGS, DO_POOLS, NUM_FC_LAYERS,\n"
         "SIZE_FC_LAYER, BATCH_SIZE, OPTIMIZER_CHOICE, OPT_PARAM_1..4,\n"
         "DROPOUT_RATE, ACTIVATION_FUNCTION), plus REMAINING_HPS FIXED|VAR\n"
         "(default VAR) to pin every keyword not mentioned in the file.\n"
         "Extensions: SEED, OUTPUT_DIR, and for DATASET CUSTOM:\n"
         "NUMBER_OF_CLASSES, EXTERNAL_COMMAND, EVAL_TIMEOUT, INPUT_SIZE.\n"
         "\n"
         "Datasets: MNIST/TOYMNIST, FASHION-MNIST, EMNIST, KMNIST,\n"
         "CIFAR10, CIFAR100, STL10 (all desk-scale 8x8 stand-ins),\n"
         "SPHERE/QUADRATIC analytic test objectives, or CUSTOM with an\n"
         "EXTERNAL_COMMAND blackbox.\n"
         "\n"
         "Outputs in OUTPUT_DIR: history.txt (every evaluation), stats.txt\n"
         "(improvements only), epochs_<i>.csv (per-evaluation training\n"
         "curves for the built-in trainer).\n";
}

int parse_or_exit(const std::string& path, hypermads::RunConfig& out) {
  const auto parsed = hypermads::parse_params_file(path);
  if (!parsed.errors.empty()) {
    for (const auto& e : parsed.errors) {
      std::cerr << path << ":";
      if (e.line > 0) std::cerr << e.line << ":";
      std::cerr << " " << e.message << "\n";
    }
    return 2;
  }
  out = *parsed.config;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage(std::cerr);
    return 2;
  }
  const std::string arg = argv[1];

  if (arg == "-v") {
    std::cout << "hypermads version " << kVersion << "\n";
    return 0;
  }
  if (arg == "-i") {
    print_info(std::cout);
    return 0;
  }
  if (arg == "-u") {
    print_usage(std::cout);
    return 0;
  }
  if (arg == "-h") {
    print_help(std::cout);
    return 0;
  }
  if (arg == "-n") {
    if (argc != 3) {
      std::cerr << "usage: hypermads -n parameters_file\n";
      return 2;
    }
    hypermads::RunConfig config;
    if (const int rc = parse_or_exit(argv[2], config)) return rc;
    std::cout << hypermads::format_neighbors(config);
    return 0;
  }
  if (!arg.empty() && arg[0] == '-') {
    std::cerr << "unknown option '" << arg << "'\n";
    print_usage(std::cerr);
    return 2;
  }
  if (argc != 2) {
    print_usage(std::cerr);
    return 2;
  }

  hypermads::RunConfig config;
  if (const int rc = parse_or_exit(arg, config)) return rc;
  const auto result = hypermads::run_config(config, std::cout);
  return result.exit_code;
}
