#include "hypermads/paramfile.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "hypermads/dataset.hpp"
#include "hypermads/numformat.hpp"

namespace hypermads {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct Slot {
  bool set = false;
  int line = 0;
};

struct Parser {
  SpaceSpec space = SpaceSpec::defaults();
  std::vector<ParseError> errors;
  std::set<std::string> mentioned;

  std::string dataset;
  Slot dataset_slot;
  long number_of_classes = 0;
  Slot classes_slot;
  long max_bb_eval = 0;
  Slot max_eval_slot;
  bool remaining_fixed = false;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  Slot output_dir_slot;
  std::string external_command;
  Slot external_slot;
  double eval_timeout = 86400;
  Slot timeout_slot;
  long input_size = 0;
  Slot input_size_slot;

  void fail(int line, std::string msg) {
    errors.push_back({line, std::move(msg)});
  }

  // Integer-valued config argument; returns nullopt after reporting.
  std::optional<double> numeric_arg(int line, const std::string& keyword,
                                    const std::vector<std::string>& toks,
                                    bool integral) {
    if (toks.size() != 2) {
      fail(line, keyword + " expects exactly one value");
      return std::nullopt;
    }
    const auto v = parse_number(toks[1]);
    if (!v || !std::isfinite(*v)) {
      fail(line, keyword + ": bad number '" + toks[1] + "'");
      return std::nullopt;
    }
    if (integral && std::floor(*v) != *v) {
      fail(line, keyword + ": value must be an integer, got " + toks[1]);
      return std::nullopt;
    }
    return v;
  }

  void hp_line(int line, HyperparameterDef& d,
               const std::vector<std::string>& toks) {
    mentioned.insert(d.keyword);
    if (toks.size() < 2) {
      fail(line, d.keyword + ": expected an initial value");
      return;
    }
    if (toks.size() > 5) {
      fail(line, d.keyword + ": too many fields (expected at most "
                 "INITIAL LB UB FIXED/VAR)");
      return;
    }

    double init = d.default_value, lb = d.lower, ub = d.upper;
    bool fixed = false;  // mentioned keywords default to VAR
    bool ok = true;
    const char* names[3] = {"INITIAL", "LB", "UB"};
    double* dests[3] = {&init, &lb, &ub};
    for (std::size_t f = 0; f < 3 && f + 1 < toks.size(); ++f) {
      const std::string& tok = toks[f + 1];
      if (tok == "-") continue;
      const auto v = parse_number(tok);
      if (!v || !std::isfinite(*v)) {
        fail(line, d.keyword + ": bad number '" + tok + "' for " + names[f]);
        ok = false;
        continue;
      }
      if (d.kind != HpKind::Real && std::floor(*v) != *v) {
        fail(line, d.keyword + ": " + names[f] + " must be an integer, got " +
                       tok);
        ok = false;
        continue;
      }
      *dests[f] = *v;
    }
    if (toks.size() == 5 && toks[4] != "-") {
      const std::string flag = upper(toks[4]);
      if (flag == "FIXED")
        fixed = true;
      else if (flag == "VAR")
        fixed = false;
      else {
        fail(line, d.keyword + ": expected FIXED or VAR, got '" + toks[4] +
                       "'");
        ok = false;
      }
    }
    if (!ok) return;
    if (lb > ub) {
      fail(line, d.keyword + ": lower bound " + format_number(lb) +
                     " exceeds upper bound " + format_number(ub));
      return;
    }
    if (!fixed && (init < lb || init > ub)) {
      fail(line, d.keyword + ": initial value " + format_number(init) +
                     " outside bounds [" + format_number(lb) + "; " +
                     format_number(ub) + "]");
      return;
    }
    d.default_value = init;
    d.lower = lb;
    d.upper = ub;
    d.fixed = fixed;
  }

  void line(int no, const std::string& raw) {
    std::string text = raw;
    if (const auto hash = text.find('#'); hash != std::string::npos)
      text.resize(hash);
    const auto toks = tokenize(text);
    if (toks.empty()) return;
    const std::string key = upper(toks[0]);

    if (key == "DATASET") {
      if (toks.size() != 2) {
        fail(no, "DATASET expects exactly one value");
        return;
      }
      dataset = toks[1];
      dataset_slot = {true, no};
    } else if (key == "NUMBER_OF_CLASSES") {
      if (const auto v = numeric_arg(no, key, toks, true)) {
        if (*v < 2) {
          fail(no, "NUMBER_OF_CLASSES must be at least 2");
          return;
        }
        number_of_classes = static_cast<long>(*v);
        classes_slot = {true, no};
      }
    } else if (key == "MAX_BB_EVAL") {
      if (const auto v = numeric_arg(no, key, toks, true)) {
        if (*v < 1) {
          fail(no, "MAX_BB_EVAL must be at least 1");
          return;
        }
        max_bb_eval = static_cast<long>(*v);
        max_eval_slot = {true, no};
      }
    } else if (key == "REMAINING_HPS") {
      if (toks.size() != 2) {
        fail(no, "REMAINING_HPS expects FIXED or VAR");
        return;
      }
      const std::string flag = upper(toks[1]);
      if (flag == "FIXED")
        remaining_fixed = true;
      else if (flag == "VAR")
        remaining_fixed = false;
      else
        fail(no, "REMAINING_HPS expects FIXED or VAR, got '" + toks[1] + "'");
    } else if (key == "SEED") {
      if (const auto v = numeric_arg(no, key, toks, true)) {
        if (*v < 0) {
          fail(no, "SEED must be non-negative");
          return;
        }
        seed = static_cast<std::uint64_t>(*v);
      }
    } else if (key == "OUTPUT_DIR") {
      if (toks.size() != 2) {
        fail(no, "OUTPUT_DIR expects exactly one path (no spaces)");
        return;
      }
      output_dir = toks[1];
      output_dir_slot = {true, no};
    } else if (key == "EXTERNAL_COMMAND") {
      const auto pos = text.find(toks[0]);
      external_command = trim(text.substr(pos + toks[0].size()));
      if (external_command.empty()) {
        fail(no, "EXTERNAL_COMMAND expects a command");
        return;
      }
      external_slot = {true, no};
    } else if (key == "EVAL_TIMEOUT") {
      if (const auto v = numeric_arg(no, key, toks, false)) {
        if (*v <= 0) {
          fail(no, "EVAL_TIMEOUT must be positive");
          return;
        }
        eval_timeout = *v;
        timeout_slot = {true, no};
      }
    } else if (key == "INPUT_SIZE") {
      if (const auto v = numeric_arg(no, key, toks, true)) {
        if (*v < 1) {
          fail(no, "INPUT_SIZE must be at least 1");
          return;
        }
        input_size = static_cast<long>(*v);
        input_size_slot = {true, no};
      }
    } else if (auto* d = space.find(key)) {
      hp_line(no, *d, toks);
    } else {
      fail(no, "unknown keyword '" + toks[0] + "'");
    }
  }

  ParseResult assemble() {
    if (!dataset_slot.set) fail(0, "DATASET is mandatory");
    if (!max_eval_slot.set) fail(0, "MAX_BB_EVAL is mandatory");

    const std::string ds = upper(dataset);
    const bool custom = ds == "CUSTOM";
    const bool analytic = ds == "SPHERE" || ds == "QUADRATIC";
    const auto info = dataset_info(ds);

    int classes = 0;
    int side = 8;
    if (dataset_slot.set) {
      if (custom) {
        if (!classes_slot.set)
          fail(0, "DATASET CUSTOM requires NUMBER_OF_CLASSES");
        else
          classes = static_cast<int>(number_of_classes);
        if (!external_slot.set)
          fail(0, "DATASET CUSTOM requires EXTERNAL_COMMAND");
        side = input_size_slot.set ? static_cast<int>(input_size) : 28;
      } else if (analytic) {
        classes = 0;
      } else if (info) {
        classes = info->num_classes;
        side = info->image_side;
      } else {
        fail(dataset_slot.line, "unknown dataset '" + dataset + "'");
      }
      if (!custom) {
        if (classes_slot.set)
          fail(classes_slot.line,
               "NUMBER_OF_CLASSES only applies to DATASET CUSTOM");
        if (external_slot.set)
          fail(external_slot.line,
               "EXTERNAL_COMMAND only applies to DATASET CUSTOM");
        if (timeout_slot.set)
          fail(timeout_slot.line,
               "EVAL_TIMEOUT only applies to DATASET CUSTOM");
        if (input_size_slot.set)
          fail(input_size_slot.line,
               "INPUT_SIZE only applies to DATASET CUSTOM");
      }
    }

    if (remaining_fixed)
      for (auto& d : space.defs)
        if (!mentioned.count(d.keyword)) d.fixed = true;

    ParseResult result;
    result.errors = std::move(errors);
    if (!result.errors.empty()) return result;

    RunConfig cfg;
    cfg.dataset = dataset;
    cfg.number_of_classes = classes;
    cfg.max_bb_eval = static_cast<int>(max_bb_eval);
    cfg.space = std::move(space);
    cfg.space.input_image_size = side;
    cfg.space.input_channels = 1;
    cfg.seed = seed;
    cfg.output_dir = output_dir;
    cfg.external_command = external_command;
    cfg.eval_timeout_seconds = eval_timeout;
    result.config = std::move(cfg);
    return result;
  }
};

}  // namespace

ParseResult parse_params(std::istream& in) {
  Parser p;
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) p.line(++no, raw);
  return p.assemble();
}

ParseResult parse_params_text(const std::string& text) {
  std::istringstream in(text);
  return parse_params(in);
}

ParseResult parse_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.errors.push_back({0, "cannot open parameter file '" + path + "'"});
    return r;
  }
  return parse_params(in);
}

Point initial_point(const RunConfig& config) {
  return default_point(config.space);
}

std::string serialize(const RunConfig& config) {
  std::ostringstream out;
  out << "DATASET " << config.dataset << "\n";
  const bool custom = upper(config.dataset) == "CUSTOM";
  if (custom) {
    out << "NUMBER_OF_CLASSES " << config.number_of_classes << "\n";
    out << "INPUT_SIZE " << config.space.input_image_size << "\n";
    if (!config.external_command.empty())
      out << "EXTERNAL_COMMAND " << config.external_command << "\n";
    if (config.eval_timeout_seconds != 86400)
      out << "EVAL_TIMEOUT " << format_number(config.eval_timeout_seconds)
          << "\n";
  }
  out << "MAX_BB_EVAL " << config.max_bb_eval << "\n";
  if (config.seed != 0) out << "SEED " << config.seed << "\n";
  if (config.output_dir != ".") out << "OUTPUT_DIR " << config.output_dir
                                    << "\n";
  for (const auto& d : config.space.defs)
    out << d.keyword << " " << format_number(d.default_value) << " "
        << format_number(d.lower) << " " << format_number(d.upper) << " "
        << (d.fixed ? "FIXED" : "VAR") << "\n";
  return out.str();
}

}  // namespace hypermads
