#include "hypermads/driver.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hypermads/dataset.hpp"
#include "hypermads/neighbors.hpp"
#include "hypermads/numformat.hpp"

namespace hypermads {

namespace {
std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}
}  // namespace

FlatPoint SpaceProblem::initial_point() const { return encode(start_); }

std::vector<CoordInfo> SpaceProblem::layout_of(const FlatPoint& x) const {
  return layout(decode(x), spec_);
}

std::vector<FlatPoint> SpaceProblem::neighbors(const FlatPoint& x) const {
  std::vector<FlatPoint> out;
  for (const auto& n : engine_neighbors(decode(x), spec_))
    out.push_back(encode(n.point));
  return out;
}

std::unique_ptr<Evaluator> make_evaluator(const RunConfig& config,
                                          const std::string& csv_dir) {
  const std::string ds = upper(config.dataset);
  if (ds == "SPHERE")
    return std::make_unique<AnalyticEvaluator>(AnalyticKind::Sphere,
                                               config.space);
  if (ds == "QUADRATIC")
    return std::make_unique<AnalyticEvaluator>(AnalyticKind::Quadratic,
                                               config.space);
  if (ds == "CUSTOM") {
    ExternalOptions opt;
    opt.command = config.external_command;
    opt.timeout_seconds = config.eval_timeout_seconds;
    return std::make_unique<ExternalEvaluator>(config.space, std::move(opt));
  }
  const auto info = dataset_info(ds);
  if (!info)
    throw std::invalid_argument("unknown dataset '" + config.dataset + "'");
  return std::make_unique<ToyTrainerEvaluator>(
      config.space, make_named_dataset(*info, config.seed), config.seed,
      csv_dir);
}

// ---------------------------------------------------------------------------

OutputWriter::OutputWriter(const std::string& dir)
    : best_(std::numeric_limits<double>::infinity()) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  history_ = std::make_unique<std::ofstream>(fs::path(dir) / "history.txt",
                                             std::ios::trunc);
  stats_ = std::make_unique<std::ofstream>(fs::path(dir) / "stats.txt",
                                           std::ios::trunc);
  *history_ << "# one line per evaluation: flat point encoding, then the "
               "objective (100 - test accuracy; lower is better; inf = "
               "failed or infeasible)\n";
  *stats_ << "# improvement trace: the first evaluation, then every "
             "evaluation that strictly improved the objective\n";
}

OutputWriter::~OutputWriter() = default;

void OutputWriter::on_evaluation(const EvalRecord& rec, double) {
  const std::string line =
      format_flat(rec.point) + " " + format_number(rec.objective) + "\n";
  *history_ << line;
  history_->flush();
  if (first_ || rec.objective < best_) {
    *stats_ << line;
    stats_->flush();
    best_ = std::min(best_, rec.objective);
    first_ = false;
  }
}

void write_output_files(const std::vector<EvalRecord>& records,
                        const std::string& dir) {
  OutputWriter w(dir);
  for (const auto& r : records) w.on_evaluation(r, 0);
}

// ---------------------------------------------------------------------------

std::string format_neighbors(const RunConfig& config) {
  const Point start = initial_point(config);
  std::string out;
  for (const auto& n : all_neighbors(start, config.space)) {
    out += std::string(to_string(n.tag));
    out += " : ";
    out += format_flat(encode(n.point));
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

DriverResult run_config(const RunConfig& config, std::ostream& log) {
  DriverResult result;

  const Point start = initial_point(config);
  const auto issues = validate(start, config.space);
  if (!issues.empty()) {
    for (const auto& i : issues)
      log << "error: initial point: " << i.keyword << ": " << i.message
          << "\n";
    result.exit_code = 2;
    return result;
  }

  std::unique_ptr<Evaluator> evaluator;
  try {
    evaluator = make_evaluator(config, config.output_dir);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    result.exit_code = 2;
    return result;
  }

  SpaceProblem problem(config.space, start);
  OutputWriter writer(config.output_dir);

  RunOptions options;
  options.max_evaluations = config.max_bb_eval;
  options.seed = config.seed;
  options.on_evaluation = [&](const EvalRecord& rec, double best) {
    writer.on_evaluation(rec, best);
    log << "eval " << rec.index << "/" << config.max_bb_eval << "  objective "
        << format_number(rec.objective) << "  best " << format_number(best)
        << "\n";
  };

  Cache cache;
  result.run = run_mads(problem, *evaluator, options, &cache);

  if (result.run.initial_infeasible)
    log << "warning: initial point is architecture-infeasible for input "
           "side "
        << config.space.input_image_size << "; continuing\n";
  if (result.run.stop_reason == StopReason::InitialEvalFailed) {
    log << "error: evaluation of the initial point failed; aborting\n";
    result.exit_code = 1;
    return result;
  }

  log << "stopped: "
      << (result.run.stop_reason == StopReason::Budget
              ? "evaluation budget reached"
              : "poll size below threshold")
      << "\n";
  log << "evaluations: " << result.run.evaluations << "\n";
  log << "best objective: " << format_number(result.run.best_objective)
      << "\n";
  log << "best point: " << format_flat(result.run.best_point) << "\n";
  return result;
}

}  // namespace hypermads
