#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hypermads/engine.hpp"
#include "hypermads/evaluator.hpp"
#include "hypermads/paramfile.hpp"

namespace hypermads {

// Search-space adapter: presents the structured hyperparameter space to the
// flat-vector engine. Neighbors respect FIXED headers.
class SpaceProblem : public Problem {
 public:
  SpaceProblem(SpaceSpec spec, Point start)
      : spec_(std::move(spec)), start_(std::move(start)) {}

  FlatPoint initial_point() const override;
  std::vector<CoordInfo> layout_of(const FlatPoint& x) const override;
  std::vector<FlatPoint> neighbors(const FlatPoint& x) const override;

 private:
  SpaceSpec spec_;
  Point start_;
};

// Evaluator selection by dataset token: SPHERE/QUADRATIC -> analytic,
// CUSTOM -> external command, anything else -> toy trainer on the named
// dataset. csv_dir (trainer only) receives one epochs_<i>.csv per
// evaluation; pass "" to disable.
std::unique_ptr<Evaluator> make_evaluator(const RunConfig& config,
                                          const std::string& csv_dir);

// Streams history.txt / stats.txt, appending and flushing after every
// evaluation so an interrupted run still leaves usable files.
// history.txt: every evaluation, flat encoding then the objective.
// stats.txt: the first evaluation, then every strict improvement.
class OutputWriter {
 public:
  explicit OutputWriter(const std::string& dir);  // truncates existing files
  ~OutputWriter();
  void on_evaluation(const EvalRecord& rec, double best_so_far);

 private:
  std::unique_ptr<std::ofstream> history_, stats_;
  bool first_ = true;
  double best_;
};

// Re-create history.txt / stats.txt from a finished run (byte-identical to
// what the live writer produces).
void write_output_files(const std::vector<EvalRecord>& records,
                        const std::string& dir);

// Neighbor listing for the -n surface: the raw categorical neighborhood of
// the configured initial point, one "<Tag> : <flat encoding>" line each, in
// canonical order, ignoring fixedness.
std::string format_neighbors(const RunConfig& config);

struct DriverResult {
  RunResult run;
  int exit_code = 0;
};

// Full run: builds the evaluator and problem, streams output files into
// config.output_dir, logs progress lines to `log`. Log output carries no
// timing, so reruns are reproducible byte for byte.
DriverResult run_config(const RunConfig& config, std::ostream& log);

}  // namespace hypermads
