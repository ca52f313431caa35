#pragma once

#include <functional>
#include <string>

#include "hypermads/dataset.hpp"
#include "hypermads/engine.hpp"
#include "hypermads/space.hpp"
#include "hypermads/trainer.hpp"

namespace hypermads {

// Evaluators over structured hyperparameter points. All of them decode the
// flat vector and run the architecture gate first: structurally infeasible
// conv chains come back Infeasible without touching the underlying
// objective.
class PointEvaluator : public Evaluator {
 public:
  explicit PointEvaluator(SpaceSpec spec) : spec_(std::move(spec)) {}

  EvalResult evaluate(const FlatPoint& x) final;

 protected:
  virtual EvalResult evaluate_point(const Point& p) = 0;
  const SpaceSpec& spec() const { return spec_; }

 private:
  SpaceSpec spec_;
};

// Cheap analytic objectives used for engine validation.
//  - Sphere: sum of (x_i - mid_i)^2 over the variable (non-fixed,
//    non-header) coordinates, mid_i the midpoint of the bounds. Minimum 0
//    when every free coordinate sits at its midpoint.
//  - Quadratic: Sphere plus a per-optimizer-choice offset
//    {1: 0.8, 2: 0.4, 3: 0.05, 4: 0.9}, making the categorical choice part
//    of the optimum.
enum class AnalyticKind { Sphere, Quadratic };

double analytic_choice_offset(int optimizer_choice);

class AnalyticEvaluator final : public PointEvaluator {
 public:
  AnalyticEvaluator(AnalyticKind kind, SpaceSpec spec)
      : PointEvaluator(std::move(spec)), kind_(kind) {}
  bool reentrant() const override { return true; }

 protected:
  EvalResult evaluate_point(const Point& p) override;

 private:
  AnalyticKind kind_;
};

// Trains the toy CNN and reports 100 - test accuracy (so lower is better
// and 0 means a perfect classifier). Optionally writes one per-evaluation
// CSV of the epoch log (epoch, train accuracy, validation accuracy,
// learning rate) into csv_dir as epochs_<index>.csv.
class ToyTrainerEvaluator final : public PointEvaluator {
 public:
  ToyTrainerEvaluator(SpaceSpec spec, ToyDataset data, std::uint64_t seed,
                      std::string csv_dir = "");

 protected:
  EvalResult evaluate_point(const Point& p) override;

 private:
  ToyDataset data_;
  std::uint64_t seed_;
  std::string csv_dir_;
  int counter_ = 0;
};

// Delegates to an external executable. The flat encoding is written as one
// line of space-separated decimals to a fresh temp file; the command is run
// with that path appended as its final argument; the first whitespace token
// of its stdout is the objective. Nonzero exit, unparseable output or a
// timeout yield EvalFailed.
struct ExternalOptions {
  std::string command;
  double timeout_seconds = 86400;
};

class ExternalEvaluator final : public PointEvaluator {
 public:
  ExternalEvaluator(SpaceSpec spec, ExternalOptions options)
      : PointEvaluator(std::move(spec)), options_(std::move(options)) {}

 protected:
  EvalResult evaluate_point(const Point& p) override;

 private:
  ExternalOptions options_;
};

// Wraps an arbitrary callable (used by the language bindings). Exceptions
// and non-finite results become EvalFailed.
class CallbackEvaluator final : public Evaluator {
 public:
  using Fn = std::function<double(const FlatPoint&)>;
  explicit CallbackEvaluator(Fn fn) : fn_(std::move(fn)) {}
  EvalResult evaluate(const FlatPoint& x) override;

 private:
  Fn fn_;
};

// Runs `command path` and returns its stdout, exit status and timeout flag.
// Exposed for the protocol tests.
struct SubprocessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string stdout_text;
};
SubprocessResult run_subprocess(const std::string& command,
                                const std::string& arg,
                                double timeout_seconds);

}  // namespace hypermads
