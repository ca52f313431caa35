#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "hypermads/rng.hpp"
#include "hypermads/space.hpp"

namespace hypermads {

// Mesh adaptive direct search over a flat vector of mixed
// (integer/boolean/real) coordinates, with an extended poll for categorical
// moves that change the dimension. The engine is generic: it sees points as
// flat vectors plus a per-point coordinate layout supplied by a Problem.

using FlatPoint = std::vector<double>;

enum class EvalStatus { Ok, Infeasible, EvalFailed };

struct EvalResult {
  EvalStatus status = EvalStatus::EvalFailed;
  double objective = std::numeric_limits<double>::infinity();
};

// A blackbox objective over flat encodings. Minimized.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual EvalResult evaluate(const FlatPoint& x) = 0;
  // True when evaluate() may be called from several threads at once.
  virtual bool reentrant() const { return false; }
};

struct EvalRecord {
  FlatPoint point;
  double objective = std::numeric_limits<double>::infinity();
  EvalStatus status = EvalStatus::EvalFailed;
  int index = 0;           // 1-based evaluation counter
  double wall_seconds = 0; // excluded from file outputs and determinism
};

// Evaluation cache: a point is never sent to the evaluator twice.
// Concurrent reads, exclusive writes.
class Cache {
 public:
  std::optional<EvalRecord> lookup(const FlatPoint& x) const;
  void insert(const EvalRecord& r);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::map<FlatPoint, EvalRecord> map_;
};

// ---------------------------------------------------------------------------
// Mesh

// Per-coordinate mesh sizes over the non-header coordinates of the current
// layout (fixed coordinates included; they simply never move). delta is the
// mesh granularity, Delta the poll frame radius, cap the initial Delta which
// Delta never exceeds.
struct MeshState {
  std::vector<std::uint64_t> keys;
  std::vector<double> delta;
  std::vector<double> Delta;
  std::vector<double> cap;
};

// Delta starts at (upper-lower)/10, raised to at least 1 for
// integer/boolean coordinates; delta = min(Delta, Delta^2). Degenerate
// bounds (upper == lower) give a zero-size entry that never moves.
MeshState initial_mesh(const std::vector<CoordInfo>& coords);

// Success: Delta <- min(cap, 2*Delta). Failure: Delta <- Delta/2.
// Both re-derive delta = min(Delta, Delta^2), so delta <= Delta always.
void mesh_success(MeshState& m);
void mesh_failure(MeshState& m);

double mesh_max_Delta(const MeshState& m);

// Carry mesh state across a categorical space switch: coordinates whose key
// survives keep their sizes, new coordinates start from initial values.
MeshState transfer_mesh(const MeshState& old,
                        const std::vector<CoordInfo>& coords);

// ---------------------------------------------------------------------------
// Directions and candidates

// 2n directions: the columns h_j of the Householder transform
// H = I - 2 v v^T of a random unit vector v, followed by their negations.
// Each column has unit norm and the set spans R^n positively.
std::vector<std::vector<double>> poll_directions(std::size_t n, Rng& rng);

// Poll candidates around x: each direction is scaled per coordinate by
// Delta, snapped to the mesh (a multiple of delta, at most
// floor(Delta/delta) cells so the step stays within the frame), rounded for
// integer/boolean coordinates, and clipped to the bounds. Candidates equal
// to x and duplicates are dropped. Only free (non-header, non-fixed)
// coordinates move.
std::vector<FlatPoint> poll_candidates(const FlatPoint& x,
                                       const std::vector<CoordInfo>& coords,
                                       const MeshState& mesh, Rng& rng);

// Speculative search point: x + 2*dir snapped to the current mesh and
// clipped, where dir is the last successful step in the same space.
// Returns nullopt when the snapped point coincides with x.
std::optional<FlatPoint> search_candidate(const FlatPoint& x,
                                          const std::vector<double>& dir,
                                          const std::vector<CoordInfo>& coords,
                                          const MeshState& mesh);

// ---------------------------------------------------------------------------
// Problem + runner

// Structured view of the space being searched. layout_of must agree with
// the flat encodings produced by initial_point / neighbors.
class Problem {
 public:
  virtual ~Problem() = default;
  virtual FlatPoint initial_point() const = 0;
  virtual std::vector<CoordInfo> layout_of(const FlatPoint& x) const = 0;
  // Categorical neighbors of x, in canonical order. Default: none.
  virtual std::vector<FlatPoint> neighbors(const FlatPoint&) const {
    return {};
  }
};

enum class StopReason { Budget, MeshCollapse, InitialEvalFailed };

std::string_view to_string(StopReason r);

struct RunOptions {
  int max_evaluations = 100;  // hard budget, hit exactly unless mesh stops
  std::uint64_t seed = 0;
  double min_poll_size = 1e-6;  // stop when max Delta drops below this
  // Called after every evaluation with the record and the best objective
  // so far (after processing this record).
  std::function<void(const EvalRecord&, double)> on_evaluation;
};

struct RunResult {
  FlatPoint best_point;
  double best_objective = std::numeric_limits<double>::infinity();
  std::vector<EvalRecord> history;  // evaluation order; one entry per call
  int evaluations = 0;
  StopReason stop_reason = StopReason::Budget;
  bool initial_infeasible = false;
  int iterations = 0;
};

// Run the search. The cache is optional; when supplied it may carry state
// from previous runs and will be extended in place.
RunResult run_mads(Problem& problem, Evaluator& evaluator,
                   const RunOptions& options, Cache* cache = nullptr);

}  // namespace hypermads
