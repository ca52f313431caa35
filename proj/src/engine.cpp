#include "hypermads/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>

namespace hypermads {

std::optional<EvalRecord> Cache::lookup(const FlatPoint& x) const {
  std::shared_lock lock(mu_);
  auto it = map_.find(x);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void Cache::insert(const EvalRecord& r) {
  std::unique_lock lock(mu_);
  map_.emplace(r.point, r);
}

std::size_t Cache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

// ---------------------------------------------------------------------------

namespace {

double derive_delta(double Delta) { return std::min(Delta, Delta * Delta); }

double initial_Delta(const CoordInfo& c) {
  double D = (c.upper - c.lower) / 10.0;
  if (c.kind != HpKind::Real) D = std::max(D, 1.0);
  return std::max(D, 0.0);
}

}  // namespace

MeshState initial_mesh(const std::vector<CoordInfo>& coords) {
  MeshState m;
  for (const auto& c : coords) {
    if (c.header) continue;
    const double D = initial_Delta(c);
    m.keys.push_back(c.key);
    m.Delta.push_back(D);
    m.cap.push_back(D);
    m.delta.push_back(derive_delta(D));
  }
  return m;
}

void mesh_success(MeshState& m) {
  for (std::size_t i = 0; i < m.Delta.size(); ++i) {
    m.Delta[i] = std::min(m.cap[i], 2.0 * m.Delta[i]);
    m.delta[i] = derive_delta(m.Delta[i]);
  }
}

void mesh_failure(MeshState& m) {
  for (std::size_t i = 0; i < m.Delta.size(); ++i) {
    m.Delta[i] *= 0.5;
    m.delta[i] = derive_delta(m.Delta[i]);
  }
}

double mesh_max_Delta(const MeshState& m) {
  double mx = 0;
  for (double d : m.Delta) mx = std::max(mx, d);
  return mx;
}

MeshState transfer_mesh(const MeshState& old,
                        const std::vector<CoordInfo>& coords) {
  MeshState m;
  for (const auto& c : coords) {
    if (c.header) continue;
    m.keys.push_back(c.key);
    bool carried = false;
    for (std::size_t i = 0; i < old.keys.size(); ++i) {
      if (old.keys[i] == c.key) {
        m.Delta.push_back(old.Delta[i]);
        m.cap.push_back(old.cap[i]);
        m.delta.push_back(old.delta[i]);
        carried = true;
        break;
      }
    }
    if (!carried) {
      const double D = initial_Delta(c);
      m.Delta.push_back(D);
      m.cap.push_back(D);
      m.delta.push_back(derive_delta(D));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> poll_directions(std::size_t n, Rng& rng) {
  std::vector<std::vector<double>> dirs;
  if (n == 0) return dirs;
  // random unit vector
  std::vector<double> v(n);
  double norm = 0;
  do {
    norm = 0;
    for (auto& vi : v) {
      vi = rng.normal();
      norm += vi * vi;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  for (auto& vi : v) vi /= norm;

  dirs.reserve(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i)
      h[i] = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j];
    dirs.push_back(std::move(h));
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = -dirs[j][i];
    dirs.push_back(std::move(h));
  }
  return dirs;
}

namespace {

double snap_coordinate(double x, double step_cells, double delta, double Delta,
                       const CoordInfo& c) {
  double val = x;
  if (delta > 0) {
    const double max_cells = std::floor(Delta / delta);
    double cells = std::nearbyint(step_cells);
    cells = std::clamp(cells, -max_cells, max_cells);
    val = x + cells * delta;
  }
  if (c.kind != HpKind::Real) val = static_cast<double>(std::llround(val));
  val = std::clamp(val, c.lower, c.upper);
  if (val == 0.0) val = 0.0;  // normalize -0
  return val;
}

}  // namespace

std::vector<FlatPoint> poll_candidates(const FlatPoint& x,
                                       const std::vector<CoordInfo>& coords,
                                       const MeshState& mesh, Rng& rng) {
  // mesh position of each flat coordinate (-1 for headers)
  std::vector<int> mesh_pos(coords.size(), -1);
  std::vector<std::size_t> free_flat;  // flat indices that may move
  {
    int mp = 0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i].header) continue;
      mesh_pos[i] = mp++;
      if (!coords[i].fixed &&
          mesh.Delta[static_cast<std::size_t>(mesh_pos[i])] > 0)
        free_flat.push_back(i);
    }
  }

  std::vector<FlatPoint> out;
  const auto dirs = poll_directions(free_flat.size(), rng);
  for (const auto& d : dirs) {
    FlatPoint c = x;
    for (std::size_t j = 0; j < free_flat.size(); ++j) {
      const std::size_t i = free_flat[j];
      const auto m = static_cast<std::size_t>(mesh_pos[i]);
      c[i] = snap_coordinate(x[i], mesh.Delta[m] * d[j] / mesh.delta[m],
                             mesh.delta[m], mesh.Delta[m], coords[i]);
    }
    if (c == x) continue;
    if (std::find(out.begin(), out.end(), c) != out.end()) continue;
    out.push_back(std::move(c));
  }
  return out;
}

std::optional<FlatPoint> search_candidate(const FlatPoint& x,
                                          const std::vector<double>& dir,
                                          const std::vector<CoordInfo>& coords,
                                          const MeshState& mesh) {
  if (dir.size() != x.size()) return std::nullopt;
  FlatPoint c = x;
  int mp = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].header) continue;
    const auto m = static_cast<std::size_t>(mp++);
    if (coords[i].fixed || mesh.delta[m] <= 0) continue;
    // 2x the last successful step, snapped to the current mesh (no frame
    // clamp: the speculative step deliberately leaves the poll frame).
    const double cells = std::nearbyint(2.0 * dir[i] / mesh.delta[m]);
    double val = x[i] + cells * mesh.delta[m];
    if (coords[i].kind != HpKind::Real)
      val = static_cast<double>(std::llround(val));
    val = std::clamp(val, coords[i].lower, coords[i].upper);
    if (val == 0.0) val = 0.0;
    c[i] = val;
  }
  if (c == x) return std::nullopt;
  return c;
}

// ---------------------------------------------------------------------------

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Budget: return "budget";
    case StopReason::MeshCollapse: return "mesh";
    case StopReason::InitialEvalFailed: return "initial-eval-failed";
  }
  return "?";
}

namespace {

class Runner {
 public:
  Runner(Problem& problem, Evaluator& evaluator, const RunOptions& opt,
         Cache* cache)
      : problem_(problem),
        evaluator_(evaluator),
        opt_(opt),
        cache_(cache),
        rng_(opt.seed) {
    if (!cache_) {
      owned_cache_ = std::make_unique<Cache>();
      cache_ = owned_cache_.get();
    }
  }

  RunResult run() {
    incumbent_ = problem_.initial_point();
    coords_ = problem_.layout_of(incumbent_);
    mesh_ = initial_mesh(coords_);

    std::optional<EvalRecord> first = cache_->lookup(incumbent_);
    if (!first) first = evaluate(incumbent_);
    if (!first) {  // budget 0
      result_.best_point = incumbent_;
      result_.stop_reason = StopReason::Budget;
      return finish();
    }
    if (first->status == EvalStatus::EvalFailed) {
      result_.best_point = incumbent_;
      result_.stop_reason = StopReason::InitialEvalFailed;
      return finish();
    }
    if (first->status == EvalStatus::Infeasible)
      result_.initial_infeasible = true;
    best_ = first->objective;
    result_.best_point = incumbent_;

    while (!budget_exhausted() && mesh_max_Delta(mesh_) >= opt_.min_poll_size) {
      ++result_.iterations;
      bool improved = step_search();
      if (!improved && !budget_exhausted()) improved = step_poll();
      bool switched = false;
      if (!improved && !budget_exhausted()) {
        auto r = step_extended_poll();
        improved = r.first;
        switched = r.second;
      }
      if (budget_exhausted() && !improved) break;
      if (improved) {
        if (switched) mesh_ = transfer_mesh(mesh_, coords_);
        mesh_success(mesh_);
      } else {
        mesh_failure(mesh_);
      }
    }
    result_.stop_reason = budget_exhausted() ? StopReason::Budget
                                             : StopReason::MeshCollapse;
    return finish();
  }

 private:
  bool budget_exhausted() const {
    return result_.evaluations >= opt_.max_evaluations;
  }

  RunResult finish() {
    result_.best_objective = best_;
    return std::move(result_);
  }

  // One counted evaluator call. nullopt when the budget is already spent.
  std::optional<EvalRecord> evaluate(const FlatPoint& x) {
    if (budget_exhausted()) return std::nullopt;
    const auto t0 = std::chrono::steady_clock::now();
    const EvalResult er = evaluator_.evaluate(x);
    const auto t1 = std::chrono::steady_clock::now();
    EvalRecord rec;
    rec.point = x;
    rec.status = er.status;
    rec.objective = er.status == EvalStatus::Ok
                        ? er.objective
                        : std::numeric_limits<double>::infinity();
    rec.index = ++result_.evaluations;
    rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    cache_->insert(rec);
    result_.history.push_back(rec);
    const double candidate_best = std::min(best_, rec.objective);
    if (opt_.on_evaluation) opt_.on_evaluation(rec, candidate_best);
    return rec;
  }

  // Evaluate a candidate unless cached; accept it if strictly better.
  // Returns true on acceptance.
  bool try_candidate(const FlatPoint& c) {
    if (cache_->lookup(c)) return false;  // never better than best_
    const auto rec = evaluate(c);
    if (!rec) return false;
    if (rec->objective < best_) {
      last_dir_.assign(c.size(), 0.0);
      for (std::size_t i = 0; i < c.size(); ++i)
        last_dir_[i] = c[i] - incumbent_[i];
      incumbent_ = c;
      best_ = rec->objective;
      result_.best_point = c;
      return true;
    }
    return false;
  }

  bool step_search() {
    if (last_dir_.size() != incumbent_.size()) return false;
    const auto c = search_candidate(incumbent_, last_dir_, coords_, mesh_);
    if (!c || *c == incumbent_) return false;
    return try_candidate(*c);
  }

  bool step_poll() {
    const auto candidates = poll_candidates(incumbent_, coords_, mesh_, rng_);
    for (const auto& c : candidates) {
      if (budget_exhausted()) return false;
      if (try_candidate(c)) return true;  // opportunistic
    }
    return false;
  }

  // Returns {improved, switched_space}.
  std::pair<bool, bool> step_extended_poll() {
    const auto nbs = problem_.neighbors(incumbent_);
    for (const auto& nb : nbs) {
      if (budget_exhausted()) return {false, false};
      if (cache_->lookup(nb)) continue;
      const auto rec = evaluate(nb);
      if (!rec) return {false, false};
      if (rec->objective < best_) {  // first improvement
        incumbent_ = nb;
        best_ = rec->objective;
        result_.best_point = nb;
        coords_ = problem_.layout_of(nb);
        last_dir_.clear();  // direction is meaningless across spaces
        // Always transfer the mesh; it is the identity when no coordinate
        // keys changed (e.g. an optimizer cycle).
        return {true, true};
      }
    }
    return {false, false};
  }

  Problem& problem_;
  Evaluator& evaluator_;
  const RunOptions& opt_;
  Cache* cache_;
  std::unique_ptr<Cache> owned_cache_;
  Rng rng_;

  FlatPoint incumbent_;
  std::vector<CoordInfo> coords_;
  MeshState mesh_;
  std::vector<double> last_dir_;
  double best_ = std::numeric_limits<double>::infinity();
  RunResult result_;
};

}  // namespace

RunResult run_mads(Problem& problem, Evaluator& evaluator,
                   const RunOptions& options, Cache* cache) {
  Runner r(problem, evaluator, options, cache);
  return r.run();
}

}  // namespace hypermads
