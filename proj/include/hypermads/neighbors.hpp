#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "hypermads/space.hpp"

namespace hypermads {

// Discrete neighborhood structure over the categorical hyperparameters
// (layer counts, optimizer choice). These moves change the dimension of the
// flat encoding, so the search handles them in a dedicated extended poll
// rather than on the mesh.

enum class NeighborTag { ConvAdd, ConvSub, FcAdd, FcSub, OptimizerCycle };

std::string_view to_string(NeighborTag t);

struct Neighbor {
  NeighborTag tag{};
  Point point;

  bool operator==(const Neighbor&) const = default;
};

// ConvAdd duplicates the rightmost conv group and appends it on the right
// (spec defaults when the block is empty); ConvSub removes the rightmost
// group. Emitted only when the resulting count stays inside the
// NUM_CON_LAYERS bounds.
std::vector<Neighbor> conv_neighbors(const Point& p, const SpaceSpec& spec);

// FcAdd duplicates the leftmost fc size and inserts it on the left (default
// size when the block is empty); FcSub removes the leftmost size. Bounds as
// above, against NUM_FC_LAYERS.
std::vector<Neighbor> fc_neighbors(const Point& p, const SpaceSpec& spec);

// Advances the optimizer choice cyclically within its bounds and resets the
// four optimizer parameters to their default (initial) values. No neighbor
// when the bounds admit a single choice.
std::optional<Neighbor> optimizer_neighbor(const Point& p,
                                           const SpaceSpec& spec);

// Full neighborhood in canonical order: conv (add, sub), fc (add, sub),
// optimizer. Respects bounds only; fixedness is the engine's concern.
std::vector<Neighbor> all_neighbors(const Point& p, const SpaceSpec& spec);

// all_neighbors minus moves whose defining header (NUM_CON_LAYERS,
// NUM_FC_LAYERS, OPTIMIZER_CHOICE) is FIXED. This is the set the search
// actually evaluates, keeping fixed hyperparameters pinned end to end.
std::vector<Neighbor> engine_neighbors(const Point& p, const SpaceSpec& spec);

struct ExtendedPollResult {
  bool improved = false;
  Point point;       // meaningful only when improved
  double value = 0;  // objective of the accepted neighbor
};

// First-improvement walk over engine_neighbors: neighbors are evaluated in
// order and the first one with a strictly smaller objective is accepted
// immediately. `eval` returns nullopt for failed/infeasible evaluations,
// which never improve.
ExtendedPollResult extended_poll(
    const Point& incumbent, double incumbent_value,
    const std::function<std::optional<double>(const Point&)>& eval,
    const SpaceSpec& spec);

}  // namespace hypermads
