#include "hypermads/neighbors.hpp"

#include <cmath>

namespace hypermads {

std::string_view to_string(NeighborTag t) {
  switch (t) {
    case NeighborTag::ConvAdd: return "ConvAdd";
    case NeighborTag::ConvSub: return "ConvSub";
    case NeighborTag::FcAdd: return "FcAdd";
    case NeighborTag::FcSub: return "FcSub";
    case NeighborTag::OptimizerCycle: return "OptimizerCycle";
  }
  return "?";
}

namespace {
int idefault(const SpaceSpec& spec, std::string_view k) {
  return static_cast<int>(std::llround(spec.def(k).default_value));
}
}  // namespace

std::vector<Neighbor> conv_neighbors(const Point& p, const SpaceSpec& spec) {
  std::vector<Neighbor> out;
  const auto& hdr = spec.def(kw::NUM_CON_LAYERS);
  const int n1 = static_cast<int>(p.conv_layers.size());
  if (n1 + 1 <= hdr.upper) {
    Neighbor n{NeighborTag::ConvAdd, p};
    if (p.conv_layers.empty())
      n.point.conv_layers.push_back(
          {idefault(spec, kw::OUTPUT_CHANNELS), idefault(spec, kw::KERNELS),
           idefault(spec, kw::STRIDES), idefault(spec, kw::PADDINGS),
           idefault(spec, kw::DO_POOLS)});
    else
      n.point.conv_layers.push_back(p.conv_layers.back());
    out.push_back(std::move(n));
  }
  if (n1 - 1 >= hdr.lower && n1 > 0) {
    Neighbor n{NeighborTag::ConvSub, p};
    n.point.conv_layers.pop_back();
    out.push_back(std::move(n));
  }
  return out;
}

std::vector<Neighbor> fc_neighbors(const Point& p, const SpaceSpec& spec) {
  std::vector<Neighbor> out;
  const auto& hdr = spec.def(kw::NUM_FC_LAYERS);
  const int n2 = static_cast<int>(p.fc_sizes.size());
  if (n2 + 1 <= hdr.upper) {
    Neighbor n{NeighborTag::FcAdd, p};
    const int size =
        p.fc_sizes.empty() ? idefault(spec, kw::SIZE_FC_LAYER)
                           : p.fc_sizes.front();
    n.point.fc_sizes.insert(n.point.fc_sizes.begin(), size);
    out.push_back(std::move(n));
  }
  if (n2 - 1 >= hdr.lower && n2 > 0) {
    Neighbor n{NeighborTag::FcSub, p};
    n.point.fc_sizes.erase(n.point.fc_sizes.begin());
    out.push_back(std::move(n));
  }
  return out;
}

std::optional<Neighbor> optimizer_neighbor(const Point& p,
                                           const SpaceSpec& spec) {
  const auto& hdr = spec.def(kw::OPTIMIZER_CHOICE);
  const int lb = static_cast<int>(std::llround(hdr.lower));
  const int ub = static_cast<int>(std::llround(hdr.upper));
  if (ub <= lb) return std::nullopt;
  Neighbor n{NeighborTag::OptimizerCycle, p};
  n.point.optimizer_choice = lb + (p.optimizer_choice - lb + 1) % (ub - lb + 1);
  n.point.optimizer_params = {spec.def(kw::OPT_PARAM_1).default_value,
                              spec.def(kw::OPT_PARAM_2).default_value,
                              spec.def(kw::OPT_PARAM_3).default_value,
                              spec.def(kw::OPT_PARAM_4).default_value};
  return n;
}

std::vector<Neighbor> all_neighbors(const Point& p, const SpaceSpec& spec) {
  std::vector<Neighbor> out = conv_neighbors(p, spec);
  for (auto& n : fc_neighbors(p, spec)) out.push_back(std::move(n));
  if (auto n = optimizer_neighbor(p, spec)) out.push_back(std::move(*n));
  return out;
}

std::vector<Neighbor> engine_neighbors(const Point& p, const SpaceSpec& spec) {
  std::vector<Neighbor> out;
  if (!spec.def(kw::NUM_CON_LAYERS).fixed)
    for (auto& n : conv_neighbors(p, spec)) out.push_back(std::move(n));
  if (!spec.def(kw::NUM_FC_LAYERS).fixed)
    for (auto& n : fc_neighbors(p, spec)) out.push_back(std::move(n));
  if (!spec.def(kw::OPTIMIZER_CHOICE).fixed)
    if (auto n = optimizer_neighbor(p, spec)) out.push_back(std::move(*n));
  return out;
}

ExtendedPollResult extended_poll(
    const Point& incumbent, double incumbent_value,
    const std::function<std::optional<double>(const Point&)>& eval,
    const SpaceSpec& spec) {
  ExtendedPollResult r;
  for (const auto& n : engine_neighbors(incumbent, spec)) {
    const auto v = eval(n.point);
    if (v && *v < incumbent_value) {
      r.improved = true;
      r.point = n.point;
      r.value = *v;
      return r;
    }
  }
  return r;
}

}  // namespace hypermads
