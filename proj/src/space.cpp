#include "hypermads/space.hpp"

#include <cmath>
#include <stdexcept>

#include "hypermads/numformat.hpp"

namespace hypermads {

SpaceSpec SpaceSpec::defaults() {
  SpaceSpec s;
  using K = HpKind;
  s.defs = {
      {std::string(kw::NUM_CON_LAYERS), K::Categorical, 2, 0, 100, false},
      {std::string(kw::OUTPUT_CHANNELS), K::Integer, 6, 1, 100, false},
      {std::string(kw::KERNELS), K::Integer, 5, 1, 20, false},
      {std::string(kw::STRIDES), K::Integer, 1, 1, 3, false},
      {std::string(kw::PADDINGS), K::Integer, 0, 0, 2, false},
      {std::string(kw::DO_POOLS), K::Boolean, 0, 0, 1, false},
      {std::string(kw::NUM_FC_LAYERS), K::Categorical, 2, 0, 500, false},
      {std::string(kw::SIZE_FC_LAYER), K::Integer, 128, 1, 1000, false},
      {std::string(kw::BATCH_SIZE), K::Integer, 128, 1, 400, false},
      {std::string(kw::OPTIMIZER_CHOICE), K::Categorical, 3, 1, 4, false},
      {std::string(kw::OPT_PARAM_1), K::Real, 0.1, 0, 1, false},
      {std::string(kw::OPT_PARAM_2), K::Real, 0.9, 0, 1, false},
      {std::string(kw::OPT_PARAM_3), K::Real, 0.005, 0, 1, false},
      {std::string(kw::OPT_PARAM_4), K::Real, 0, 0, 1, false},
      {std::string(kw::DROPOUT_RATE), K::Real, 0.5, 0, 0.95, false},
      {std::string(kw::ACTIVATION_FUNCTION), K::Integer, 1, 1, 3, false},
  };
  return s;
}

const HyperparameterDef& SpaceSpec::def(std::string_view keyword) const {
  if (const auto* d = find(keyword)) return *d;
  throw std::invalid_argument("unknown hyperparameter keyword: " +
                              std::string(keyword));
}

HyperparameterDef* SpaceSpec::find(std::string_view keyword) {
  for (auto& d : defs)
    if (d.keyword == keyword) return &d;
  return nullptr;
}

const HyperparameterDef* SpaceSpec::find(std::string_view keyword) const {
  for (const auto& d : defs)
    if (d.keyword == keyword) return &d;
  return nullptr;
}

std::size_t dimension(std::size_t n1, std::size_t n2) {
  return 5 * n1 + n2 + 10;
}

std::size_t dimension(const Point& p) {
  return dimension(p.conv_layers.size(), p.fc_sizes.size());
}

Point default_point(const SpaceSpec& spec) {
  Point p;
  const auto dv = [&](std::string_view k) { return spec.def(k).default_value; };
  const auto di = [&](std::string_view k) {
    return static_cast<int>(std::llround(dv(k)));
  };
  const int n1 = di(kw::NUM_CON_LAYERS);
  const int n2 = di(kw::NUM_FC_LAYERS);
  p.conv_layers.assign(
      static_cast<std::size_t>(n1),
      ConvLayerGroup{di(kw::OUTPUT_CHANNELS), di(kw::KERNELS), di(kw::STRIDES),
                     di(kw::PADDINGS), di(kw::DO_POOLS)});
  p.fc_sizes.assign(static_cast<std::size_t>(n2), di(kw::SIZE_FC_LAYER));
  p.batch_size = di(kw::BATCH_SIZE);
  p.optimizer_choice = di(kw::OPTIMIZER_CHOICE);
  p.optimizer_params = {dv(kw::OPT_PARAM_1), dv(kw::OPT_PARAM_2),
                        dv(kw::OPT_PARAM_3), dv(kw::OPT_PARAM_4)};
  p.dropout_rate = dv(kw::DROPOUT_RATE);
  p.activation = di(kw::ACTIVATION_FUNCTION);
  return p;
}

std::vector<double> encode(const Point& p) {
  std::vector<double> v;
  v.reserve(dimension(p));
  v.push_back(static_cast<double>(p.conv_layers.size()));
  for (const auto& g : p.conv_layers) {
    v.push_back(g.out_channels);
    v.push_back(g.kernel);
    v.push_back(g.stride);
    v.push_back(g.padding);
    v.push_back(g.do_pool);
  }
  v.push_back(static_cast<double>(p.fc_sizes.size()));
  for (int s : p.fc_sizes) v.push_back(s);
  v.push_back(p.batch_size);
  v.push_back(p.optimizer_choice);
  for (double q : p.optimizer_params) v.push_back(q);
  v.push_back(p.dropout_rate);
  v.push_back(p.activation);
  return v;
}

namespace {

int header_value(const std::vector<double>& flat, std::size_t idx,
                 const char* what) {
  const double v = flat[idx];
  if (!(std::floor(v) == v) || v < 0 || v > 1e9)
    throw std::invalid_argument(std::string("flat vector: ") + what +
                                " must be a non-negative integer, got " +
                                format_number(v));
  return static_cast<int>(v);
}

int as_int(double v) { return static_cast<int>(std::llround(v)); }

}  // namespace

Point decode(const std::vector<double>& flat) {
  if (flat.empty())
    throw std::invalid_argument("flat vector: empty");
  const int n1 = header_value(flat, 0, "conv layer count");
  const std::size_t fc_header = 1 + 5 * static_cast<std::size_t>(n1);
  if (flat.size() <= fc_header)
    throw std::invalid_argument(
        "flat vector: too short for " + std::to_string(n1) +
        " conv layer groups (length " + std::to_string(flat.size()) + ")");
  const int n2 = header_value(flat, fc_header, "fc layer count");
  const std::size_t want = dimension(static_cast<std::size_t>(n1),
                                     static_cast<std::size_t>(n2));
  if (flat.size() != want)
    throw std::invalid_argument(
        "flat vector: expected length " + std::to_string(want) + " for (" +
        std::to_string(n1) + ", " + std::to_string(n2) + ") layers, got " +
        std::to_string(flat.size()));

  Point p;
  std::size_t i = 1;
  p.conv_layers.reserve(static_cast<std::size_t>(n1));
  for (int g = 0; g < n1; ++g) {
    ConvLayerGroup cg;
    cg.out_channels = as_int(flat[i++]);
    cg.kernel = as_int(flat[i++]);
    cg.stride = as_int(flat[i++]);
    cg.padding = as_int(flat[i++]);
    cg.do_pool = as_int(flat[i++]);
    p.conv_layers.push_back(cg);
  }
  ++i;  // fc header
  p.fc_sizes.reserve(static_cast<std::size_t>(n2));
  for (int j = 0; j < n2; ++j) p.fc_sizes.push_back(as_int(flat[i++]));
  p.batch_size = as_int(flat[i++]);
  p.optimizer_choice = as_int(flat[i++]);
  for (int k = 0; k < 4; ++k) p.optimizer_params[k] = flat[i++];
  p.dropout_rate = flat[i++];
  p.activation = as_int(flat[i++]);
  return p;
}

namespace {

void check_bounds(std::vector<ValidationIssue>& out,
                  const HyperparameterDef& d, double v) {
  if (d.fixed) {
    // bounds have no influence on a fixed hyperparameter
    if (v != d.default_value)
      out.push_back({d.keyword, "fixed at " + format_number(d.default_value) +
                                    " but value is " + format_number(v)});
    return;
  }
  if (v < d.lower || v > d.upper)
    out.push_back({d.keyword, "value " + format_number(v) +
                                  " outside bounds [" +
                                  format_number(d.lower) + "; " +
                                  format_number(d.upper) + "]"});
}

void check_integral(std::vector<ValidationIssue>& out,
                    const HyperparameterDef& d, double v) {
  if (d.kind != HpKind::Real && std::floor(v) != v)
    out.push_back({d.keyword,
                   "value " + format_number(v) + " must be an integer"});
}

}  // namespace

std::vector<ValidationIssue> validate(const Point& p, const SpaceSpec& spec) {
  std::vector<ValidationIssue> out;
  const auto chk = [&](std::string_view k, double v) {
    check_bounds(out, spec.def(k), v);
  };
  chk(kw::NUM_CON_LAYERS, static_cast<double>(p.conv_layers.size()));
  for (const auto& g : p.conv_layers) {
    chk(kw::OUTPUT_CHANNELS, g.out_channels);
    chk(kw::KERNELS, g.kernel);
    chk(kw::STRIDES, g.stride);
    chk(kw::PADDINGS, g.padding);
    chk(kw::DO_POOLS, g.do_pool);
  }
  chk(kw::NUM_FC_LAYERS, static_cast<double>(p.fc_sizes.size()));
  for (int s : p.fc_sizes) chk(kw::SIZE_FC_LAYER, s);
  chk(kw::BATCH_SIZE, p.batch_size);
  chk(kw::OPTIMIZER_CHOICE, p.optimizer_choice);
  chk(kw::OPT_PARAM_1, p.optimizer_params[0]);
  chk(kw::OPT_PARAM_2, p.optimizer_params[1]);
  chk(kw::OPT_PARAM_3, p.optimizer_params[2]);
  chk(kw::OPT_PARAM_4, p.optimizer_params[3]);
  chk(kw::DROPOUT_RATE, p.dropout_rate);
  chk(kw::ACTIVATION_FUNCTION, p.activation);
  return out;
}

std::vector<ValidationIssue> validate(const std::vector<double>& flat,
                                      const SpaceSpec& spec) {
  const Point p = decode(flat);  // throws on structural problems
  std::vector<ValidationIssue> out;
  const auto coords = layout(p, spec);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto& d = spec.def(coords[i].keyword);
    check_integral(out, d, flat[i]);
    check_bounds(out, d, flat[i]);
  }
  return out;
}

int conv_output_size(int in, int kernel, int stride, int padding) {
  const int padded = in + 2 * padding;
  if (kernel > padded || stride < 1) return 0;
  return (padded - kernel) / stride + 1;
}

FeasibilityReport architecture_feasible(const Point& p, int input_size) {
  FeasibilityReport r;
  int size = input_size;
  for (const auto& g : p.conv_layers) {
    const int out = conv_output_size(size, g.kernel, g.stride, g.padding);
    if (out <= 0) {
      r.feasible = false;
      return r;
    }
    r.sizes.push_back(out);
    size = out;
    if (g.do_pool) {
      size = out / 2;
      if (size <= 0) {
        r.feasible = false;
        return r;
      }
      r.sizes.push_back(size);
    }
  }
  return r;
}

FeasibilityReport architecture_feasible(const Point& p,
                                        const SpaceSpec& spec) {
  return architecture_feasible(p, spec.input_image_size);
}

namespace {

constexpr std::uint64_t kConvKey = 1ull << 56;
constexpr std::uint64_t kFcKey = 2ull << 56;
constexpr std::uint64_t kBatchKey = 3ull << 56;
constexpr std::uint64_t kOptKey = 4ull << 56;
constexpr std::uint64_t kDropoutKey = 5ull << 56;
constexpr std::uint64_t kActivationKey = 6ull << 56;
constexpr std::uint64_t kHeaderKey = 7ull << 56;

CoordInfo coord_for(const SpaceSpec& spec, std::string_view keyword,
                    bool header, std::uint64_t key) {
  const auto& d = spec.def(keyword);
  CoordInfo c;
  c.kind = d.kind;
  c.lower = d.lower;
  c.upper = d.upper;
  c.fixed = d.fixed;
  c.header = header;
  c.key = key;
  c.keyword = d.keyword;
  return c;
}

}  // namespace

std::vector<CoordInfo> layout(const Point& p, const SpaceSpec& spec) {
  std::vector<CoordInfo> out;
  out.reserve(dimension(p));
  out.push_back(coord_for(spec, kw::NUM_CON_LAYERS, true, kHeaderKey | 0));
  const std::string_view conv_fields[5] = {kw::OUTPUT_CHANNELS, kw::KERNELS,
                                           kw::STRIDES, kw::PADDINGS,
                                           kw::DO_POOLS};
  for (std::size_t g = 0; g < p.conv_layers.size(); ++g)
    for (std::uint64_t f = 0; f < 5; ++f)
      out.push_back(coord_for(spec, conv_fields[f], false,
                              kConvKey | (static_cast<std::uint64_t>(g) << 8) |
                                  f));
  out.push_back(coord_for(spec, kw::NUM_FC_LAYERS, true, kHeaderKey | 1));
  const std::size_t n2 = p.fc_sizes.size();
  for (std::size_t j = 0; j < n2; ++j)
    // keyed by distance from the right edge
    out.push_back(coord_for(spec, kw::SIZE_FC_LAYER, false,
                            kFcKey | static_cast<std::uint64_t>(n2 - 1 - j)));
  out.push_back(coord_for(spec, kw::BATCH_SIZE, false, kBatchKey));
  out.push_back(coord_for(spec, kw::OPTIMIZER_CHOICE, true, kHeaderKey | 2));
  const std::string_view opt_params[4] = {kw::OPT_PARAM_1, kw::OPT_PARAM_2,
                                          kw::OPT_PARAM_3, kw::OPT_PARAM_4};
  for (std::uint64_t k = 0; k < 4; ++k)
    out.push_back(coord_for(spec, opt_params[k], false, kOptKey | k));
  out.push_back(coord_for(spec, kw::DROPOUT_RATE, false, kDropoutKey));
  out.push_back(
      coord_for(spec, kw::ACTIVATION_FUNCTION, false, kActivationKey));
  return out;
}

}  // namespace hypermads
