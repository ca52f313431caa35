#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hypermads {

// The hyperparameter space of a convolutional network: a variable number of
// convolutional layer groups, a variable number of fully-connected layers,
// and a handful of scalar training hyperparameters. Layer counts and the
// optimizer choice are categorical (they change the dimension / meaning of
// the rest of the point); everything else is integer, boolean or real.

enum class HpKind { Categorical, Integer, Real, Boolean };

struct HyperparameterDef {
  std::string keyword;
  HpKind kind = HpKind::Real;
  double default_value = 0;
  double lower = 0;
  double upper = 0;
  bool fixed = false;

  bool operator==(const HyperparameterDef&) const = default;
};

// One convolutional layer group: output channels, square kernel size,
// stride, zero padding, and whether a 2x2 max-pool follows.
struct ConvLayerGroup {
  int out_channels = 0;
  int kernel = 0;
  int stride = 0;
  int padding = 0;
  int do_pool = 0;  // 0 or 1

  bool operator==(const ConvLayerGroup&) const = default;
};

struct Point {
  std::vector<ConvLayerGroup> conv_layers;
  std::vector<int> fc_sizes;  // left to right
  int batch_size = 0;
  int optimizer_choice = 0;  // 1=SGD 2=Adam 3=Adagrad 4=RMSProp
  std::array<double, 4> optimizer_params{};
  double dropout_rate = 0;
  int activation = 0;  // 1=ReLU 2=Sigmoid 3=Tanh

  bool operator==(const Point&) const = default;
};

// Canonical keyword strings, in canonical (encode) order.
namespace kw {
inline constexpr std::string_view NUM_CON_LAYERS = "NUM_CON_LAYERS";
inline constexpr std::string_view OUTPUT_CHANNELS = "OUTPUT_CHANNELS";
inline constexpr std::string_view KERNELS = "KERNELS";
inline constexpr std::string_view STRIDES = "STRIDES";
inline constexpr std::string_view PADDINGS = "PADDINGS";
inline constexpr std::string_view DO_POOLS = "DO_POOLS";
inline constexpr std::string_view NUM_FC_LAYERS = "NUM_FC_LAYERS";
inline constexpr std::string_view SIZE_FC_LAYER = "SIZE_FC_LAYER";
inline constexpr std::string_view BATCH_SIZE = "BATCH_SIZE";
inline constexpr std::string_view OPTIMIZER_CHOICE = "OPTIMIZER_CHOICE";
inline constexpr std::string_view OPT_PARAM_1 = "OPT_PARAM_1";
inline constexpr std::string_view OPT_PARAM_2 = "OPT_PARAM_2";
inline constexpr std::string_view OPT_PARAM_3 = "OPT_PARAM_3";
inline constexpr std::string_view OPT_PARAM_4 = "OPT_PARAM_4";
inline constexpr std::string_view DROPOUT_RATE = "DROPOUT_RATE";
inline constexpr std::string_view ACTIVATION_FUNCTION = "ACTIVATION_FUNCTION";
}  // namespace kw

// Definitions of all hyperparameters (bounds, defaults, fixedness) plus the
// input geometry the architecture gate checks against.
struct SpaceSpec {
  std::vector<HyperparameterDef> defs;  // canonical order, all 16 keywords
  int input_image_size = 8;             // square input side
  int input_channels = 1;

  static SpaceSpec defaults();

  const HyperparameterDef& def(std::string_view keyword) const;  // throws
  HyperparameterDef* find(std::string_view keyword);             // nullptr
  const HyperparameterDef* find(std::string_view keyword) const;

  bool operator==(const SpaceSpec&) const = default;
};

// Flat dimension of a point with n1 conv groups and n2 fc layers:
// 5*n1 + n2 + 10.
std::size_t dimension(std::size_t n1, std::size_t n2);
std::size_t dimension(const Point& p);

Point default_point(const SpaceSpec& spec);

// Flat encoding, in order: conv header, conv groups left-to-right
// (out_channels, kernel, stride, padding, do_pool each), fc header, fc sizes
// left-to-right, batch size, optimizer header, 4 optimizer params, dropout
// rate, activation.
std::vector<double> encode(const Point& p);

// Inverse of encode. Throws std::invalid_argument on structural violations:
// empty input, non-integral or negative layer counts, length mismatch.
// Non-integral values in integer slots are rounded to nearest; use
// validate(flat, spec) to detect them.
Point decode(const std::vector<double>& flat);

struct ValidationIssue {
  std::string keyword;
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

// Bound violations and FIXED violations (coordinate differs from the pinned
// default of a fixed def). Empty result means valid.
std::vector<ValidationIssue> validate(const Point& p, const SpaceSpec& spec);
// Same checks on a raw flat vector, plus integrality violations for
// integer/boolean/categorical slots. Throws only if the vector is not
// structurally decodable.
std::vector<ValidationIssue> validate(const std::vector<double>& flat,
                                      const SpaceSpec& spec);

// floor((in + 2p - k) / s) + 1
int conv_output_size(int in, int kernel, int stride, int padding);

struct FeasibilityReport {
  bool feasible = true;
  // Per conv layer: the conv output size, then (only when that layer pools)
  // the pooled size. Stops at the first violation.
  std::vector<int> sizes;
};

// A convolution chain is infeasible when a kernel exceeds its padded input
// or any intermediate size reaches zero.
FeasibilityReport architecture_feasible(const Point& p, int input_size);
FeasibilityReport architecture_feasible(const Point& p,
                                        const SpaceSpec& spec);

// Per-coordinate description of the flat encoding of a point. `key` is a
// stable identity used to carry per-coordinate state (mesh sizes) across
// dimension changes: fc layers are keyed from the right so that inserting
// or removing the leftmost layer leaves surviving keys unchanged, and conv
// groups are keyed from the left for the symmetric reason.
struct CoordInfo {
  HpKind kind = HpKind::Real;
  double lower = 0;
  double upper = 0;
  bool fixed = false;
  bool header = false;  // layer-count / optimizer-choice coordinate
  std::uint64_t key = 0;
  std::string keyword;
};

std::vector<CoordInfo> layout(const Point& p, const SpaceSpec& spec);

}  // namespace hypermads
