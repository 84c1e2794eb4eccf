#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "textfield/field.hpp"
#include "textfield/grid.hpp"

namespace textfield {

/// When a candidate becomes a superpixel root.
enum class RootRule {
  /// Its binned neighbor is outside the domain or the candidate set, or the
  /// neighbor's vector opposes its own (negative dot product). The last case
  /// marks both sides of a symmetry axis whose pixels were not thresholded
  /// away, as happens with exact ground-truth fields.
  kOpposingNeighbor,
  /// Only a neighbor outside the domain or the candidate set ends a chain.
  kCandidateOnly,
};

/// Post-processing parameters.
struct InferenceConfig {
  double lambda_m = 0.5;  ///< magnitude threshold for candidate pixels
  double lambda_r = 0.6;  ///< minimum paired-representative ratio
  int lambda_a = 200;     ///< minimum instance area in pixels
  int k1 = 3;             ///< representative grouping dilation side
  int k2 = 11;            ///< hole-filling closing side
  RootRule root_rule = RootRule::kOpposingNeighbor;

  /// Throws InputError when a parameter is outside its domain.
  void validate() const;
};

enum class Preset { kCtw1500, kTotalText, kIc15, kTd500 };

/// Defaults with the dataset-specific magnitude threshold.
InferenceConfig preset_config(Preset preset);
std::optional<Preset> parse_preset(std::string_view name);
std::string_view preset_name(Preset preset);

/// Direction bins, counter-clockwise from east in the y-down frame.
enum Bin : std::int8_t { kE = 0, kNE, kN, kNW, kW, kSW, kS, kSE };
inline constexpr std::array<Pixel, 8> kBinOffsets = {{
    {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

/// Index of the 45-degree sector containing the vector. A vector exactly on a
/// sector boundary goes to the lower index. Throws on the zero vector.
int bin_direction(float vx, float vy);

/// Candidate text pixels: magnitude >= lambda_m.
BinaryMask threshold_candidates(const DirectionField& field, double lambda_m);

/// A root of the superpixel forest.
struct Representative {
  std::size_t index = 0;
  int bin = 0;
};

struct SuperpixelForest {
  static constexpr std::int32_t kRoot = -1;
  static constexpr std::int32_t kNotCandidate = -2;

  BinaryMask candidates;
  /// Row-major index of the parent pixel, kRoot, or kNotCandidate.
  Grid<std::int32_t> parent;
  /// Superpixel id (1-based) per candidate, 0 elsewhere.
  Grid<std::int32_t> labels;
  /// Direction bin per candidate, -1 elsewhere.
  Grid<std::int8_t> bins;
  /// Roots in scan order.
  std::vector<Representative> representatives;
  std::int32_t superpixel_count = 0;

  int width() const { return candidates.width(); }
  int height() const { return candidates.height(); }
};

/// Each candidate points at its 8-neighbor in the binned direction unless
/// `rule` makes it a root. Remaining cycles (two pixels pointing at each
/// other, or longer loops of noisy fields) are broken by electing the member
/// earliest in scan order as root. Superpixels are labelled by stack-based
/// blob labeling over the parent relation.
SuperpixelForest build_forest(const DirectionField& field,
                              const BinaryMask& candidates,
                              RootRule rule = RootRule::kOpposingNeighbor);

struct RepresentativeGroups {
  /// Connected components of the dilated representative map.
  InstanceMap components;
  std::int32_t count = 0;
  /// Group id of each forest representative, parallel to
  /// SuperpixelForest::representatives.
  std::vector<std::int32_t> group_of;
};

RepresentativeGroups group_representatives(const SuperpixelForest& forest,
                                           int k1);

struct GroupBalance {
  std::array<std::size_t, 8> bin_counts{};
  std::size_t size = 0;
  std::size_t paired = 0;
  bool survives = false;
};

/// Paired-direction census per group (index 0 unused). Opposite bins pair
/// one-to-one; a group survives when paired / size >= lambda_r.
std::vector<GroupBalance> filter_unbalanced(const RepresentativeGroups& groups,
                                            const SuperpixelForest& forest,
                                            double lambda_r);

/// Every stage of one detect() run, for inspection and testing.
struct InferenceTrace {
  SuperpixelForest forest;
  RepresentativeGroups groups;
  std::vector<GroupBalance> balance;
  /// Surviving group id propagated to every pixel of its trees.
  InstanceMap propagated;
  /// Final instances, 1..K in scan order of their first pixel.
  InstanceMap instances;
  std::int32_t instance_count = 0;
};

InferenceTrace run_inference(const DirectionField& field,
                             const InferenceConfig& config);

InstanceMap detect(const DirectionField& field, const InferenceConfig& config);

/// Relabels nonzero labels to 1..K in order of first appearance.
std::int32_t relabel_scan_order(InstanceMap& labels);

}  // namespace textfield
