#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "textfield/inference.hpp"
#include "textfield/synth.hpp"

namespace textfield {

/// Outcome of rasterize -> generate_field -> [perturb] -> detect on one
/// synthetic scene, matched against the scene at IOU > 0.5.
struct RoundTripCase {
  std::uint64_t seed = 0;
  std::size_t truth_count = 0;
  std::size_t detected_count = 0;
  std::vector<double> matched_iou;

  bool count_exact() const { return truth_count == detected_count; }
  double mean_iou() const;
};

struct RoundTripSummary {
  std::vector<RoundTripCase> cases;
  std::size_t exact_cases = 0;
  /// Mean over every matched instance of every case.
  double mean_matched_iou = 0.0;
};

/// The scene for case k uses seed base.seed + k.
RoundTripCase run_roundtrip_case(const SynthSpec& spec,
                                 const InferenceConfig& config,
                                 const std::optional<NoiseModel>& noise);

RoundTripSummary run_roundtrip(const SynthSpec& base, std::size_t cases,
                               const InferenceConfig& config,
                               const std::optional<NoiseModel>& noise);

}  // namespace textfield
