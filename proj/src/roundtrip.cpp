#include "textfield/roundtrip.hpp"

#include <numeric>

#include "textfield/eval.hpp"
#include "textfield/geometry.hpp"
#include "textfield/parallel.hpp"

namespace textfield {

double RoundTripCase::mean_iou() const {
  if (matched_iou.empty()) return 0.0;
  return std::accumulate(matched_iou.begin(), matched_iou.end(), 0.0) /
         static_cast<double>(matched_iou.size());
}

RoundTripCase run_roundtrip_case(const SynthSpec& spec,
                                 const InferenceConfig& config,
                                 const std::optional<NoiseModel>& noise) {
  const PolygonScene scene = generate_scene(spec);
  const Rasterization raster = rasterize(scene);
  DirectionField field = generate_field(raster.labels);
  if (noise) {
    NoiseModel seeded = *noise;
    seeded.seed = noise->seed ^ (spec.seed * 0x9e3779b97f4a7c15ULL);
    field = perturb_field(field, seeded);
  }
  const InferenceTrace trace = run_inference(field, config);

  RoundTripCase out;
  out.seed = spec.seed;
  out.truth_count = scene.instances().size() - raster.degenerate.size();
  out.detected_count = static_cast<std::size_t>(trace.instance_count);
  for (const auto& m : match_instances(trace.instances, raster.labels, 0.5)) {
    out.matched_iou.push_back(m.iou);
  }
  return out;
}

RoundTripSummary run_roundtrip(const SynthSpec& base, std::size_t cases,
                               const InferenceConfig& config,
                               const std::optional<NoiseModel>& noise) {
  RoundTripSummary summary;
  summary.cases.resize(cases);
  parallel_for(cases, [&](std::size_t k) {
    SynthSpec spec = base;
    spec.seed = base.seed + k;
    summary.cases[k] = run_roundtrip_case(spec, config, noise);
  });
  double iou_sum = 0.0;
  std::size_t matched = 0;
  for (const auto& c : summary.cases) {
    summary.exact_cases += c.count_exact();
    for (const double v : c.matched_iou) iou_sum += v;
    matched += c.matched_iou.size();
  }
  summary.mean_matched_iou = matched ? iou_sum / static_cast<double>(matched) : 0.0;
  return summary;
}

}  // namespace textfield
