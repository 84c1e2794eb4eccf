#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "textfield/geometry.hpp"
#include "textfield/grid.hpp"

namespace textfield {

struct EvalReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double iou_threshold = 0.5;
};

/// Precision, recall and f-measure from raw counts; every 0/0 is 0.
EvalReport make_report(std::size_t tp, std::size_t fp, std::size_t fn,
                       double iou_threshold);

struct Match {
  std::int32_t detection = 0;  ///< label in the detection map
  std::int32_t truth = 0;      ///< 1-based ground-truth instance
  double iou = 0.0;
};

/// Greedy one-to-one matching on IOU > threshold, highest IOU first; ties go
/// to the lower detection id, then the lower ground-truth id.
std::vector<Match> match_instances(const InstanceMap& detections,
                                   const InstanceMap& truth,
                                   double iou_threshold);

/// Scores label maps against label maps. Detection and truth labels need not
/// be contiguous; every distinct nonzero label is one instance.
EvalReport match_and_score(const InstanceMap& detections,
                           const InstanceMap& truth, double iou_threshold);

/// Rasterizes the ground truth and scores against it.
EvalReport match_and_score(const InstanceMap& detections,
                           const PolygonScene& truth, double iou_threshold);

/// Sums counts over images and recomputes the ratios.
EvalReport accumulate(const std::vector<EvalReport>& reports,
                      double iou_threshold);

}  // namespace textfield
