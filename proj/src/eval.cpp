#include "textfield/eval.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace textfield {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::map<std::int32_t, std::size_t> areas(const InstanceMap& labels) {
  std::map<std::int32_t, std::size_t> out;
  for (const auto l : labels.values()) {
    if (l < 0) throw InputError("negative instance label");
    if (l != 0) ++out[l];
  }
  return out;
}

}  // namespace

EvalReport make_report(std::size_t tp, std::size_t fp, std::size_t fn,
                       double iou_threshold) {
  EvalReport r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.iou_threshold = iou_threshold;
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  const double sum = r.precision + r.recall;
  r.f_measure = sum > 0.0 ? 2.0 * r.precision * r.recall / sum : 0.0;
  return r;
}

std::vector<Match> match_instances(const InstanceMap& detections,
                                   const InstanceMap& truth,
                                   double iou_threshold) {
  require_same_shape(detections, truth, "match_and_score");
  const auto det_area = areas(detections);
  const auto gt_area = areas(truth);

  std::map<std::pair<std::int32_t, std::int32_t>, std::size_t> overlap;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i] != 0 && truth[i] != 0) {
      ++overlap[{detections[i], truth[i]}];
    }
  }
  std::vector<Match> pairs;
  for (const auto& [key, inter] : overlap) {
    const std::size_t uni =
        det_area.at(key.first) + gt_area.at(key.second) - inter;
    const double iou = static_cast<double>(inter) / static_cast<double>(uni);
    if (iou > iou_threshold) pairs.push_back({key.first, key.second, iou});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Match& a, const Match& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.detection != b.detection) return a.detection < b.detection;
    return a.truth < b.truth;
  });
  std::set<std::int32_t> used_det, used_gt;
  std::vector<Match> accepted;
  for (const auto& m : pairs) {
    if (used_det.contains(m.detection) || used_gt.contains(m.truth)) continue;
    used_det.insert(m.detection);
    used_gt.insert(m.truth);
    accepted.push_back(m);
  }
  return accepted;
}

EvalReport match_and_score(const InstanceMap& detections,
                           const InstanceMap& truth, double iou_threshold) {
  const auto matches = match_instances(detections, truth, iou_threshold);
  const std::size_t n_det = areas(detections).size();
  const std::size_t n_gt = areas(truth).size();
  const std::size_t tp = matches.size();
  return make_report(tp, n_det - tp, n_gt - tp, iou_threshold);
}

EvalReport match_and_score(const InstanceMap& detections,
                           const PolygonScene& truth, double iou_threshold) {
  if (detections.width() != truth.width() ||
      detections.height() != truth.height()) {
    throw InputError("match_and_score: dimension mismatch between detections and ground truth");
  }
  const auto raster = rasterize(truth);
  // Instances that rasterize to nothing cannot be detected but still count as
  // ground truth.
  const auto report = match_and_score(detections, raster.labels, iou_threshold);
  return make_report(report.tp, report.fp, report.fn + raster.degenerate.size(),
                     iou_threshold);
}

EvalReport accumulate(const std::vector<EvalReport>& reports,
                      double iou_threshold) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& r : reports) {
    tp += r.tp;
    fp += r.fp;
    fn += r.fn;
  }
  return make_report(tp, fp, fn, iou_threshold);
}

}  // namespace textfield
