#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstring>
#include <string>

#include "textfield/eval.hpp"
#include "textfield/field.hpp"
#include "textfield/geometry.hpp"
#include "textfield/inference.hpp"
#include "textfield/loss.hpp"
#include "textfield/synth.hpp"
#include "textfield/version.hpp"

namespace py = pybind11;
using namespace textfield;

namespace {

template <typename T>
using Array = py::array_t<T, py::array::c_style | py::array::forcecast>;

// Grids travel as (height, width) arrays.
template <typename T>
Grid<T> to_grid(const Array<T>& a, const char* what) {
  if (a.ndim() != 2) throw InputError(std::string(what) + " must be a 2-D array");
  Grid<T> g(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::copy_n(a.data(), g.size(), g.data());
  return g;
}

template <typename T>
Array<T> to_array(const Grid<T>& g) {
  Array<T> a({g.height(), g.width()});
  std::copy_n(g.data(), g.size(), a.mutable_data());
  return a;
}

DirectionField to_field(const Array<float>& vx, const Array<float>& vy) {
  DirectionField f;
  f.vx = to_grid(vx, "vx");
  f.vy = to_grid(vy, "vy");
  require_same_shape(f.vx, f.vy, "field components");
  return f;
}

py::tuple from_field(const DirectionField& f) {
  return py::make_tuple(to_array(f.vx), to_array(f.vy));
}

Border parse_border(const std::string& name) {
  if (name == "background") return Border::kBackground;
  if (name == "text") return Border::kText;
  throw InputError("border must be 'background' or 'text'");
}

Polygon to_polygon(const Array<double>& pts) {
  if (pts.ndim() != 2 || pts.shape(1) != 2) {
    throw InputError("a polygon must be an (n, 2) array of points");
  }
  std::vector<Point> out;
  for (py::ssize_t i = 0; i < pts.shape(0); ++i) out.push_back({pts.at(i, 0), pts.at(i, 1)});
  return Polygon(std::move(out));
}

Array<double> from_polygon(const Polygon& p) {
  Array<double> a({static_cast<py::ssize_t>(p.size()), py::ssize_t{2}});
  for (std::size_t i = 0; i < p.size(); ++i) {
    a.mutable_at(i, 0) = p.points()[i].x;
    a.mutable_at(i, 1) = p.points()[i].y;
  }
  return a;
}

PolygonScene to_scene(int width, int height, const std::vector<Array<double>>& polygons) {
  PolygonScene scene(width, height);
  for (const auto& p : polygons) scene.add(to_polygon(p));
  return scene;
}

}  // namespace

PYBIND11_MODULE(_textfield, m) {
  m.doc() = "Direction-field text detection: field generation, loss kernels, "
            "post-processing, evaluation and synthetic scenes.";
  m.attr("__version__") = std::string(kVersion);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  // geometry
  m.def(
      "rasterize",
      [](int width, int height, const std::vector<Array<double>>& polygons) {
        const auto r = rasterize(to_scene(width, height, polygons));
        return py::make_tuple(to_array(r.mask), to_array(r.labels), r.degenerate);
      },
      py::arg("width"), py::arg("height"), py::arg("polygons"),
      "Returns (mask, labels, degenerate) for polygons given as (n, 2) arrays.");
  m.def(
      "mask_iou",
      [](const Array<std::uint8_t>& a, const Array<std::uint8_t>& b) {
        return mask_iou(to_grid(a, "a"), to_grid(b, "b"));
      },
      py::arg("a"), py::arg("b"));

  // field generation
  m.def(
      "feature_transform",
      [](const Array<std::int32_t>& labels, const std::string& border) {
        const auto ft = feature_transform(to_grid(labels, "labels"), parse_border(border));
        Array<std::int32_t> nearest({ft.height(), ft.width(), 2});
        for (std::size_t i = 0; i < ft.nearest.size(); ++i) {
          nearest.mutable_data()[2 * i] = ft.nearest[i].x;
          nearest.mutable_data()[2 * i + 1] = ft.nearest[i].y;
        }
        return py::make_tuple(nearest, to_array(ft.sq_distance));
      },
      py::arg("labels"), py::arg("border") = "background",
      "Per-instance nearest site (x, y) and squared distance of every pixel.");
  m.def(
      "generate_field",
      [](const Array<std::int32_t>& labels, const std::string& border) {
        return from_field(generate_field(to_grid(labels, "labels"), parse_border(border)));
      },
      py::arg("labels"), py::arg("border") = "background",
      "Ground-truth field (vx, vy) of an instance label map.");
  m.def(
      "magnitude",
      [](const Array<float>& vx, const Array<float>& vy) {
        return to_array(magnitude(to_field(vx, vy)));
      },
      py::arg("vx"), py::arg("vy"));

  // loss
  m.def(
      "compute_weights",
      [](const Array<std::int32_t>& labels) {
        return to_array(compute_weights(to_grid(labels, "labels")));
      },
      py::arg("labels"));
  m.def(
      "per_pixel_loss",
      [](const Array<float>& gt_vx, const Array<float>& gt_vy, const Array<float>& pred_vx,
         const Array<float>& pred_vy) {
        return to_array(per_pixel_loss(to_field(gt_vx, gt_vy), to_field(pred_vx, pred_vy)));
      },
      py::arg("gt_vx"), py::arg("gt_vy"), py::arg("pred_vx"), py::arg("pred_vy"));
  m.def(
      "select_hard_negatives",
      [](const Array<std::int32_t>& labels, const Array<double>& loss, double gamma) {
        return select_hard_negatives(to_grid(labels, "labels"), to_grid(loss, "loss"), gamma)
            .kept;
      },
      py::arg("labels"), py::arg("loss"), py::arg("gamma"),
      "Row-major indices of the kept non-text pixels, by decreasing loss.");
  m.def(
      "total_loss",
      [](const Array<float>& gt_vx, const Array<float>& gt_vy, const Array<float>& pred_vx,
         const Array<float>& pred_vy, const Array<double>& weights,
         const Array<std::int32_t>& labels, std::optional<double> gamma) {
        const auto gt = to_field(gt_vx, gt_vy);
        const auto pred = to_field(pred_vx, pred_vy);
        const auto l = to_grid(labels, "labels");
        std::optional<HardNegativeSelection> selection;
        if (gamma) selection = select_hard_negatives(l, per_pixel_loss(gt, pred), *gamma);
        return total_loss(gt, pred, to_grid(weights, "weights"), l, selection);
      },
      py::arg("gt_vx"), py::arg("gt_vy"), py::arg("pred_vx"), py::arg("pred_vy"),
      py::arg("weights"), py::arg("labels"), py::arg("gamma") = py::none(),
      "Weighted loss over text pixels plus mined negatives, or every pixel "
      "when gamma is None.");

  // inference
  py::enum_<RootRule>(m, "RootRule")
      .value("OPPOSING_NEIGHBOR", RootRule::kOpposingNeighbor)
      .value("CANDIDATE_ONLY", RootRule::kCandidateOnly);
  py::class_<InferenceConfig>(m, "InferenceConfig")
      .def(py::init<>())
      .def_readwrite("lambda_m", &InferenceConfig::lambda_m)
      .def_readwrite("lambda_r", &InferenceConfig::lambda_r)
      .def_readwrite("lambda_a", &InferenceConfig::lambda_a)
      .def_readwrite("k1", &InferenceConfig::k1)
      .def_readwrite("k2", &InferenceConfig::k2)
      .def_readwrite("root_rule", &InferenceConfig::root_rule)
      .def("validate", &InferenceConfig::validate)
      .def_static(
          "preset",
          [](const std::string& name) {
            const auto p = parse_preset(name);
            if (!p) throw InputError("unknown preset '" + name + "'");
            return preset_config(*p);
          },
          py::arg("name"), "ctw1500, totaltext, ic15 or td500.")
      .def("__repr__", [](const InferenceConfig& c) {
        return "InferenceConfig(lambda_m=" + std::to_string(c.lambda_m) +
               ", lambda_r=" + std::to_string(c.lambda_r) +
               ", lambda_a=" + std::to_string(c.lambda_a) + ", k1=" + std::to_string(c.k1) +
               ", k2=" + std::to_string(c.k2) + ")";
      });
  m.def("bin_direction", &bin_direction, py::arg("vx"), py::arg("vy"),
        "Direction bin 0..7: E, NE, N, NW, W, SW, S, SE in the y-down frame.");
  m.def(
      "threshold_candidates",
      [](const Array<float>& vx, const Array<float>& vy, double lambda_m) {
        return to_array(threshold_candidates(to_field(vx, vy), lambda_m));
      },
      py::arg("vx"), py::arg("vy"), py::arg("lambda_m"));
  m.def(
      "detect",
      [](const Array<float>& vx, const Array<float>& vy, const InferenceConfig& config) {
        const auto field = to_field(vx, vy);
        InstanceMap labels;
        {
          py::gil_scoped_release release;
          labels = detect(field, config);
        }
        return to_array(labels);
      },
      py::arg("vx"), py::arg("vy"), py::arg("config") = InferenceConfig{},
      "Instance label map of a direction field.");
  m.def(
      "run_inference",
      [](const Array<float>& vx, const Array<float>& vy, const InferenceConfig& config) {
        const auto t = run_inference(to_field(vx, vy), config);
        py::list reps;
        for (std::size_t k = 0; k < t.forest.representatives.size(); ++k) {
          const auto& r = t.forest.representatives[k];
          reps.append(py::make_tuple(r.index, r.bin, t.groups.group_of[k]));
        }
        py::list survives;
        for (std::size_t g = 1; g < t.balance.size(); ++g) survives.append(t.balance[g].survives);
        py::dict out;
        out["candidates"] = to_array(t.forest.candidates);
        out["parent"] = to_array(t.forest.parent);
        out["superpixels"] = to_array(t.forest.labels);
        out["representatives"] = reps;
        out["groups"] = to_array(t.groups.components);
        out["group_survives"] = survives;
        out["propagated"] = to_array(t.propagated);
        out["instances"] = to_array(t.instances);
        out["instance_count"] = t.instance_count;
        return out;
      },
      py::arg("vx"), py::arg("vy"), py::arg("config") = InferenceConfig{},
      "Every intermediate stage of detect(). Representatives are (index, bin, group).");

  // eval
  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("tp", &EvalReport::tp)
      .def_readonly("fp", &EvalReport::fp)
      .def_readonly("fn", &EvalReport::fn)
      .def_readonly("precision", &EvalReport::precision)
      .def_readonly("recall", &EvalReport::recall)
      .def_readonly("f_measure", &EvalReport::f_measure)
      .def_readonly("iou_threshold", &EvalReport::iou_threshold)
      .def("__repr__", [](const EvalReport& r) {
        return "EvalReport(tp=" + std::to_string(r.tp) + ", fp=" + std::to_string(r.fp) +
               ", fn=" + std::to_string(r.fn) + ", f_measure=" + std::to_string(r.f_measure) +
               ")";
      });
  m.def(
      "match_and_score",
      [](const Array<std::int32_t>& detections, const Array<std::int32_t>& truth,
         double iou_threshold) {
        return match_and_score(to_grid(detections, "detections"), to_grid(truth, "truth"),
                               iou_threshold);
      },
      py::arg("detections"), py::arg("truth"), py::arg("iou_threshold") = 0.5,
      "Greedy one-to-one matching of two label maps on IOU > threshold.");

  // synth
  py::enum_<ShapeFamily>(m, "ShapeFamily")
      .value("AXIS_BAR", ShapeFamily::kAxisBar)
      .value("ROTATED_BAR", ShapeFamily::kRotatedBar)
      .value("ARC_RIBBON", ShapeFamily::kArcRibbon)
      .value("MIXED", ShapeFamily::kMixed);
  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def_readwrite("seed", &SynthSpec::seed)
      .def_readwrite("width", &SynthSpec::width)
      .def_readwrite("height", &SynthSpec::height)
      .def_readwrite("count_min", &SynthSpec::count_min)
      .def_readwrite("count_max", &SynthSpec::count_max)
      .def_readwrite("shape", &SynthSpec::shape)
      .def_readwrite("stroke_min", &SynthSpec::stroke_min)
      .def_readwrite("stroke_max", &SynthSpec::stroke_max)
      .def_readwrite("length_min", &SynthSpec::length_min)
      .def_readwrite("length_max", &SynthSpec::length_max)
      .def_readwrite("min_gap", &SynthSpec::min_gap)
      .def_readwrite("margin", &SynthSpec::margin)
      .def_readwrite("min_area", &SynthSpec::min_area)
      .def_readwrite("max_attempts", &SynthSpec::max_attempts);
  m.def(
      "generate_scene",
      [](const SynthSpec& spec) {
        const auto scene = generate_scene(spec);
        std::vector<Array<double>> polygons;
        for (const auto& p : scene.instances()) polygons.push_back(from_polygon(p));
        return polygons;
      },
      py::arg("spec"), "Polygons of a synthetic scene as (n, 2) arrays.");
  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init([](double angle_sigma, double magnitude_sigma, double dropout_rate,
                       std::uint64_t seed) {
             return NoiseModel{angle_sigma, magnitude_sigma, dropout_rate, seed};
           }),
           py::arg("angle_sigma") = 0.0, py::arg("magnitude_sigma") = 0.0,
           py::arg("dropout_rate") = 0.0, py::arg("seed") = 0)
      .def_readwrite("angle_sigma", &NoiseModel::angle_sigma)
      .def_readwrite("magnitude_sigma", &NoiseModel::magnitude_sigma)
      .def_readwrite("dropout_rate", &NoiseModel::dropout_rate)
      .def_readwrite("seed", &NoiseModel::seed);
  m.def(
      "perturb_field",
      [](const Array<float>& vx, const Array<float>& vy, const NoiseModel& noise) {
        return from_field(perturb_field(to_field(vx, vy), noise));
      },
      py::arg("vx"), py::arg("vy"), py::arg("noise"));
}
