#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include "textfield/contour.hpp"
#include "textfield/eval.hpp"
#include "textfield/field.hpp"
#include "textfield/geometry.hpp"
#include "textfield/inference.hpp"
#include "textfield/io.hpp"
#include "textfield/loss.hpp"
#include "textfield/parallel.hpp"
#include "textfield/roundtrip.hpp"
#include "textfield/synth.hpp"
#include "textfield/version.hpp"

namespace textfield::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// Collects what a run did so it can be written as a sidecar manifest.
class Manifest {
 public:
  explicit Manifest(std::string subcommand) {
    doc_["subcommand"] = std::move(subcommand);
    doc_["version"] = kVersion;
    doc_["config"] = json::object();
    doc_["inputs"] = json::array();
    doc_["outputs"] = json::array();
    doc_["stage_ms"] = json::object();
  }

  json& config() { return doc_["config"]; }
  void input(const fs::path& p) { doc_["inputs"].push_back(p.string()); }
  void output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }

  template <typename Fn>
  auto stage(const std::string& name, Fn&& fn) {
    const auto t0 = Clock::now();
    struct Record {
      Manifest* self;
      std::string name;
      Clock::time_point t0;
      ~Record() {
        const double ms =
            std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        self->doc_["stage_ms"][name] = ms;
      }
    } record{this, name, t0};
    return fn();
  }

  void write(const fs::path& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write manifest " + path.string());
    out << doc_.dump(2) << '\n';
  }

 private:
  json doc_;
};

std::vector<fs::path> list_files(const fs::path& dir, const std::string& ext) {
  if (!fs::is_directory(dir)) {
    throw InputError("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) {
    throw InputError("cannot create directory " + dir.string());
  }
}

std::optional<std::pair<int, int>> size_option(int width, int height) {
  if (width > 0 && height > 0) return std::pair{width, height};
  return std::nullopt;
}

Border parse_border(const std::string& name) {
  return name == "text" ? Border::kText : Border::kBackground;
}

// Options shared by detect and roundtrip.
struct InferenceFlags {
  std::string preset;
  std::optional<double> lambda_m, lambda_r;
  std::optional<int> lambda_a, k1, k2;
  std::string root_rule = "opposing";

  void add_to(CLI::App& app) {
    app.add_option("--preset", preset,
                   "Dataset preset: ctw1500 (lambda_m 0.59), totaltext (0.50), "
                   "ic15 (0.69), td500 (0.64). Without a preset lambda_m is 0.5")
        ->check(CLI::IsMember({"ctw1500", "totaltext", "ic15", "td500"}));
    app.add_option("--lambda-m", lambda_m, "Magnitude threshold, in (0, 1)");
    app.add_option("--lambda-r", lambda_r,
                   "Minimum paired-representative ratio (default 0.6)");
    app.add_option("--lambda-a", lambda_a, "Minimum instance area in pixels (default 200)");
    app.add_option("--k1", k1, "Grouping dilation side, odd (default 3)");
    app.add_option("--k2", k2, "Closing side, odd (default 11)");
    app.add_option("--root-rule", root_rule,
                   "opposing: a pixel whose neighbor's vector opposes its own is a "
                   "root (default); candidate: only non-candidate neighbors end a chain")
        ->check(CLI::IsMember({"opposing", "candidate"}));
  }

  InferenceConfig resolve(double default_lambda_m) const {
    InferenceConfig c;
    c.lambda_m = default_lambda_m;
    if (!preset.empty()) c = preset_config(*parse_preset(preset));
    if (lambda_m) c.lambda_m = *lambda_m;
    if (lambda_r) c.lambda_r = *lambda_r;
    if (lambda_a) c.lambda_a = *lambda_a;
    if (k1) c.k1 = *k1;
    if (k2) c.k2 = *k2;
    c.root_rule = root_rule == "candidate" ? RootRule::kCandidateOnly
                                           : RootRule::kOpposingNeighbor;
    c.validate();
    return c;
  }
};

json config_json(const InferenceConfig& c) {
  return {{"lambda_m", c.lambda_m},
          {"lambda_r", c.lambda_r},
          {"lambda_a", c.lambda_a},
          {"k1", c.k1},
          {"k2", c.k2},
          {"root_rule", c.root_rule == RootRule::kCandidateOnly ? "candidate"
                                                                 : "opposing"}};
}

// ---------------------------------------------------------------- genfield

struct GenfieldOptions {
  fs::path annotations, out;
  int width = 0, height = 0;
  std::string border = "background";
  bool labels = false;
  bool manifest = false;
};

int genfield(const GenfieldOptions& o, std::ostream& out) {
  Manifest manifest("genfield");
  manifest.config() = {{"border", o.border}, {"labels", o.labels},
                       {"width", o.width}, {"height", o.height}};
  const auto files = list_files(o.annotations, ".txt");
  ensure_dir(o.out);
  const Border border = parse_border(o.border);
  std::vector<std::string> warnings(files.size());
  manifest.stage("generate", [&] {
    parallel_for(files.size(), [&](std::size_t i) {
      const PolygonScene scene =
          io::read_scene(files[i], size_option(o.width, o.height));
      const Rasterization raster = rasterize(scene);
      for (const auto k : raster.degenerate) {
        warnings[i] += fmt::format("warning: {}: instance {} covers no pixels\n",
                                   files[i].string(), k);
      }
      const auto stem = files[i].stem().string();
      io::write_dff(o.out / (stem + ".dff"), generate_field(raster.labels, border));
      if (o.labels) {
        io::write_labels_pgm(o.out / (stem + ".labels.pgm"), raster.labels);
      }
    });
    return 0;
  });
  for (std::size_t i = 0; i < files.size(); ++i) {
    out << warnings[i];
    manifest.input(files[i]);
    manifest.output(o.out / (files[i].stem().string() + ".dff"));
  }
  out << fmt::format("wrote {} field(s) to {}\n", files.size(), o.out.string());
  if (o.manifest) manifest.write(o.out / "genfield.manifest.json");
  return kOk;
}

// ------------------------------------------------------------------ detect

struct DetectOptions {
  fs::path field, out, contours;
  InferenceFlags flags;
  bool manifest = false;
};

int detect_cmd(const DetectOptions& o, std::ostream& out) {
  Manifest manifest("detect");
  const InferenceConfig config = o.flags.resolve(0.5);
  manifest.config() = config_json(config);
  manifest.input(o.field);
  const DirectionField field =
      manifest.stage("read", [&] { return io::read_dff(o.field); });
  const InferenceTrace trace =
      manifest.stage("detect", [&] { return run_inference(field, config); });
  manifest.stage("write", [&] {
    io::write_labels_pgm(o.out, trace.instances);
    if (!o.contours.empty()) {
      std::ofstream cout(o.contours);
      if (!cout) throw InputError("cannot write " + o.contours.string());
      io::write_polygons(cout, instance_contours(trace.instances));
    }
    return 0;
  });
  manifest.output(o.out);
  if (!o.contours.empty()) manifest.output(o.contours);
  out << fmt::format("{} instance(s)\n", trace.instance_count);
  if (o.manifest) manifest.write(fs::path(o.out.string() + ".manifest.json"));
  return kOk;
}

// -------------------------------------------------------------------- eval

struct EvalOptions {
  fs::path dets, gt, per_image;
  double iou = 0.5;
  bool manifest = false;
};

int eval_cmd(const EvalOptions& o, std::ostream& out) {
  Manifest manifest("eval");
  manifest.config() = {{"iou", o.iou}};
  const auto files = list_files(o.gt, ".txt");
  std::vector<EvalReport> reports(files.size());
  manifest.stage("score", [&] {
    parallel_for(files.size(), [&](std::size_t i) {
      const fs::path det = o.dets / (files[i].stem().string() + ".pgm");
      const InstanceMap labels = io::read_labels_pgm(det);
      const PolygonScene scene =
          io::read_scene(files[i], std::pair{labels.width(), labels.height()});
      reports[i] = match_and_score(labels, scene, o.iou);
    });
    return 0;
  });
  for (const auto& f : files) {
    manifest.input(f);
    manifest.input(o.dets / (f.stem().string() + ".pgm"));
  }
  const EvalReport total = accumulate(reports, o.iou);
  out << fmt::format("P={:.6f} R={:.6f} F={:.6f} TP={} FP={} FN={}\n",
                     total.precision, total.recall, total.f_measure, total.tp,
                     total.fp, total.fn);
  if (!o.per_image.empty()) {
    std::ofstream csv(o.per_image);
    if (!csv) throw InputError("cannot write " + o.per_image.string());
    csv << "image,tp,fp,fn,precision,recall,f_measure\n";
    for (std::size_t i = 0; i < files.size(); ++i) {
      const auto& r = reports[i];
      csv << fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f}\n",
                         files[i].stem().string(), r.tp, r.fp, r.fn,
                         r.precision, r.recall, r.f_measure);
    }
    manifest.output(o.per_image);
  }
  if (o.manifest) manifest.write(o.dets / "eval.manifest.json");
  return kOk;
}

// ------------------------------------------------------------------- synth

struct SynthOptions {
  fs::path spec, out;
  int count = 1;
  std::optional<std::uint64_t> seed;
  bool fields = false;
  bool manifest = false;
};

SynthSpec load_spec(const fs::path& path) {
  if (path.empty()) return SynthSpec{};
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return io::synth_spec_from_json(doc);
}

int synth_cmd(const SynthOptions& o, std::ostream& out) {
  Manifest manifest("synth");
  SynthSpec base = load_spec(o.spec);
  if (o.seed) base.seed = *o.seed;
  base.validate();
  if (o.count < 0) throw InputError("--count must be non-negative");
  manifest.config() = io::to_json(base);
  manifest.config()["count"] = o.count;
  manifest.config()["fields"] = o.fields;
  if (!o.spec.empty()) manifest.input(o.spec);
  ensure_dir(o.out);
  auto name = [](int i) { return fmt::format("scene_{:04d}", i); };
  manifest.stage("generate", [&] {
    parallel_for(static_cast<std::size_t>(o.count), [&](std::size_t i) {
      SynthSpec spec = base;
      spec.seed = base.seed + i;
      const PolygonScene scene = generate_scene(spec);
      const auto stem = name(static_cast<int>(i));
      io::write_annotation(o.out / (stem + ".txt"), scene);
      if (o.fields) {
        const Rasterization raster = rasterize(scene);
        io::write_dff(o.out / (stem + ".dff"), generate_field(raster.labels));
        io::write_labels_pgm(o.out / (stem + ".labels.pgm"), raster.labels);
      }
    });
    return 0;
  });
  for (int i = 0; i < o.count; ++i) manifest.output(o.out / (name(i) + ".txt"));
  out << fmt::format("wrote {} scene(s) to {}\n", o.count, o.out.string());
  if (o.manifest) manifest.write(o.out / "synth.manifest.json");
  return kOk;
}

// -------------------------------------------------------------------- loss

struct LossOptions {
  fs::path gt, pred, labels;
  std::optional<double> gamma;
  bool manifest = false;
};

int loss_cmd(const LossOptions& o, std::ostream& out) {
  Manifest manifest("loss");
  const DirectionField gt = io::read_dff(o.gt);
  const DirectionField pred = io::read_dff(o.pred);
  const InstanceMap labels = io::read_labels_pgm(o.labels);
  manifest.input(o.gt);
  manifest.input(o.pred);
  manifest.input(o.labels);
  const double value = manifest.stage("loss", [&] {
    const WeightMap weights = compute_weights(labels);
    std::optional<HardNegativeSelection> selection;
    if (o.gamma) {
      selection = select_hard_negatives(labels, per_pixel_loss(gt, pred), *o.gamma);
    }
    return total_loss(gt, pred, weights, labels, selection);
  });
  manifest.config() = {{"gamma", o.gamma ? json(*o.gamma) : json(nullptr)}};
  out << fmt::format("{:.9g}\n", value);
  if (o.manifest) manifest.write(fs::path(o.pred.string() + ".loss.manifest.json"));
  return kOk;
}

// --------------------------------------------------------------- roundtrip

struct RoundtripOptions {
  fs::path spec;
  std::uint64_t seed = 7;
  int cases = 50;
  InferenceFlags flags;
  double noise_angle = 0.0, noise_magnitude = 0.0, noise_dropout = 0.0;
  std::uint64_t noise_seed = 0;
  double min_exact = 0.96;
  double min_iou = 0.90;
  bool manifest = false;
};

int roundtrip_cmd(const RoundtripOptions& o, std::ostream& out) {
  Manifest manifest("roundtrip");
  SynthSpec base = load_spec(o.spec);
  base.seed = o.seed;
  if (o.cases <= 0) throw InputError("--cases must be positive");
  const InferenceConfig config = o.flags.resolve(0.3);
  std::optional<NoiseModel> noise;
  if (o.noise_angle > 0 || o.noise_magnitude > 0 || o.noise_dropout > 0) {
    noise = NoiseModel{o.noise_angle, o.noise_magnitude, o.noise_dropout,
                       o.noise_seed};
  }
  manifest.config() = {{"synth", io::to_json(base)},
                       {"cases", o.cases},
                       {"inference", config_json(config)},
                       {"noise",
                        {{"angle_sigma", o.noise_angle},
                         {"magnitude_sigma", o.noise_magnitude},
                         {"dropout_rate", o.noise_dropout},
                         {"seed", o.noise_seed}}},
                       {"min_exact", o.min_exact},
                       {"min_iou", o.min_iou}};
  const RoundTripSummary summary = manifest.stage("roundtrip", [&] {
    return run_roundtrip(base, static_cast<std::size_t>(o.cases), config, noise);
  });

  out << fmt::format("{:>5} {:>8} {:>4} {:>4} {:>9} {}\n", "case", "seed", "gt",
                     "det", "mean_iou", "count");
  for (std::size_t k = 0; k < summary.cases.size(); ++k) {
    const auto& c = summary.cases[k];
    out << fmt::format("{:>5} {:>8} {:>4} {:>4} {:>9.4f} {}\n", k, c.seed,
                       c.truth_count, c.detected_count, c.mean_iou(),
                       c.count_exact() ? "exact" : "MISS");
  }
  const double exact_fraction =
      static_cast<double>(summary.exact_cases) / static_cast<double>(o.cases);
  const bool pass =
      exact_fraction >= o.min_exact && summary.mean_matched_iou >= o.min_iou;
  out << fmt::format("exact {}/{} mean_iou {:.4f} -> {}\n", summary.exact_cases,
                     o.cases, summary.mean_matched_iou, pass ? "PASS" : "FAIL");
  if (o.manifest) manifest.write("roundtrip.manifest.json");
  return pass ? kOk : kInternalError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Direction-field text detection toolkit"};
  app.name("textfield");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  GenfieldOptions gen;
  auto* gen_cmd = app.add_subcommand(
      "genfield", "Rasterize annotation files and write ground-truth DFF1 fields");
  gen_cmd->add_option("--annotations", gen.annotations,
                      "Directory of annotation .txt files")->required();
  gen_cmd->add_option("--out", gen.out, "Output directory for .dff files")->required();
  gen_cmd->add_option("--width", gen.width, "Image width when a file has no size comment");
  gen_cmd->add_option("--height", gen.height, "Image height when a file has no size comment");
  gen_cmd->add_option("--border", gen.border,
                      "Pixels outside the image: background (default) or text")
      ->check(CLI::IsMember({"background", "text"}));
  gen_cmd->add_flag("--labels", gen.labels, "Also write <name>.labels.pgm instance maps");
  gen_cmd->add_flag("--manifest", gen.manifest, "Write genfield.manifest.json in --out");

  DetectOptions det;
  auto* det_cmd = app.add_subcommand(
      "detect", "Turn a direction field into a 16-bit instance label PGM");
  det_cmd->add_option("--field", det.field, "Input .dff field")->required();
  det_cmd->add_option("--out", det.out, "Output label PGM")->required();
  det_cmd->add_option("--contours", det.contours,
                      "Write one polygon per instance in annotation format");
  det.flags.add_to(*det_cmd);
  det_cmd->add_flag("--manifest", det.manifest, "Write <out>.manifest.json");

  EvalOptions ev;
  auto* ev_cmd = app.add_subcommand(
      "eval", "Score label PGMs (<name>.pgm) against annotations (<name>.txt)");
  ev_cmd->add_option("--dets", ev.dets, "Directory of detection label PGMs")->required();
  ev_cmd->add_option("--gt", ev.gt, "Directory of annotation files")->required();
  ev_cmd->add_option("--iou", ev.iou, "A match needs IOU strictly above this (default 0.5)");
  ev_cmd->add_option("--per-image", ev.per_image, "Per-image CSV output");
  ev_cmd->add_flag("--manifest", ev.manifest, "Write eval.manifest.json in --dets");

  SynthOptions sy;
  auto* sy_cmd = app.add_subcommand(
      "synth", "Generate synthetic annotation files (and optional GT fields)");
  sy_cmd->add_option("--spec", sy.spec, "Flat JSON synth spec; defaults when omitted");
  sy_cmd->add_option("--out", sy.out, "Output directory")->required();
  sy_cmd->add_option("--count", sy.count, "Number of scenes; scene i uses seed + i (default 1)");
  sy_cmd->add_option("--seed", sy.seed, "Override the spec seed");
  sy_cmd->add_flag("--fields", sy.fields, "Also write .dff fields and .labels.pgm maps");
  sy_cmd->add_flag("--manifest", sy.manifest, "Write synth.manifest.json in --out");

  LossOptions lo;
  auto* lo_cmd = app.add_subcommand(
      "loss", "Instance-balanced loss between two fields, printed with 9 significant digits");
  lo_cmd->add_option("--gt", lo.gt, "Ground-truth .dff")->required();
  lo_cmd->add_option("--pred", lo.pred, "Predicted .dff")->required();
  lo_cmd->add_option("--labels", lo.labels, "Instance label PGM of the ground truth")->required();
  lo_cmd->add_option("--gamma", lo.gamma,
                     "Hard negative ratio; without it every pixel contributes");
  lo_cmd->add_flag("--manifest", lo.manifest, "Write <pred>.loss.manifest.json");

  RoundtripOptions rt;
  auto* rt_cmd = app.add_subcommand(
      "roundtrip", "Synthesize scenes, detect on their GT fields and check recovery");
  rt_cmd->add_option("--seed", rt.seed, "Seed of case 0 (default 7)");
  rt_cmd->add_option("--cases", rt.cases, "Number of scenes (default 50)");
  rt_cmd->add_option("--spec", rt.spec, "Flat JSON synth spec for the scenes");
  rt.flags.add_to(*rt_cmd);
  rt_cmd->add_option("--noise-angle", rt.noise_angle, "Angle noise sigma in degrees");
  rt_cmd->add_option("--noise-magnitude", rt.noise_magnitude, "Relative magnitude noise sigma");
  rt_cmd->add_option("--noise-dropout", rt.noise_dropout, "Probability of zeroing a vector");
  rt_cmd->add_option("--noise-seed", rt.noise_seed, "Noise seed");
  rt_cmd->add_option("--min-exact", rt.min_exact,
                     "Required fraction of cases with exact instance count (default 0.96)");
  rt_cmd->add_option("--min-iou", rt.min_iou, "Required mean matched IOU (default 0.90)");
  rt_cmd->add_flag("--manifest", rt.manifest,
                   "Write roundtrip.manifest.json in the working directory");
  rt_cmd->footer("Defaults: lambda_m 0.3, lambda_r 0.6, lambda_a 200, k1 3, k2 11.");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    out << sub->help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kInputError;
  }

  try {
    if (*gen_cmd) return genfield(gen, out);
    if (*det_cmd) return detect_cmd(det, out);
    if (*ev_cmd) return eval_cmd(ev, out);
    if (*sy_cmd) return synth_cmd(sy, out);
    if (*lo_cmd) return loss_cmd(lo, out);
    if (*rt_cmd) return roundtrip_cmd(rt, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInputError;
}

}  // namespace textfield::cli
