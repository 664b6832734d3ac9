#include "cli.hpp"

#include <climits>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fpnet/bench.hpp"
#include "fpnet/detector.hpp"
#include "fpnet/errors.hpp"
#include "fpnet/evaluate.hpp"
#include "fpnet/pnm.hpp"
#include "fpnet/synthetic.hpp"

namespace fpnet::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCriterion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Options {
    std::string weights;
    std::string templates;
    std::string output;
    std::string annotations;
    std::string detections;
    std::string config;
    std::vector<std::string> images;

    double scale_factor = 0.79;
    double dense_scale_factor = 0.79;
    double min_face = 40.0;
    bool extra_layer = false;

    double tau_face = 0.6;
    double tau_part = 0.7;
    double tau_iou = 0.3;
    int peak_radius = 2;
    double face_nms_iou = 0.5;
    double cross_scale_nms_iou = 0.7;

    double iou_thresh = 0.5;
    std::uint64_t seed = 0;
    int scenes = 200;
    double noise = 0.3;
    double min_pass_rate = 0.95;
    int repeats = 5;
    int width = 640;
    int height = 480;
};

double parse_real(const std::string& key, const std::string& value, double lo, double hi) {
    try {
        const double v = std::stod(value);
        if (v < lo || v > hi)
            throw ConfigError("config key '" + key + "': " + value + " out of range [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not a number");
    }
}

long parse_integer(const std::string& key, const std::string& value, long lo, long hi) {
    try {
        const long v = std::stol(value);
        if (v < lo || v > hi)
            throw ConfigError("config key '" + key + "': " + value + " out of range");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not an integer");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    throw ConfigError("config key '" + key + "': '" + value + "' is not a boolean");
}

// "key = value" lines, same keys as the long flags; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> entries;
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        const auto from = s.find_first_not_of(" \t\r");
        const auto to = s.find_last_not_of(" \t\r");
        return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string trimmed = trim(line);
        if (trimmed.empty())
            continue;
        const std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(trimmed.substr(0, eq));
        const std::string value = trim(trimmed.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        if (!entries.emplace(key, value).second)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    return entries;
}

// Applies config-file entries for every key the parsed subcommand accepts and
// that was not already given as a flag; unknown keys are rejected. Returns the
// set of keys present in the file.
std::set<std::string> apply_config_file(CLI::App& cmd, Options& opt) {
    std::set<std::string> keys;
    if (opt.config.empty())
        return keys;
    for (const auto& [key, value] : read_config_file(opt.config)) {
        keys.insert(key);
        const std::string flag = "--" + key;
        const CLI::Option* known = cmd.get_option_no_throw(flag);
        if (known == nullptr)
            throw ConfigError("unknown config key '" + key + "' for subcommand '" +
                              cmd.get_name() + "'");
        if (known->count() > 0)
            continue; // flags override the file

        if (key == "weights") opt.weights = value;
        else if (key == "templates") opt.templates = value;
        else if (key == "output") opt.output = value;
        else if (key == "annotations") opt.annotations = value;
        else if (key == "detections") opt.detections = value;
        else if (key == "scale-factor") opt.scale_factor = parse_real(key, value, 1e-6, 1.0);
        else if (key == "dense-scale-factor") opt.dense_scale_factor = parse_real(key, value, 1e-6, 1.0);
        else if (key == "min-face") opt.min_face = parse_real(key, value, 1.0, 1e6);
        else if (key == "extra-layer") opt.extra_layer = parse_bool(key, value);
        else if (key == "tau-face") opt.tau_face = parse_real(key, value, 0.0, 1.0);
        else if (key == "tau-part") opt.tau_part = parse_real(key, value, 0.0, 1.0);
        else if (key == "tau-iou") opt.tau_iou = parse_real(key, value, 0.0, 1.0);
        else if (key == "peak-radius") opt.peak_radius = static_cast<int>(parse_integer(key, value, 1, 1000));
        else if (key == "face-nms-iou") opt.face_nms_iou = parse_real(key, value, 0.0, 1.0);
        else if (key == "cross-scale-nms-iou") opt.cross_scale_nms_iou = parse_real(key, value, 0.0, 1.0);
        else if (key == "iou-thresh") opt.iou_thresh = parse_real(key, value, 0.0, 1.0);
        else if (key == "seed") opt.seed = static_cast<std::uint64_t>(parse_integer(key, value, 0, LONG_MAX));
        else if (key == "scenes") opt.scenes = static_cast<int>(parse_integer(key, value, 1, 1000000));
        else if (key == "noise") opt.noise = parse_real(key, value, 0.0, 1.0);
        else if (key == "min-pass-rate") opt.min_pass_rate = parse_real(key, value, 0.0, 1.0);
        else if (key == "repeats") opt.repeats = static_cast<int>(parse_integer(key, value, 1, 10000));
        else if (key == "width") opt.width = static_cast<int>(parse_integer(key, value, 12, 100000));
        else if (key == "height") opt.height = static_cast<int>(parse_integer(key, value, 12, 100000));
        else
            throw ConfigError("config key '" + key + "' cannot be set from a file");
    }
    return keys;
}

void add_pyramid_flags(CLI::App& cmd, Options& opt) {
    cmd.add_option("--scale-factor", opt.scale_factor, "Pyramid scale factor");
    cmd.add_option("--min-face", opt.min_face, "Smallest face side to detect, pixels");
    cmd.add_flag("--extra-layer,!--no-extra-layer", opt.extra_layer,
                 "Insert an extra level at half the base scale");
}

void add_proposal_flags(CLI::App& cmd, Options& opt) {
    cmd.add_option("--tau-face", opt.tau_face, "Face heatmap threshold")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--tau-part", opt.tau_part, "Part heatmap threshold (all parts)")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--tau-iou", opt.tau_iou, "Cluster-membership IoU for the part merge")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--peak-radius", opt.peak_radius, "Peak suppression radius, heatmap cells")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--face-nms-iou", opt.face_nms_iou, "Per-level face NMS threshold")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--cross-scale-nms-iou", opt.cross_scale_nms_iou,
                   "Final cross-scale NMS threshold")
        ->check(CLI::Range(0.0, 1.0));
}

PyramidConfig pyramid_config(const Options& opt) {
    PyramidConfig cfg;
    cfg.scale_factor = opt.scale_factor;
    cfg.min_face = opt.min_face;
    cfg.extra_layer = opt.extra_layer;
    return cfg;
}

ProposalConfig proposal_config(const Options& opt) {
    ProposalConfig cfg;
    cfg.tau_face = opt.tau_face;
    cfg.tau_part = opt.tau_part;
    cfg.tau_iou = opt.tau_iou;
    cfg.peak_radius = opt.peak_radius;
    cfg.face_nms_iou = opt.face_nms_iou;
    cfg.cross_scale_nms_iou = opt.cross_scale_nms_iou;
    return cfg;
}

std::vector<PartTemplate> resolve_templates(const Options& opt) {
    return opt.templates.empty() ? default_templates() : load_templates(opt.templates);
}

NetworkWeights resolve_weights(const Options& opt) {
    // exists-or-usage-error: a missing/unusable weight file is a config problem
    return load_weights(opt.weights);
}

std::string format_detection(const std::string& path, const BBox& b) {
    char line[256];
    std::snprintf(line, sizeof(line), "%s %.4f %.4f %.4f %.4f %.4f %d\n", path.c_str(), b.x1, b.y1,
                  b.x2, b.y2, b.score, b.source);
    return line;
}

void write_output(const Options& opt, const std::string& text, std::ostream& out) {
    if (opt.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opt.output, std::ios::binary);
    if (!file)
        throw ImageError(ImageError::Kind::Io, "cannot open output file: " + opt.output);
    file << text;
    if (!file)
        throw ImageError(ImageError::Kind::Io, "write failed: " + opt.output);
}

int cmd_detect(const Options& opt, std::ostream& out, std::ostream& err) {
    const NetworkWeights weights = resolve_weights(opt);
    DetectorConfig cfg;
    cfg.pyramid = pyramid_config(opt);
    cfg.proposals = proposal_config(opt);
    cfg.templates = resolve_templates(opt);

    std::string buffer;
    int proposals = 0;
    int skipped = 0;
    for (const std::string& path : opt.images) {
        try {
            const Image image = load_image(path);
            for (const BBox& box : detect(weights, image, cfg)) {
                buffer += format_detection(path, box);
                ++proposals;
            }
        } catch (const Error& e) {
            // unreadable or unusable (e.g. below the base scale): skip, count
            err << "warning: skipping " << path << ": " << e.what() << "\n";
            ++skipped;
        }
    }
    buffer += "# images " + std::to_string(opt.images.size()) + " proposals " +
              std::to_string(proposals) + " skipped " + std::to_string(skipped) + "\n";
    write_output(opt, buffer, out);
    return kExitOk;
}

std::string bench_machine_records(const BenchReport& report, double iou_thresh) {
    std::string text;
    for (const BenchConfigReport* cfg : {&report.dense, &report.sparse}) {
        for (const BenchImageRecord& rec : cfg->images) {
            char line[512];
            std::snprintf(line, sizeof(line),
                          "image config=%s path=%s levels=%d workload=%llu proposals=%d\n",
                          cfg->label.c_str(), rec.path.c_str(), rec.levels,
                          static_cast<unsigned long long>(rec.workload), rec.proposals);
            text += line;
        }
        char line[512];
        std::snprintf(line, sizeof(line),
                      "bench config=%s scale_factor=%.6g min_face=%.6g extra_layer=%d images=%zu "
                      "levels=%d workload=%llu set_ms=%.3f mean_image_ms=%.3f\n",
                      cfg->label.c_str(), cfg->pyramid.scale_factor, cfg->pyramid.min_face,
                      cfg->pyramid.extra_layer ? 1 : 0, cfg->images.size(), cfg->total_levels,
                      static_cast<unsigned long long>(cfg->workload), cfg->set_ms,
                      cfg->mean_image_ms);
        text += line;
        if (cfg->eval) {
            char eline[256];
            std::snprintf(eline, sizeof(eline),
                          "eval config=%s iou_thresh=%.4f tp=%d fp=%d recall=%.4f precision=%.4f\n",
                          cfg->label.c_str(), iou_thresh, cfg->eval->true_positives,
                          cfg->eval->false_positives, cfg->eval->recall, cfg->eval->precision);
            text += eline;
        }
    }
    char ratio[128];
    std::snprintf(ratio, sizeof(ratio), "bench workload_ratio=%.6f skipped=%d\n",
                  report.workload_ratio, report.skipped);
    text += ratio;
    return text;
}

int cmd_bench(const Options& opt, std::ostream& out, std::ostream& err) {
    const NetworkWeights weights = resolve_weights(opt);
    const std::vector<PartTemplate> templates = resolve_templates(opt);

    PyramidConfig dense;
    dense.scale_factor = opt.dense_scale_factor;
    dense.min_face = opt.min_face;
    dense.extra_layer = false;

    PyramidConfig sparse = pyramid_config(opt);

    std::vector<AnnotatedImage> annotations;
    if (!opt.annotations.empty())
        annotations = load_annotations(opt.annotations);

    const BenchReport report = bench_pyramids(opt.images, weights, dense, sparse,
                                              proposal_config(opt), templates, annotations,
                                              opt.iou_thresh, opt.repeats);
    for (const std::string& w : report.warnings)
        err << "warning: " << w << "\n";

    // human-readable table
    out << "config   levels  workload      set_ms    ms/image  images\n";
    for (const BenchConfigReport* cfg : {&report.dense, &report.sparse}) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-8s %6d  %-12llu %9.3f  %9.3f  %zu\n",
                      cfg->label.c_str(), cfg->total_levels,
                      static_cast<unsigned long long>(cfg->workload), cfg->set_ms,
                      cfg->mean_image_ms, cfg->images.size());
        out << line;
        if (cfg->eval) {
            char eline[128];
            std::snprintf(eline, sizeof(eline), "  %s recall %.4f precision %.4f\n",
                          cfg->label.c_str(), cfg->eval->recall, cfg->eval->precision);
            out << eline;
        }
    }
    char ratio[96];
    std::snprintf(ratio, sizeof(ratio), "workload ratio sparse/dense: %.6f\n",
                  report.workload_ratio);
    out << ratio;

    const std::string records = bench_machine_records(report, opt.iou_thresh);
    if (!opt.output.empty())
        write_output(opt, records, out);
    else
        out << records;
    return kExitOk;
}

int cmd_eval(const Options& opt, std::ostream& out, std::ostream&) {
    std::ifstream det_file(opt.detections);
    if (!det_file)
        throw ImageError(ImageError::Kind::Io, "cannot open detection file: " + opt.detections);

    std::map<std::string, std::vector<BBox>> detections;
    std::string line;
    int line_no = 0;
    while (std::getline(det_file, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields(line);
        std::string path;
        BBox box;
        if (!(fields >> path >> box.x1 >> box.y1 >> box.x2 >> box.y2 >> box.score))
            throw ParseError(line_no, "expected '<path> x1 y1 x2 y2 score [source]'");
        fields >> box.source; // optional
        detections[path].push_back(box);
    }

    const std::vector<AnnotatedImage> annotations = load_annotations(opt.annotations);

    int tp = 0, fp = 0, truths = 0, dets = 0;
    for (const AnnotatedImage& ann : annotations) {
        const auto it = detections.find(ann.path);
        const std::vector<BBox> image_dets = it == detections.end() ? std::vector<BBox>{} : it->second;
        const EvalReport r = evaluate(image_dets, ann.boxes, opt.iou_thresh);
        char rec[512];
        std::snprintf(rec, sizeof(rec), "image path=%s tp=%d fp=%d truth=%d recall=%.4f precision=%.4f\n",
                      ann.path.c_str(), r.true_positives, r.false_positives, r.truth_count,
                      r.recall, r.precision);
        out << rec;
        tp += r.true_positives;
        fp += r.false_positives;
        truths += r.truth_count;
        dets += r.detection_count;
        detections.erase(ann.path);
    }
    // detections for images absent from the annotations are false positives
    for (const auto& [path, boxes] : detections) {
        fp += static_cast<int>(boxes.size());
        dets += static_cast<int>(boxes.size());
    }

    const double recall = truths == 0 ? 1.0 : static_cast<double>(tp) / truths;
    const double precision = dets == 0 ? 1.0 : static_cast<double>(tp) / dets;
    char summary[256];
    std::snprintf(summary, sizeof(summary),
                  "total tp=%d fp=%d truth=%d recall=%.4f precision=%.4f iou_thresh=%.4f\n", tp,
                  fp, truths, recall, precision, opt.iou_thresh);
    out << summary;
    return kExitOk;
}

int cmd_synth(const Options& opt, std::ostream& out, std::ostream&) {
    const std::vector<PartTemplate> templates = resolve_templates(opt);
    const ProposalConfig prop_cfg = proposal_config(opt);
    const std::vector<LevelGeometry> levels =
        pyramid_geometry(opt.height, opt.width, pyramid_config(opt));

    int recovered = 0;
    std::string buffer;
    for (int s = 0; s < opt.scenes; ++s) {
        const std::uint64_t scene_seed = opt.seed + static_cast<std::uint64_t>(s);
        const GroundTruthScene scene =
            make_random_scene(scene_seed, opt.width, opt.height, levels, templates);
        const auto maps =
            plant_heatmaps(scene, levels, templates, opt.noise, scene_seed * 0x51ed2701ULL + 17);
        const auto proposals = generate_proposals(maps, templates, prop_cfg);
        const bool ok = scene_recovered(proposals, scene, opt.iou_thresh);
        if (ok)
            ++recovered;
        char line[128];
        std::snprintf(line, sizeof(line), "scene seed=%llu faces=%zu %s\n",
                      static_cast<unsigned long long>(scene_seed), scene.faces.size(),
                      ok ? "recovered" : "MISSED");
        buffer += line;
    }

    const double rate = opt.scenes == 0 ? 1.0 : static_cast<double>(recovered) / opt.scenes;
    const bool pass = rate >= opt.min_pass_rate;
    char summary[256];
    std::snprintf(summary, sizeof(summary),
                  "synth scenes=%d recovered=%d rate=%.4f iou_thresh=%.4f noise=%.3f required=%.4f %s\n",
                  opt.scenes, recovered, rate, opt.iou_thresh, opt.noise, opt.min_pass_rate,
                  pass ? "PASS" : "FAIL");
    buffer += summary;
    write_output(opt, buffer, out);
    return pass ? kExitOk : kExitCriterion;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Face proposal engine: sparse-pyramid multi-label proposal network"};
    app.require_subcommand(1);

    Options opt;

    CLI::App* detect_cmd = app.add_subcommand("detect", "Generate face proposals for images");
    detect_cmd->add_option("--config", opt.config, "Config file: key = value, flag names as keys");
    detect_cmd->add_option("--weights", opt.weights, "Weight file")->required();
    detect_cmd->add_option("--templates", opt.templates, "Part template file");
    detect_cmd->add_option("--output", opt.output, "Detection output file (default stdout)");
    detect_cmd->add_option("images", opt.images, "PPM/PGM images")->required();
    add_pyramid_flags(*detect_cmd, opt);
    add_proposal_flags(*detect_cmd, opt);

    CLI::App* bench_cmd = app.add_subcommand("bench", "Compare dense vs sparse pyramid configs");
    bench_cmd->add_option("--config", opt.config, "Config file: key = value, flag names as keys");
    bench_cmd->add_option("--weights", opt.weights, "Weight file")->required();
    bench_cmd->add_option("--templates", opt.templates, "Part template file");
    bench_cmd->add_option("--output", opt.output, "Machine-readable record file");
    bench_cmd->add_option("--annotations", opt.annotations, "Annotation file for recall/precision");
    bench_cmd->add_option("--iou-thresh", opt.iou_thresh, "Evaluation IoU threshold");
    bench_cmd->add_option("--dense-scale-factor", opt.dense_scale_factor,
                          "Baseline pyramid scale factor");
    bench_cmd->add_option("--repeats", opt.repeats, "Timed passes over the set (median taken)")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("images", opt.images, "PPM/PGM images")->required();
    add_pyramid_flags(*bench_cmd, opt);
    add_proposal_flags(*bench_cmd, opt);

    CLI::App* eval_cmd = app.add_subcommand("eval", "Score a detection file against annotations");
    eval_cmd->add_option("--config", opt.config, "Config file: key = value, flag names as keys");
    eval_cmd->add_option("--detections", opt.detections, "Detection file from 'detect'")
        ->required();
    eval_cmd->add_option("--annotations", opt.annotations, "Annotation file")->required();
    eval_cmd->add_option("--iou-thresh", opt.iou_thresh, "Match IoU threshold");

    CLI::App* synth_cmd = app.add_subcommand("synth", "Planted-heatmap recovery check");
    synth_cmd->add_option("--config", opt.config, "Config file: key = value, flag names as keys");
    synth_cmd->add_option("--scenes", opt.scenes, "Number of scenes")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", opt.seed, "Base seed");
    synth_cmd->add_option("--noise", opt.noise, "Background noise amplitude")
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--iou-thresh", opt.iou_thresh, "Recovery IoU threshold");
    synth_cmd->add_option("--min-pass-rate", opt.min_pass_rate, "Required recovered fraction");
    synth_cmd->add_option("--width", opt.width, "Scene width")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--height", opt.height, "Scene height")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--templates", opt.templates, "Part template file");
    synth_cmd->add_option("--output", opt.output, "Report file (default stdout)");
    add_pyramid_flags(*synth_cmd, opt);
    add_proposal_flags(*synth_cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        CLI::App* active = detect_cmd->parsed()  ? detect_cmd
                           : bench_cmd->parsed() ? bench_cmd
                           : eval_cmd->parsed()  ? eval_cmd
                                                 : synth_cmd;
        const std::set<std::string> file_keys = apply_config_file(*active, opt);
        auto given = [&](const std::string& flag, const std::string& key) {
            const CLI::Option* o = active->get_option_no_throw(flag);
            return (o != nullptr && o->count() > 0) || file_keys.count(key) > 0;
        };
        // bench/synth scan for small faces: they default to the accelerated
        // schedule unless told otherwise
        auto sparse_defaults = [&]() {
            if (!given("--scale-factor", "scale-factor"))
                opt.scale_factor = 0.25;
            if (!given("--min-face", "min-face"))
                opt.min_face = 10.0;
            if (!given("--extra-layer", "extra-layer"))
                opt.extra_layer = true;
        };

        if (detect_cmd->parsed())
            return cmd_detect(opt, out, err);
        if (bench_cmd->parsed()) {
            sparse_defaults();
            return cmd_bench(opt, out, err);
        }
        if (eval_cmd->parsed())
            return cmd_eval(opt, out, err);
        if (synth_cmd->parsed()) {
            sparse_defaults();
            if (!given("--iou-thresh", "iou-thresh"))
                opt.iou_thresh = 0.7;
            return cmd_synth(opt, out, err);
        }
        err << "error: no subcommand\n";
        return kExitUsage;
    } catch (const WeightsError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ImageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace fpnet::cli
