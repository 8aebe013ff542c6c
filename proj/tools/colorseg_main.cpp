// colorseg: segment images, evaluate predictions against ground truth, and
// generate synthetic test scenes.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "colorseg/eval.hpp"
#include "colorseg/image_io.hpp"
#include "colorseg/kernels.hpp"
#include "colorseg/pipeline.hpp"
#include "colorseg/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace colorseg;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string key, eq, value;
        std::istringstream ls(line);
        if (!(ls >> key)) continue;
        ls >> eq;
        if (eq == "=") {
            ls >> value;
        } else {
            value = eq;
        }
        if (value.empty()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": missing value for " + key);
        }
        try {
            if (key == "sigma0") cfg.sigma0 = std::stod(value);
            else if (key == "sigma_g") cfg.sigma_g = std::stod(value);
            else if (key == "delta_l") cfg.delta_l = std::stod(value);
            else if (key == "mu_b") cfg.mu_b = std::stod(value);
            else if (key == "a") cfg.a = std::stod(value);
            else if (key == "b") cfg.b = std::stod(value);
            else if (key == "f_r") cfg.f_r = std::stod(value);
            else if (key == "g_s") cfg.g_s = std::stod(value);
            else if (key == "radius") cfg.radius = std::stoi(value);
            else throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key " + key);
        } catch (const std::invalid_argument&) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": bad value for " + key);
        }
    }
}

json config_to_json(const PipelineConfig& cfg) {
    return json{{"sigma0", cfg.sigma0}, {"sigma_g", cfg.sigma_g}, {"delta_l", cfg.delta_l},
                {"mu_b", cfg.mu_b},     {"a", cfg.a},             {"b", cfg.b},
                {"f_r", cfg.f_r},       {"g_s", cfg.g_s},         {"radius", cfg.radius}};
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << "\n";
}

// ---- segment ----

struct SegmentArgs {
    std::string input;
    std::string output;
    std::string report_path;
    std::string preset = "selected-sfu";
    std::string config_file;
    std::string kernel = "auto";
    PipelineConfig overrides;
    bool has_sigma0 = false, has_sigma_g = false, has_delta_l = false, has_mu_b = false;
    bool has_a = false, has_b = false, has_fr = false, has_gs = false, has_radius = false;
};

int run_segment(const SegmentArgs& args) {
    const auto& presets = config_presets();
    const auto preset_it = presets.find(args.preset);
    if (preset_it == presets.end()) throw ConfigError("unknown preset: " + args.preset);
    PipelineConfig cfg = preset_it->second;
    if (!args.config_file.empty()) apply_config_file(cfg, args.config_file);
    if (args.has_sigma0) cfg.sigma0 = args.overrides.sigma0;
    if (args.has_sigma_g) cfg.sigma_g = args.overrides.sigma_g;
    if (args.has_delta_l) cfg.delta_l = args.overrides.delta_l;
    if (args.has_mu_b) cfg.mu_b = args.overrides.mu_b;
    if (args.has_a) cfg.a = args.overrides.a;
    if (args.has_b) cfg.b = args.overrides.b;
    if (args.has_fr) cfg.f_r = args.overrides.f_r;
    if (args.has_gs) cfg.g_s = args.overrides.g_s;
    if (args.has_radius) cfg.radius = args.overrides.radius;

    try {
        cfg.validate();
        kernels::select(args.kernel);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }

    const Image<Rgb8> image = read_image_rgb8(args.input);
    const SegmentationResult result = segment_image(image, cfg);
    write_label_map(args.output, result.labels);

    if (!args.report_path.empty()) {
        json stages = json::array();
        for (const StageRecord& s : result.report.stages) {
            stages.push_back({{"step", s.step},
                              {"name", s.name},
                              {"rank", s.rank},
                              {"threshold", s.threshold},
                              {"merges", s.merges},
                              {"u_total", s.u_total},
                              {"rms", s.rms},
                              {"segments", s.segments}});
        }
        const json report = {{"type", "segment-report"},
                             {"input", args.input},
                             {"label_map", args.output},
                             {"width", result.report.width},
                             {"height", result.report.height},
                             {"kernel", result.report.kernel},
                             {"config", config_to_json(cfg)},
                             {"stages", stages},
                             {"final_segments", result.report.final_segments},
                             {"wall_ms", result.report.wall_ms}};
        write_json(args.report_path, report);
    }
    std::cerr << "segmented " << args.input << ": " << result.report.final_segments << " segments in "
              << result.report.wall_ms << " ms\n";
    return 0;
}

// ---- eval ----

struct EvalArgs {
    std::string pred_dir;
    std::string gt_dir;
    std::string output;
};

std::vector<Image<std::uint8_t>> load_shadow_masks(const fs::path& gt_dir, const std::string& stem) {
    std::vector<std::pair<int, fs::path>> found;
    const std::string prefix = stem + ".shadow.";
    for (const auto& entry : fs::directory_iterator(gt_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > prefix.size() + 4 && name.compare(0, prefix.size(), prefix) == 0 &&
            name.compare(name.size() - 4, 4, ".png") == 0) {
            const std::string num = name.substr(prefix.size(), name.size() - prefix.size() - 4);
            if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos) {
                found.emplace_back(std::stoi(num), entry.path());
            }
        }
    }
    std::sort(found.begin(), found.end());
    std::vector<Image<std::uint8_t>> masks;
    masks.reserve(found.size());
    for (const auto& [num, path] : found) masks.push_back(read_mask(path.string()));
    return masks;
}

unsigned eval_thread_count() {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("COLORSEG_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) threads = std::min(threads, static_cast<unsigned>(cap));
    }
    return threads;
}

int run_eval(const EvalArgs& args) {
    if (!fs::is_directory(args.pred_dir)) throw IoError("not a directory: " + args.pred_dir);
    if (!fs::is_directory(args.gt_dir)) throw IoError("not a directory: " + args.gt_dir);

    std::vector<std::string> stems;
    std::vector<std::string> skipped;
    for (const auto& entry : fs::directory_iterator(args.pred_dir)) {
        if (entry.path().extension() != ".png") continue;
        const std::string stem = entry.path().stem().string();
        if (fs::exists(fs::path(args.gt_dir) / (stem + ".png"))) {
            stems.push_back(stem);
        } else {
            skipped.push_back(stem);
            std::cerr << "warning: no ground truth for " << stem << ", skipped\n";
        }
    }
    std::sort(stems.begin(), stems.end());
    std::sort(skipped.begin(), skipped.end());
    if (stems.empty()) throw IoError("no evaluable prediction/ground-truth pairs");

    std::vector<ImageMatchResult> results(stems.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const unsigned threads = std::min<std::size_t>(eval_thread_count(), stems.size());

    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= stems.size()) return;
            try {
                GroundTruth gt;
                gt.labels = read_gt_labels((fs::path(args.gt_dir) / (stems[i] + ".png")).string());
                gt.shadow_masks = load_shadow_masks(args.gt_dir, stems[i]);
                const LabelMap pred =
                    read_label_map((fs::path(args.pred_dir) / (stems[i] + ".png")).string());
                results[i] = match_shadow_first(gt, pred);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(stems.size());
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    const DatasetScore score = dataset_score(results);
    json images = json::array();
    for (std::size_t i = 0; i < stems.size(); ++i) {
        const ImageMatchResult& r = results[i];
        json pairs = json::array();
        for (const MatchEntry& e : r.pairs) {
            pairs.push_back({{"gt", e.gt_id}, {"out", e.out_id}, {"iou", e.iou}, {"shadow", e.shadow}});
        }
        images.push_back({{"stem", stems[i]},
                          {"k_total", r.k_total},
                          {"miou", r.miou},
                          {"literal_sum", r.literal_sum},
                          {"pairs", pairs},
                          {"unmatched_gt", r.unmatched_gt},
                          {"unmatched_shadow", r.unmatched_shadow}});
    }
    const json report = {{"type", "eval-report"},
                         {"images", images},
                         {"skipped", skipped},
                         {"dataset",
                          {{"miou", score.miou},
                           {"literal_sum", score.literal_sum},
                           {"k_total", score.k_total},
                           {"matched", score.matched},
                           {"images", stems.size()}}}};
    write_json(args.output, report);
    std::cerr << "dataset-mIoU " << score.miou << " over " << stems.size() << " images (" << score.matched
              << "/" << score.k_total << " segments matched)\n";
    return 0;
}

// ---- synth ----

struct SynthArgs {
    std::string kind = "mondrian-rank0";
    std::string output;
    std::string gt_output;
    SynthSceneSpec spec;
};

int run_synth(SynthArgs& args) {
    try {
        args.spec.kind = scene_kind_from_string(args.kind);
        args.spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const SynthScene scene = generate_scene(args.spec);
    write_image_rgb8(args.output, scene.image);
    if (!args.gt_output.empty()) write_gt_labels(args.gt_output, scene.gt_labels);
    std::cerr << "wrote " << to_string(args.spec.kind) << " scene to " << args.output << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Physics-based linear colour segmentation"};
    app.require_subcommand(1);

    SegmentArgs seg;
    CLI::App* segment = app.add_subcommand("segment", "Segment an image into uniformly coloured regions");
    segment->add_option("input", seg.input, "8-bit RGB PNG or PPM image")->required();
    segment->add_option("-o,--output", seg.output, "Output label map (16-bit PNG)")->required();
    segment->add_option("--report", seg.report_path, "Write a JSON run report");
    segment->add_option("--preset", seg.preset, "Parameter preset: selected-sfu, iitp-close, iitp-diffuse");
    segment->add_option("--config", seg.config_file, "Key-value config file overriding the preset");
    segment->add_option("--kernel", seg.kernel, "Kernel flavour: auto, scalar, avx2");
    segment->add_option("--sigma0", seg.overrides.sigma0, "Rank-0 merge threshold (0-255)")
        ->each([&](const std::string&) { seg.has_sigma0 = true; });
    segment->add_option("--sigma-g", seg.overrides.sigma_g, "Isolation divergence threshold")
        ->each([&](const std::string&) { seg.has_sigma_g = true; });
    segment->add_option("--delta-l", seg.overrides.delta_l, "L/T-shape distance threshold (0-255)")
        ->each([&](const std::string&) { seg.has_delta_l = true; });
    segment->add_option("--mu-b", seg.overrides.mu_b, "Off-scale brightness threshold (0-255, original space)")
        ->each([&](const std::string&) { seg.has_mu_b = true; });
    segment->add_option("--homography-a", seg.overrides.a, "Saturation-transfer parameter, 0 <= a <= 1")
        ->each([&](const std::string&) { seg.has_a = true; });
    segment->add_option("--homography-b", seg.overrides.b, "Brightness compression, (2a+1)/3 < b <= 1")
        ->each([&](const std::string&) { seg.has_b = true; });
    segment->add_option("--fr", seg.overrides.f_r, "Bilateral range sigma (0-255)")
        ->each([&](const std::string&) { seg.has_fr = true; });
    segment->add_option("--gs", seg.overrides.g_s, "Bilateral spatial sigma (pixels)")
        ->each([&](const std::string&) { seg.has_gs = true; });
    segment->add_option("--radius", seg.overrides.radius, "Bilateral window radius; 0 = ceil(2 g_s) capped at 16")
        ->each([&](const std::string&) { seg.has_radius = true; });

    EvalArgs ev;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Score predictions against ground-truth label maps");
    eval_cmd->add_option("--pred", ev.pred_dir, "Directory of predicted label maps")->required();
    eval_cmd->add_option("--gt", ev.gt_dir, "Directory of ground-truth label maps and shadow masks")->required();
    eval_cmd->add_option("-o,--output", ev.output, "Output JSON report")->required();

    SynthArgs sy;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scene with ground truth");
    synth->add_option("--kind", sy.kind,
                      "mondrian-rank0, shaded-rank1, dichromatic-rank2, offscale-stripe");
    synth->add_option("-o,--output", sy.output, "Output image (PNG or PPM)")->required();
    synth->add_option("--gt", sy.gt_output, "Ground-truth label map output (16-bit PNG)");
    synth->add_option("--width", sy.spec.width, "Image width");
    synth->add_option("--height", sy.spec.height, "Image height");
    synth->add_option("--segments", sy.spec.segments, "Patch / band count");
    synth->add_option("--noise", sy.spec.noise_sigma, "Additive Gaussian noise sigma (0-255)");
    synth->add_option("--seed", sy.spec.seed, "Scene seed (bit-exact reproduction)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (segment->parsed()) return run_segment(seg);
        if (eval_cmd->parsed()) return run_eval(ev);
        if (synth->parsed()) return run_synth(sy);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
