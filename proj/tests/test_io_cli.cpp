#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "colorseg/image_io.hpp"
#include "colorseg/rng.hpp"
#include "colorseg/synth.hpp"
#include "support/schema_check.hpp"

using namespace colorseg;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "colorseg_io_test";
    fs::create_directories(dir);
    return dir;
}

std::string cli_path() {
    const char* env = std::getenv("COLORSEG_CLI");
    return env ? env : "";
}

int run_cli(const std::string& args) {
    const int status = std::system((cli_path() + " " + args + " 2>/dev/null").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<char> slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

nlohmann::json load_json(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("rgb8 png round trip") {
    Rng rng(1);
    Image<Rgb8> img(23, 17);
    for (auto& p : img.data) {
        p = {static_cast<std::uint8_t>(rng.uniform_int(256)), static_cast<std::uint8_t>(rng.uniform_int(256)),
             static_cast<std::uint8_t>(rng.uniform_int(256))};
    }
    const fs::path path = temp_dir() / "roundtrip.png";
    write_image_rgb8(path.string(), img);
    CHECK(read_image_rgb8(path.string()) == img);
}

TEST_CASE("rgb8 ppm round trip") {
    Rng rng(2);
    Image<Rgb8> img(9, 5);
    for (auto& p : img.data) {
        p = {static_cast<std::uint8_t>(rng.uniform_int(256)), static_cast<std::uint8_t>(rng.uniform_int(256)),
             static_cast<std::uint8_t>(rng.uniform_int(256))};
    }
    const fs::path path = temp_dir() / "roundtrip.ppm";
    write_image_rgb8(path.string(), img);
    CHECK(read_image_rgb8(path.string()) == img);
}

TEST_CASE("label map round trip is bit-identical, including wide labels") {
    Rng rng(3);
    LabelMap labels(31, 12);
    for (auto& l : labels.data) l = rng.uniform_int(5000);
    labels[0] = 0;
    labels[1] = 65534;
    const fs::path path = temp_dir() / "labels.png";
    write_label_map(path.string(), labels);
    CHECK(read_label_map(path.string()) == labels);

    const std::vector<char> first = slurp(path);
    write_label_map(path.string(), labels);
    CHECK(slurp(path) == first);  // deterministic encoder

    LabelMap bad(2, 2, 70000);
    CHECK_THROWS_AS(write_label_map((temp_dir() / "bad.png").string(), bad), IoError);
}

TEST_CASE("ground-truth labels and masks round trip") {
    LabelMap gt(10, 10, 0);
    gt.at(3, 3) = 1;
    gt.at(4, 3) = 2;
    const fs::path path = temp_dir() / "gt.png";
    write_gt_labels(path.string(), gt);
    CHECK(read_gt_labels(path.string()) == gt);

    Image<std::uint8_t> mask(10, 10, 0);
    mask.at(5, 5) = 255;
    mask.at(6, 5) = 200;  // normalised to 255 on read
    const fs::path mpath = temp_dir() / "gt.shadow.0.png";
    write_mask(mpath.string(), mask);
    const Image<std::uint8_t> back = read_mask(mpath.string());
    CHECK(back.at(5, 5) == 255);
    CHECK(back.at(6, 5) == 255);
    CHECK(back.at(0, 0) == 0);
}

TEST_CASE("missing and malformed files raise IoError") {
    CHECK_THROWS_AS(read_image_rgb8("/nonexistent/nowhere.png"), IoError);
    const fs::path junk = temp_dir() / "junk.png";
    std::ofstream(junk) << "this is not a png";
    CHECK_THROWS_AS(read_image_rgb8(junk.string()), IoError);
    CHECK_THROWS_AS(read_label_map(junk.string()), IoError);
}

TEST_CASE("cli end-to-end: synth, segment, eval") {
    if (cli_path().empty()) {
        MESSAGE("COLORSEG_CLI not set; CLI cases skipped");
        return;
    }
    const fs::path dir = temp_dir() / "cli";
    fs::create_directories(dir / "pred");
    fs::create_directories(dir / "gt");

    const std::string img = (dir / "scene.png").string();
    const std::string gt = (dir / "gt" / "scene.png").string();
    CHECK(run_cli("synth --kind mondrian-rank0 --segments 4 --width 64 --height 64 --noise 3 --seed 5 -o " +
                  img + " --gt " + gt) == 0);
    CHECK(fs::exists(img));
    CHECK(fs::exists(gt));

    const std::string labels = (dir / "pred" / "scene.png").string();
    const std::string report = (dir / "report.json").string();
    CHECK(run_cli("segment " + img + " -o " + labels + " --report " + report +
                  " --sigma0 10 --sigma-g 1 --fr 10 --gs 1.5 --radius 2 --homography-b 1") == 0);
    CHECK(fs::exists(labels));

    const nlohmann::json rj = load_json(report);
    CHECK(rj["final_segments"].get<int>() == 4);
    // Flag overrides are echoed back in the report's config block.
    CHECK(rj["config"]["sigma0"].get<double>() == doctest::Approx(10.0));
    CHECK(rj["config"]["b"].get<double>() == doctest::Approx(1.0));
    CHECK(rj["config"]["f_r"].get<double>() == doctest::Approx(10.0));
    CHECK(rj["config"]["delta_l"].get<double>() == doctest::Approx(22.5));  // preset value kept
    const char* schema_dir = std::getenv("COLORSEG_SCHEMA_DIR");
    REQUIRE(schema_dir != nullptr);
    const auto errors =
        testing::schema_errors(load_json(fs::path(schema_dir) / "segment_report.schema.json"), rj);
    for (const auto& e : errors) MESSAGE(e);
    CHECK(errors.empty());

    // Predictions written by `segment` shift labels by one on disk; the
    // synthetic ground truth already starts at 1, so scoring them against
    // each other through the eval command must come out perfect.
    const std::string eval_report = (dir / "eval.json").string();
    CHECK(run_cli("eval --pred " + (dir / "pred").string() + " --gt " + (dir / "gt").string() + " -o " +
                  eval_report) == 0);
    const nlohmann::json ej = load_json(eval_report);
    CHECK(ej["dataset"]["miou"].get<double>() == doctest::Approx(1.0));
    const auto eval_errors =
        testing::schema_errors(load_json(fs::path(schema_dir) / "eval_report.schema.json"), ej);
    for (const auto& e : eval_errors) MESSAGE(e);
    CHECK(eval_errors.empty());
}

TEST_CASE("cli eval applies shadow-first matching on a mini dataset") {
    if (cli_path().empty()) {
        MESSAGE("COLORSEG_CLI not set; CLI cases skipped");
        return;
    }
    const fs::path dir = temp_dir() / "cli_shadow";
    fs::create_directories(dir / "pred");
    fs::create_directories(dir / "gt");

    // Ground truth: one annotated segment on the left, a shadow mask on the
    // right, unannotated elsewhere.
    LabelMap gt(16, 16, 0);
    Image<std::uint8_t> mask(16, 16, 0);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 6; ++x) gt.at(x, y) = 1;
        for (int x = 10; x < 16; ++x) mask.at(x, y) = 255;
    }
    write_gt_labels((dir / "gt" / "scene.png").string(), gt);
    write_mask((dir / "gt" / "scene.shadow.0.png").string(), mask);

    LabelMap pred(16, 16, 2);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 6; ++x) pred.at(x, y) = 0;
        for (int x = 10; x < 16; ++x) pred.at(x, y) = 1;
    }
    write_label_map((dir / "pred" / "scene.png").string(), pred);

    const std::string report = (dir / "eval.json").string();
    setenv("COLORSEG_THREADS", "1", 1);
    CHECK(run_cli("eval --pred " + (dir / "pred").string() + " --gt " + (dir / "gt").string() + " -o " +
                  report) == 0);
    unsetenv("COLORSEG_THREADS");
    const nlohmann::json ej = load_json(report);
    CHECK(ej["dataset"]["miou"].get<double>() == doctest::Approx(1.0));
    CHECK(ej["dataset"]["k_total"].get<int>() == 2);
    bool shadow_flagged = false, normal_flagged = false;
    for (const auto& pair : ej["images"][0]["pairs"]) {
        if (pair["shadow"].get<bool>()) shadow_flagged = true;
        if (!pair["shadow"].get<bool>()) normal_flagged = true;
    }
    CHECK(shadow_flagged);
    CHECK(normal_flagged);
}

TEST_CASE("cli failure modes use exit code 2") {
    if (cli_path().empty()) {
        MESSAGE("COLORSEG_CLI not set; CLI cases skipped");
        return;
    }
    const fs::path dir = temp_dir() / "cli_fail";
    fs::create_directories(dir / "empty");
    const std::string out = (dir / "out.png").string();
    CHECK(run_cli("segment /nonexistent.png -o " + out) == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(run_cli("segment") == 2);  // missing required arguments
    CHECK(run_cli("eval --pred " + (dir / "empty").string() + " --gt " + (dir / "empty").string() +
                  " -o " + (dir / "eval.json").string()) == 2);
    CHECK(run_cli("synth --kind voronoi -o " + (dir / "x.png").string()) == 2);
    const std::string img = (dir / "img.png").string();
    CHECK(run_cli("synth --kind mondrian-rank0 -o " + img) == 0);
    CHECK(run_cli("segment " + img + " -o " + out + " --homography-b 0.1") == 2);  // invalid config
    CHECK(run_cli("segment " + img + " -o " + out + " --preset nope") == 2);
}
