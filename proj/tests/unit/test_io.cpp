#include "helpers.hpp"

#include "mars/core/errors.hpp"
#include "mars/io/csv.hpp"
#include "mars/io/image_io.hpp"
#include "mars/io/scene_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mars;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / "mars_unit_io";
    fs::create_directories(dir);
    return dir / name;
}

const char *kMinimal = R"j({
  "domain": [0, 1],
  "subintegrands": ["2 * x"],
  "techniques": [{"name": "u", "density": {"type": "uniform"}, "cost": 1}],
  "overhead_cost": 1, "overhead_variance": 0
})j";

} // namespace

TEST(ProblemIo, CorpusFilesLoad) {
    for (const auto &name : test::corpus_names()) {
        const auto p = test::corpus(name);
        EXPECT_EQ(p.name(), name);
        EXPECT_GE(p.num_techniques(), 2u);
    }
}

TEST(ProblemIo, MissingIndicatorMeansFullCoverage) {
    const auto p = test::parse(kMinimal);
    EXPECT_EQ(p.num_techniques(), 1u);
    // the indicator defaults to every technique estimating every subintegrand
    EXPECT_TRUE(p.estimates(0, 0));
    EXPECT_NEAR(p.reference_integral(), 1, 1e-12);
}

TEST(ProblemIo, MalformedInputIsASchemaError) {
    EXPECT_THROW(test::parse("[]"), SchemaError);
    EXPECT_THROW(test::parse(R"j({"domain": [0, 1], "techniques": [], "overhead_cost": 0, "overhead_variance": 0})j"), SchemaError);
    EXPECT_THROW(test::parse(R"j({"domain": [0, 1], "subintegrands": ["x +"],
                                 "techniques": [{"density": {"type": "uniform"}, "cost": 1}], "overhead_cost": 0, "overhead_variance": 0})j"),
                 SchemaError);
    EXPECT_THROW(test::parse(R"j({"domain": [0, 1], "subintegrands": ["x"],
                                 "techniques": [{"density": {"type": "cauchy"}}], "overhead_cost": 0, "overhead_variance": 0})j"),
                 SchemaError);
    EXPECT_THROW(load_problem(test::data("does/not/exist.json")), SchemaError);
}

TEST(ProblemIo, InvalidProblemIsAValidationError) {
    // not covered by its only technique
    EXPECT_THROW(test::parse(R"j({"domain": [0, 1], "subintegrands": ["1"],
      "techniques": [{"density": {"type": "uniform", "lo": 0, "hi": 0.5}, "cost": 1}], "overhead_cost": 0, "overhead_variance": 0})j"),
                 ValidationError);
    // indicator leaves a subintegrand without technique
    EXPECT_THROW(test::parse(R"j({"domain": [0, 1], "subintegrands": ["1", "x"],
      "techniques": [{"density": {"type": "uniform"}, "cost": 1}], "indicator": [[1], [0]], "overhead_cost": 0, "overhead_variance": 0})j"),
                 ValidationError);
    EXPECT_THROW(test::parse(R"j({"domain": [0, 1], "subintegrands": ["x"],
      "techniques": [{"density": {"type": "uniform"}, "cost": 0}], "overhead_cost": 0, "overhead_variance": 0})j"),
                 ValidationError);
    EXPECT_THROW(test::parse(R"j({"domain": [1, 0], "subintegrands": ["x"],
      "techniques": [{"density": {"type": "uniform"}, "cost": 1}], "overhead_cost": 0, "overhead_variance": 0})j"),
                 ValidationError);
}

TEST(SceneIo, BundledScenesLoadAndValidate) {
    for (const char *name : {"analytic", "asymmetric"}) {
        const auto scene = load_scene(test::data(std::string("scenes/") + name + ".json"));
        EXPECT_EQ(scene.name(), name);
        EXPECT_GT(scene.emitter_length(), 0);
    }
}

TEST(SceneIo, RejectsBrokenScenes) {
    EXPECT_THROW(parse_scene(nlohmann::json::parse(R"j({"segments": [], "overhead_cost": 0, "overhead_variance": 0})j")), SchemaError);
    const auto base = R"j({
      "camera": {"position": [0, 0], "direction": 90, "fov": 60, "pixels": 8},
      "materials": {"m": {"type": "diffuse", "albedo": 0.5}},
      "segments": [{"from": [-1, 1], "to": [1, 1], "material": "%s", "radiance": 1}]
    })j";
    auto with = [&](const std::string &material) {
        std::string text = base;
        text.replace(text.find("%s"), 2, material);
        return nlohmann::json::parse(text);
    };
    EXPECT_NO_THROW(parse_scene(with("m")));
    EXPECT_THROW(parse_scene(with("unknown")), SchemaError);
    auto bad = with("m");
    bad["materials"]["m"]["albedo"] = 1.5;
    EXPECT_THROW(parse_scene(bad), ValidationError);
    bad = with("m");
    bad["segments"][0]["to"] = {-1, 1};
    EXPECT_THROW(parse_scene(bad), ValidationError);
    bad = with("m");
    bad["camera"]["pixels"] = 0;
    EXPECT_THROW(parse_scene(bad), SchemaError);
}

TEST(Pfm, RoundTripsSinglePrecisionValues) {
    const std::vector<double> values = {0, 1.5, -2, 3.25, 1e-3, 7};
    const auto path = scratch("roundtrip.pfm");
    write_pfm(path, values, 3, 2);
    const auto image = read_pfm(path);
    EXPECT_EQ(image.width, 3u);
    EXPECT_EQ(image.height, 2u);
    ASSERT_EQ(image.values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        EXPECT_EQ(image.values[i], static_cast<double>(static_cast<float>(values[i])));
}

TEST(Pfm, RejectsOtherFormats) {
    const auto path = scratch("color.pfm");
    std::ofstream(path) << "PF\n1 1\n-1\n";
    EXPECT_THROW(read_pfm(path), SchemaError);
}

TEST(Png, PreviewAndBudgetMapAreWritten) {
    const auto preview = scratch("preview.png");
    write_png_preview(preview, std::vector<double>{0, 0.5, 1, 2});
    EXPECT_GT(fs::file_size(preview), 0u);
    const auto scene = load_scene(test::data("scenes/analytic.json"));
    const auto map = scratch("budgets.png");
    write_budget_png(map, scene, {{scene.bounds(), {1, 0.5, 2}}}, {}, 32);
    EXPECT_GT(fs::file_size(map), 0u);
}

TEST(Csv, WritesHeaderAndRoundTripPrecision) {
    const auto path = scratch("table.csv");
    {
        CsvWriter csv(path, {"a", "b"});
        csv.row({0.1, 1.0 / 3});
        EXPECT_THROW(csv.row({1}), ContractViolation);
    }
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "a,b");
    std::istringstream fields(row);
    std::string a, b;
    std::getline(fields, a, ',');
    std::getline(fields, b, ',');
    EXPECT_EQ(std::stod(a), 0.1);
    EXPECT_EQ(std::stod(b), 1.0 / 3);
    EXPECT_EQ(beta_columns(2), (std::vector<std::string>{"beta_1", "beta_2"}));
}
