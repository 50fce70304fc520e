#include "rtnrt/harness.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace rtnrt;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

ScenarioConfig tiny_concentric() {
    auto cfg = config_from_json(preset_config("concentric_disks"));
    cfg.omega.n = 96;
    cfg.obstacle.n = 64;
    cfg.sweep.radii = {0.2, 0.5, 0.8};
    cfg.sweep.domain_nodes = 48;
    cfg.grid_resolution = 0.05;
    return cfg;
}

} // namespace

TEST(Validate, WellFormedPresetsPass) {
    for (const auto& name : preset_names()) {
        const auto cfg = config_from_json(preset_config(name));
        const auto rep = validate(cfg);
        EXPECT_TRUE(rep.ok()) << name << ": " << (rep.violations.empty() ? "" : rep.violations[0]);
    }
}

TEST(Validate, ObstacleOutsideOmega) {
    auto cfg = tiny_concentric();
    cfg.obstacle.center = Vec2(0.9, 0.0);
    cfg.obstacle.radius = 0.3;
    const auto rep = validate(cfg);
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.violations[0].find("strictly inside"), std::string::npos);
}

TEST(Validate, IdenticallyZeroExcitationRejected) {
    auto cfg = tiny_concentric();
    cfg.excitation.preset.clear();
    cfg.excitation.fourier = {{1, {0.0, 0.0}}};
    const auto rep = validate(cfg);
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.violations[0].find("identically zero"), std::string::npos);
}

TEST(Validate, NonUnitOmegaRejected) {
    auto cfg = tiny_concentric();
    cfg.omega.radius = 2.0;
    EXPECT_FALSE(validate(cfg).ok());
}

TEST(Validate, OracleNeedsConcentricCircle) {
    auto cfg = tiny_concentric();
    cfg.obstacle.center = Vec2(0.1, 0.0);
    EXPECT_FALSE(validate(cfg).ok());
    cfg = tiny_concentric();
    cfg.obstacle.kind = "polygon";
    cfg.obstacle.vertices = {Vec2(-0.1, -0.1), Vec2(0.2, -0.1), Vec2(-0.1, 0.2)};
    EXPECT_FALSE(validate(cfg).ok());
}

TEST(Validate, PolygonHypothesesProduceWarningNotError) {
    // rational corner angles (right isoceles) and distance property violated
    auto cfg = config_from_json(preset_config("distance_triangle"));
    cfg.obstacle.vertices = {Vec2(-0.5, -0.5), Vec2(0.5, -0.5), Vec2(-0.5, 0.5)};
    cfg.sweep.template_vertices = cfg.obstacle.vertices;
    cfg.sweep.translation_extent = 0.0;
    cfg.sweep.scales = {1.0};
    cfg.method = Method::rt;
    const auto rep = validate(cfg);
    EXPECT_TRUE(rep.ok());
    ASSERT_FALSE(rep.warnings.empty());
    EXPECT_NE(rep.warnings[0].find("possibly rational"), std::string::npos);
}

TEST(Validate, ScheduleAndSweepChecks) {
    auto cfg = tiny_concentric();
    cfg.schedule.q = 1.5;
    EXPECT_FALSE(validate(cfg).ok());

    cfg = config_from_json(preset_config("distance_triangle"));
    cfg.sweep.d0.reset();
    cfg.method = Method::both;
    const auto rep = validate(cfg);
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.violations[0].find("d0"), std::string::npos);

    // inverse-crime guard warning
    cfg = tiny_concentric();
    cfg.data_source = "solver";
    cfg.omega.n = 128;
    cfg.sweep.domain_nodes = 64;
    const auto rep2 = validate(cfg);
    EXPECT_TRUE(rep2.ok());
    ASSERT_FALSE(rep2.warnings.empty());
    EXPECT_NE(rep2.warnings[0].find("inverse-crime"), std::string::npos);
}

TEST(ConfigIO, JsonRoundTripThroughFile) {
    const auto dir = ::testing::TempDir() + "rtnrt_cfg";
    fs::create_directories(dir);
    const std::string path = dir + "/cfg.json";
    {
        std::ofstream os(path);
        os << preset_config("offset_disk").dump(2);
    }
    const auto cfg = load_config(path);
    EXPECT_EQ(cfg.data_source, "solver");
    EXPECT_EQ(cfg.omega.n, 200);
    EXPECT_NEAR(cfg.obstacle.center.x(), 0.15, 1e-15);
    EXPECT_EQ(cfg.sweep.family, "disks");
    EXPECT_EQ(cfg.method, Method::both);
    EXPECT_EQ(cfg.sweep.radii.size(), 12u);
    fs::remove_all(dir);
}

TEST(RunScenario, OutputsExistAndReportIsConsistent) {
    const auto cfg = tiny_concentric();
    const auto dir = ::testing::TempDir() + "rtnrt_run";
    fs::remove_all(dir);
    const auto out = run_scenario(cfg, dir, 2);
    ASSERT_EQ(out.exit_code, 0);
    for (const auto& f : out.files) EXPECT_TRUE(fs::exists(f)) << f;
    EXPECT_TRUE(fs::exists(dir + "/cauchy.csv"));
    EXPECT_TRUE(fs::exists(dir + "/indicators.csv"));
    EXPECT_TRUE(fs::exists(dir + "/mask.pgm"));
    EXPECT_TRUE(fs::exists(dir + "/duality_report.json"));

    json rep;
    std::ifstream(dir + "/duality_report.json") >> rep;
    EXPECT_EQ(rep["classification_agreement"]["compared"], 3);
    EXPECT_EQ(rep["classification_agreement"]["equal"], 3);
    ASSERT_TRUE(rep.contains("green_identity"));
    EXPECT_LE(rep["green_identity"]["max_relative_difference"].get<double>(), 1e-7);
    fs::remove_all(dir);
}

TEST(RunScenario, ValidationFailureWritesErrorRecordAndExit2) {
    auto cfg = tiny_concentric();
    cfg.excitation.preset.clear(); // empty fourier map -> zero excitation
    const auto dir = ::testing::TempDir() + "rtnrt_bad";
    fs::remove_all(dir);
    const auto out = run_scenario(cfg, dir);
    EXPECT_EQ(out.exit_code, 2);
    EXPECT_TRUE(fs::exists(dir + "/validation_errors.json"));
    fs::remove_all(dir);
}

TEST(RunScenario, NoisySeededRunsAreByteIdentical) {
    auto cfg = tiny_concentric();
    cfg.noise_level = 1e-3;
    cfg.seed = 7;
    const auto dir1 = ::testing::TempDir() + "rtnrt_n1";
    const auto dir2 = ::testing::TempDir() + "rtnrt_n2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    ASSERT_EQ(run_scenario(cfg, dir1, 3).exit_code, 0);
    ASSERT_EQ(run_scenario(cfg, dir2, 1).exit_code, 0);
    EXPECT_EQ(read_file(dir1 + "/cauchy.csv"), read_file(dir2 + "/cauchy.csv"));
    EXPECT_EQ(read_file(dir1 + "/indicators.csv"), read_file(dir2 + "/indicators.csv"));
    EXPECT_EQ(read_file(dir1 + "/mask.pgm"), read_file(dir2 + "/mask.pgm"));
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST(RunOracle, EmitsCauchyCsvOnlyForOracleConfigs) {
    const auto dir = ::testing::TempDir() + "rtnrt_oracle";
    fs::remove_all(dir);
    EXPECT_EQ(run_oracle(tiny_concentric(), dir), 0);
    EXPECT_TRUE(fs::exists(dir + "/cauchy.csv"));
    auto cfg = tiny_concentric();
    cfg.data_source = "solver";
    EXPECT_EQ(run_oracle(cfg, dir), 2);
    fs::remove_all(dir);
}

TEST(Excitation, PresetsAndFourierForms) {
    const auto omega = make_circle(Vec2(0, 0), 1.0, 64);
    ExcitationSpec cos_spec;
    cos_spec.preset = "cos_theta";
    const VecX f1 = cos_spec.samples(omega);
    EXPECT_NEAR(f1(0), 1.0, 1e-15);
    EXPECT_NEAR(f1(16), 0.0, 1e-14);

    ExcitationSpec entire;
    entire.preset = "entire";
    const VecX f2 = entire.samples(omega);
    for (std::size_t j = 0; j < omega.size(); ++j) {
        const double t = omega.params[j];
        EXPECT_NEAR(f2(j), std::exp(std::cos(t)) * std::cos(std::sin(t)), 1e-12);
    }

    ExcitationSpec bad;
    bad.preset = "unknown";
    EXPECT_THROW(bad.samples(omega), parameter_error);
}
