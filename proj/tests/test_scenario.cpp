#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "gridsync/scenario.hpp"

using namespace gridsync;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    EXPECT_TRUE(in) << path;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ScenarioConfig grid400_config() {
    auto parsed = parse_scenario(read_file(std::string(GRIDSYNC_DATA_DIR) + "/grid400.cfg"),
                                 GRIDSYNC_DATA_DIR);
    EXPECT_TRUE(parsed.ok());
    for (const auto& e : parsed.errors) ADD_FAILURE() << e.line << ": " << e.message;
    return *parsed.config;
}

}  // namespace

TEST(ParseScenario, MinimalFileGetsDefaults) {
    auto parsed = parse_scenario("seed = 5\nduration_s = 1\n");
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(parsed.config->dt_ms, 100);
    EXPECT_EQ(parsed.config->seed, 5u);
    EXPECT_EQ(parsed.config->poles, 4);
    EXPECT_DOUBLE_EQ(parsed.config->grid_freq_Hz, 50.0);
    EXPECT_DOUBLE_EQ(parsed.config->tolerances.speed_tol_rpm, 2.0);
}

TEST(ParseScenario, ZeroDtIsRangeErrorNamingKey) {
    auto parsed = parse_scenario("dt_ms = 0\n");
    ASSERT_FALSE(parsed.ok());
    ASSERT_EQ(parsed.errors.size(), 1u);
    EXPECT_EQ(parsed.errors[0].line, 1);
    EXPECT_NE(parsed.errors[0].message.find("dt_ms"), std::string::npos);
}

TEST(ParseScenario, UnknownKeyRejected) {
    auto parsed = parse_scenario("seed = 1\nfoo_bar = 3\n");
    ASSERT_FALSE(parsed.ok());
    ASSERT_EQ(parsed.errors.size(), 1u);
    EXPECT_EQ(parsed.errors[0].line, 2);
    EXPECT_NE(parsed.errors[0].message.find("foo_bar"), std::string::npos);
}

TEST(ParseScenario, MalformedNumberReported) {
    auto parsed = parse_scenario("grid_freq_Hz = fifty\n");
    ASSERT_FALSE(parsed.ok());
    EXPECT_EQ(parsed.errors[0].line, 1);
}

TEST(ParseScenario, MissingTariffFileReported) {
    auto parsed = parse_scenario("grid_tariff_file = does_not_exist.txt\n");
    ASSERT_FALSE(parsed.ok());
}

TEST(ParseScenario, CustomTierTable) {
    auto parsed = parse_scenario("speed_tiers = 500:50,100:10,2:2\n");
    ASSERT_TRUE(parsed.ok());
    ASSERT_EQ(parsed.config->tiers.tiers.size(), 3u);
    EXPECT_DOUBLE_EQ(parsed.config->tiers.tiers[0].increment_rpm, 50.0);
}

TEST(ParseScenario, BadTierTableRejected) {
    auto parsed = parse_scenario("speed_tiers = 100:10,500:50\n");
    ASSERT_FALSE(parsed.ok());
    auto increasing = parse_scenario("speed_tiers = 500:10,100:50,2:2\n");
    ASSERT_FALSE(increasing.ok());
}

TEST(RunScenario, OneRecordPerTick) {
    auto parsed = parse_scenario("duration_s = 1\ndt_ms = 100\n");
    ASSERT_TRUE(parsed.ok());
    auto result = run_scenario(*parsed.config);
    EXPECT_EQ(result.records.size(), 10u);
    for (std::size_t i = 1; i < result.records.size(); ++i) {
        EXPECT_GT(result.records[i].time_ms, result.records[i - 1].time_ms);
    }
}

TEST(RunScenario, SameSeedByteIdenticalTraces) {
    ScenarioConfig cfg = grid400_config();
    cfg.grid_freq_jitter_Hz = 0.2;
    std::string a = export_trace(run_scenario(cfg).records);
    std::string b = export_trace(run_scenario(cfg).records);
    EXPECT_EQ(a, b);
}

TEST(RunScenario, DifferentSeedsDiverge) {
    ScenarioConfig cfg = grid400_config();
    cfg.grid_freq_jitter_Hz = 0.2;
    std::string a = export_trace(run_scenario(cfg).records);
    cfg.seed = cfg.seed + 1;
    std::string b = export_trace(run_scenario(cfg).records);
    EXPECT_NE(a, b);
}

TEST(RunScenario, Grid400SpeedConverges) {
    auto result = run_scenario(grid400_config());
    const auto& last = result.records.back();
    EXPECT_LE(std::abs(last.gen_speed_rpm - 400.0), 2.0);
    EXPECT_TRUE(result.safety_events.empty());
}

TEST(RunScenario, GoldenTraceRegression) {
    std::string golden = read_file(std::string(GRIDSYNC_TEST_DATA_DIR) + "/golden_trace.csv");
    std::string fresh = export_trace(run_scenario(grid400_config()).records);
    EXPECT_EQ(fresh, golden);
}
