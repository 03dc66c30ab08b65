#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "oraclenet/manifest.hpp"
#include "oraclenet/svg.hpp"
#include "test_util.hpp"

using namespace oraclenet;
using oraclenet::test::cfg;

namespace {

int count(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST(Svg, TwoPointPathIsOneSegment) {
    const auto env = Environment::gridworld(100, {Circle{{50, 50}, 10}});
    const auto svg = render_svg(env, {{cfg({10, 10}), cfg({90, 20})}});
    EXPECT_EQ(count(svg, "class=\"edge\""), 1);
    EXPECT_EQ(count(svg, "class=\"obstacle\""), 1);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Svg, EndpointMarkersAreRedAndGreen) {
    const auto env = Environment::gridworld(100);
    const auto svg = render_svg(env, {{cfg({0, 0}), cfg({50, 50}), cfg({100, 100})}});
    const std::regex start(R"re(<circle class="start" cx="([0-9.]+)" cy="([0-9.]+)"[^>]*fill="#d62728")re");
    const std::regex goal(R"re(<circle class="goal" cx="([0-9.]+)" cy="([0-9.]+)"[^>]*fill="#2ca02c")re");
    std::smatch m;
    ASSERT_TRUE(std::regex_search(svg, m, start));
    // The y axis points up: (0, 0) lands at the bottom-left corner.
    EXPECT_DOUBLE_EQ(std::stod(m[1]), 0.0);
    EXPECT_DOUBLE_EQ(std::stod(m[2]), 600.0);
    ASSERT_TRUE(std::regex_search(svg, m, goal));
    EXPECT_DOUBLE_EQ(std::stod(m[1]), 600.0);
    EXPECT_DOUBLE_EQ(std::stod(m[2]), 0.0);
    EXPECT_EQ(count(svg, "class=\"edge\""), 2);
}

TEST(Svg, ArmDrawsOnePosePerWaypoint) {
    const auto env = Environment::planar_arm({1, 1, 1}, {Circle{{1.8, 1.6}, 0.45}});
    const Path p{cfg({0, 0, 0}), cfg({0.5, 0.1, 0.1}), cfg({1.0, 0.2, 0.2}), cfg({1.5, 0.3, 0.3})};
    const auto svg = render_svg(env, {p});
    EXPECT_EQ(count(svg, "<polyline"), 4);
    EXPECT_EQ(count(svg, "class=\"arm start\""), 1);
    EXPECT_EQ(count(svg, "class=\"arm goal\""), 1);
    // Base plus three joints per pose.
    const std::regex pts(R"re(points="([^"]*)")re");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), pts); it != std::sregex_iterator(); ++it) {
        std::istringstream in((*it)[1].str());
        std::string tok;
        int n = 0;
        while (in >> tok) ++n;
        EXPECT_EQ(n, 4);
    }
}

TEST(Svg, Deterministic) {
    const auto env = load_environment(oraclenet::test::data_file("difficult4.json"));
    const std::vector<Path> paths{{cfg({1, 1}), cfg({2, 3})}, {cfg({5, 5}), cfg({6, 7}), cfg({8, 8})}};
    EXPECT_EQ(render_svg(env, paths), render_svg(env, paths));
}

TEST(Manifest, RoundTrip) {
    RunManifest m;
    m.command = "train";
    m.env_hash = "0123456789abcdef";
    m.seeds = {{"dataset", 42}, {"init", 18446744073709551615ull}};
    m.parameters = {{"epochs", "50"}, {"lr", "0.001"}};
    m.started_utc = "2024-01-01T00:00:00Z";
    m.finished_utc = "2024-01-01T00:00:05Z";
    const auto back = RunManifest::from_json(m.to_json());
    EXPECT_EQ(back.command, m.command);
    EXPECT_EQ(back.env_hash, m.env_hash);
    EXPECT_EQ(back.seeds, m.seeds);
    EXPECT_EQ(back.parameters, m.parameters);
    EXPECT_EQ(back.tool_version, tool_version());
    EXPECT_EQ(back.started_utc, m.started_utc);
    EXPECT_EQ(back.finished_utc, m.finished_utc);
    EXPECT_EQ(back.to_json(), m.to_json());
    EXPECT_THROW((void)RunManifest::from_json("[1, 2"), FormatError);
}

TEST(Manifest, WrittenNextToArtifact) {
    const auto dir = std::filesystem::temp_directory_path() / "oraclenet_manifest_test";
    std::filesystem::create_directories(dir);
    const auto artifact = (dir / "thing.bin").string();
    RunManifest m;
    m.command = "dataset";
    m.started_utc = m.finished_utc = utc_now_iso8601();
    write_manifest(artifact, m);
    std::ifstream in(artifact + ".manifest.json");
    ASSERT_TRUE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(RunManifest::from_json(ss.str()).command, "dataset");
    EXPECT_TRUE(std::regex_match(m.started_utc, std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)")));
    std::filesystem::remove_all(dir);
}
