#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using urt::cli::run;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("urt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        write("centred.scene", "blob cx=0 cy=0 sigma=1 amp_re=1 amp_im=0 mask=none\n");
        write("offset.scene", "blob cx=0.9 cy=-0.6 sigma=0.8 amp_re=1 amp_im=0 mask=none\n");
        write("holonomy.scene", "blob cx=1.5 cy=1.5 sigma=0.5 mask=I\nblob cx=-1.5 cy=-1.5 sigma=0.5 mask=III\n");
        write("defect.scene",
              "blob cx=1.5 cy=0.5 sigma=0.5 mask=I\n"
              "blob cx=1 cy=1 sigma=0.5 mask=I\nblob cx=-1 cy=-1 sigma=0.5 mask=I\n"
              "blob cx=1 cy=1 sigma=0.5 mask=III\nblob cx=-1 cy=-1 sigma=0.5 mask=III\n");
    }
    void TearDown() override { fs::remove_all(dir); }

    void write(const std::string& name, const std::string& text) { std::ofstream(dir / name) << text; }
    std::string path(const std::string& name) const { return (dir / name).string(); }

    int cli(std::vector<std::string> args) {
        out.str("");
        err.str("");
        return run(args, out, err);
    }

    std::map<std::string, std::string> metrics(const std::string& name) const {
        std::ifstream in(dir / name);
        std::map<std::string, std::string> m;
        std::string line;
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            m[line.substr(0, comma)] = line.substr(comma + 1);
        }
        return m;
    }

    fs::path dir;
    std::ostringstream out, err;
};

} // namespace

TEST_F(CliTest, PhantomWritesImage) {
    EXPECT_EQ(cli({"phantom", "--scene", path("centred.scene"), "--nx", "64", "--ny", "64", "--extent", "8", "--out",
                   path("img.urdn")}),
              0)
        << err.str();
    EXPECT_TRUE(fs::exists(dir / "img.urdn"));
    EXPECT_TRUE(fs::exists(dir / "img.urdn.manifest.txt"));
}

TEST_F(CliTest, MissingSceneIsFormatError) {
    EXPECT_EQ(cli({"phantom", "--scene", path("nope.scene"), "--out", path("img.urdn")}), 3);
}

TEST_F(CliTest, BadArgumentsExitTwo) {
    EXPECT_EQ(cli({}), 2);
    EXPECT_EQ(cli({"radon", "--in"}), 2);
    EXPECT_EQ(cli({"phantom", "--scene", path("centred.scene"), "--nx", "zero", "--out", path("x.urdn")}), 2);
    EXPECT_EQ(cli({"phantom", "--scene", path("centred.scene"), "--slices", "4", "--out", path("x.urdn")}), 2);
    ASSERT_EQ(cli({"phantom", "--scene", path("centred.scene"), "--nx", "32", "--out", path("img.urdn")}), 0);
    EXPECT_EQ(cli({"radon", "--in", path("img.urdn"), "--out", path("s.urdn"), "--range", "1:x"}), 2);
    EXPECT_EQ(cli({"radon", "--in", path("img.urdn"), "--out", path("s.urdn"), "--range", "2:1"}), 2);
}

TEST_F(CliTest, VolumeStack) {
    EXPECT_EQ(cli({"phantom", "--scene", path("centred.scene"), "--nx", "16", "--slices", "8", "--x3", "-3.5:1.0",
                   "--out", path("vol.urdn")}),
              0)
        << err.str();
    EXPECT_TRUE(fs::exists(dir / "vol.urdn"));
}

TEST_F(CliTest, InvertFullAndHalfRange) {
    ASSERT_EQ(cli({"phantom", "--scene", path("offset.scene"), "--nx", "64", "--out", path("img.urdn")}), 0);
    ASSERT_EQ(cli({"radon", "--in", path("img.urdn"), "--out", path("sino.urdn"), "--n-phi", "120"}), 0);
    ASSERT_EQ(cli({"invert", "--sino", path("sino.urdn"), "--like", path("img.urdn"), "--backend", "ramp_filter",
                   "--range", "0:6.2831853", "--reference", path("img.urdn"), "--out-prefix", path("full")}),
              0)
        << err.str();
    auto full = metrics("full_metrics.csv");
    EXPECT_LE(std::stod(full.at("fa_ratio")), 1e-3);
    EXPECT_LE(std::stod(full.at("rmse_rel_peak")), 0.03);
    EXPECT_TRUE(fs::exists(dir / "full_total.urdn"));
    EXPECT_TRUE(fs::exists(dir / "full_profile.csv"));

    ASSERT_EQ(cli({"invert", "--sino", path("sino.urdn"), "--like", path("img.urdn"), "--range", "0:3.1415927",
                   "--out-prefix", path("half")}),
              0)
        << err.str();
    EXPECT_GT(std::stod(metrics("half_metrics.csv").at("fa_ratio")), 1e-2);
}

TEST_F(CliTest, FstCheckPassAndMismatch) {
    ASSERT_EQ(cli({"phantom", "--scene", path("centred.scene"), "--nx", "128", "--out", path("a.urdn")}), 0);
    ASSERT_EQ(cli({"phantom", "--scene", path("offset.scene"), "--nx", "128", "--out", path("b.urdn")}), 0);
    ASSERT_EQ(cli({"radon", "--in", path("a.urdn"), "--out", path("sa.urdn"), "--n-phi", "8"}), 0);
    EXPECT_EQ(cli({"fst-check", "--image", path("a.urdn"), "--sino", path("sa.urdn"), "--n-lambda", "9",
                   "--lambda-max", "2", "--out", path("fst.txt")}),
              0)
        << out.str();
    EXPECT_EQ(cli({"fst-check", "--image", path("b.urdn"), "--sino", path("sa.urdn"), "--n-lambda", "9",
                   "--lambda-max", "2"}),
              1);
    EXPECT_NE(out.str().find("FAIL"), std::string::npos);
    EXPECT_NE(out.str().find("phi lambda abs_lhs abs_rhs rel_residual"), std::string::npos);
}

TEST_F(CliTest, HolonomyAndDefect) {
    EXPECT_EQ(cli({"holonomy", "--scene", path("holonomy.scene"), "--nx", "64", "--out", path("h.txt")}), 0);
    EXPECT_NE(out.str().find("holonomy nontrivial"), std::string::npos);
    EXPECT_EQ(cli({"defect", "--scene", path("defect.scene"), "--nx", "64", "--out-prefix", path("d")}), 0)
        << err.str();
    EXPECT_TRUE(fs::exists(dir / "d_defect.urdn"));
    EXPECT_TRUE(fs::exists(dir / "d_defect_total.urdn"));
    EXPECT_EQ(cli({"holonomy", "--scene", path("holonomy.scene"), "--nx", "64", "--phi", "0:3"}), 2);
    EXPECT_EQ(cli({"defect", "--scene", path("holonomy.scene"), "--nx", "64", "--out-prefix", path("e")}), 2);
}

TEST_F(CliTest, HybridTable) {
    ASSERT_EQ(cli({"phantom", "--scene", path("centred.scene"), "--nx", "32", "--slices", "4", "--x3", "-1.5:1",
                   "--out", path("vol.urdn")}),
              0);
    EXPECT_EQ(cli({"hybrid", "--volume", path("vol.urdn"), "--n-phi", "60", "--out-prefix", path("hy")}), 0)
        << err.str();
    EXPECT_NE(out.str().find("k fa_norm fs_norm ratio"), std::string::npos);
    EXPECT_LE(std::stod(metrics("hy_metrics.csv").at("series_roundtrip_max_error")), 1e-10);
}

TEST_F(CliTest, IdenticalRunsGiveIdenticalFiles) {
    ASSERT_EQ(cli({"phantom", "--scene", path("offset.scene"), "--nx", "48", "--out", path("img.urdn")}), 0);
    ASSERT_EQ(cli({"--threads", "1", "radon", "--in", path("img.urdn"), "--out", path("s1.urdn"), "--n-phi", "30"}), 0);
    ASSERT_EQ(cli({"--threads", "3", "radon", "--in", path("img.urdn"), "--out", path("s2.urdn"), "--n-phi", "30"}), 0);
    EXPECT_EQ(urt::cli::file_checksum(path("s1.urdn")), urt::cli::file_checksum(path("s2.urdn")));
    for (const char* prefix : {"r1", "r2"})
        ASSERT_EQ(cli({"invert", "--sino", path("s1.urdn"), "--like", path("img.urdn"), "--out-prefix", path(prefix)}), 0);
    for (const char* suffix : {"_fs.urdn", "_fa.urdn", "_total.urdn", "_metrics.csv"})
        EXPECT_EQ(urt::cli::file_checksum(path(std::string("r1") + suffix)),
                  urt::cli::file_checksum(path(std::string("r2") + suffix)));

    std::ifstream manifest(dir / "r1.manifest.txt");
    std::stringstream text;
    text << manifest.rdbuf();
    EXPECT_NE(text.str().find("fnv1a64="), std::string::npos);
    EXPECT_NE(text.str().find("version: urt"), std::string::npos);
}

TEST(FileChecksum, KnownVector) {
    const auto p = fs::temp_directory_path() / "urt_fnv.txt";
    std::ofstream(p) << "a";
    EXPECT_EQ(urt::cli::file_checksum(p.string()), "af63dc4c8601ec8c");
    fs::remove(p);
}
