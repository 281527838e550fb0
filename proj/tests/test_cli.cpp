#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <algorithm>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "rbepwt/analysis.hpp"
#include "rbepwt/container.hpp"

using namespace rbepwt;
using namespace rbepwt::testing;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int code;
    std::string out;
    std::string err;
};

CmdResult rbepwt_cmd(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("rbepwt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string cartoon() const { return (fs::path(RBEPWT_DATA_DIR) / "cartoon64.pgm").string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SegmentCartoon) {
    const CmdResult r = rbepwt_cmd({"segment", cartoon(), "--sigma", "0", "-o", path("c.seg")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("regions: 4\n"), std::string::npos);
    EXPECT_NE(r.out.find("perimeter: "), std::string::npos);
    EXPECT_EQ(load_label_map(path("c.seg")).region_count(), 4u);
}

TEST_F(CliTest, SegmentAcceptsPaperParameters) {
    const CmdResult r = rbepwt_cmd({"segment", cartoon(), "--k", "200", "--sigma", "2.0", "--min-size", "10", "-o", path("c.seg")});
    ASSERT_EQ(r.code, 0) << r.err;
    const LabelMap lm = load_label_map(path("c.seg"));
    EXPECT_NE(r.out.find("regions: " + std::to_string(lm.region_count())), std::string::npos);
    EXPECT_EQ(rbepwt_cmd({"segment", cartoon(), "-o", path("d.seg")}).out, r.out);
}

TEST_F(CliTest, UsageErrors) {
    const CmdResult missing = rbepwt_cmd({"segment", path("nope.pgm"), "-o", path("x.seg")});
    EXPECT_EQ(missing.code, cli::kUsageError);
    EXPECT_FALSE(missing.err.empty());
    EXPECT_EQ(rbepwt_cmd({}).code, cli::kUsageError);
    EXPECT_EQ(rbepwt_cmd({"encode", cartoon(), "--path", "easy", "-o", path("x.rbe")}).code, cli::kUsageError);
    EXPECT_EQ(rbepwt_cmd({"encode", cartoon(), "--path", "zigzag", "-o", path("x.rbe")}).code, cli::kUsageError);
}

TEST_F(CliTest, HaarRoundTripIsByteExact) {
    ASSERT_EQ(rbepwt_cmd({"segment", cartoon(), "--sigma", "0", "-o", path("c.seg")}).code, 0);
    for (const std::string mode : {"easy", "grad", "epwt"}) {
        std::vector<std::string> args{"encode", cartoon(), "--path", mode, "--wavelet", "haar", "-o", path("c.rbe")};
        if (mode != "epwt") args.insert(args.end(), {"--seg", path("c.seg")});
        ASSERT_EQ(rbepwt_cmd(args).code, 0);
        ASSERT_EQ(rbepwt_cmd({"decode", path("c.rbe"), "-o", path("c.pgm")}).code, 0);
        EXPECT_EQ(slurp(path("c.pgm")), slurp(cartoon())) << mode;
    }
}

TEST_F(CliTest, ThresholdThenMetrics) {
    ASSERT_EQ(rbepwt_cmd({"segment", cartoon(), "-o", path("c.seg")}).code, 0);
    ASSERT_EQ(rbepwt_cmd({"encode", cartoon(), "--seg", path("c.seg"), "-o", path("c.rbe")}).code, 0);
    ASSERT_EQ(rbepwt_cmd({"threshold", path("c.rbe"), "--keep", "512"}).code, 0);
    EXPECT_EQ(count_nonzero(load_encoded(path("c.rbe"))), 512u);
    ASSERT_EQ(rbepwt_cmd({"decode", path("c.rbe"), "-o", path("c.pgm")}).code, 0);
    const CmdResult m = rbepwt_cmd({"metrics", cartoon(), path("c.pgm"), "--encoded", path("c.rbe"), "--name", "cartoon", "--header"});
    ASSERT_EQ(m.code, 0) << m.err;
    std::istringstream lines(m.out);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    EXPECT_EQ(header, "image,mode,bank,n_coeffs,psnr_paper,psnr_std");
    EXPECT_EQ(row.rfind("cartoon,easy,cdf97,512,", 0), 0u) << row;
    EXPECT_EQ(row.find("inf"), std::string::npos);
    EXPECT_EQ(rbepwt_cmd({"threshold", path("c.rbe"), "--keep", "5000"}).code, cli::kPreconditionViolation);
}

TEST_F(CliTest, RoiRequiresHaar) {
    ASSERT_EQ(rbepwt_cmd({"segment", cartoon(), "--sigma", "0", "-o", path("c.seg")}).code, 0);
    ASSERT_EQ(rbepwt_cmd({"encode", cartoon(), "--seg", path("c.seg"), "--wavelet", "cdf97", "-o", path("c.rbe")}).code, 0);
    const CmdResult r = rbepwt_cmd({"roi", path("c.rbe"), "--roi-labels", "1", "--roi-frac", "0.1", "--rest-frac", "0.001"});
    EXPECT_EQ(r.code, cli::kPreconditionViolation);
    EXPECT_NE(r.err.find("Haar"), std::string::npos) << r.err;

    ASSERT_EQ(rbepwt_cmd({"encode", cartoon(), "--seg", path("c.seg"), "--wavelet", "haar", "-o", path("h.rbe")}).code, 0);
    const CmdResult ok = rbepwt_cmd({"roi", path("h.rbe"), "--roi-labels", "1,3", "--roi-frac", "0.10", "--rest-frac", "0.001", "-o", path("r.rbe")});
    ASSERT_EQ(ok.code, 0) << ok.err;
    EXPECT_EQ(ok.out, "nonzero: " + std::to_string(count_nonzero(load_encoded(path("r.rbe")))) + "\n");
    EXPECT_EQ(rbepwt_cmd({"roi", path("h.rbe"), "--roi-labels", "2", "--ancestors-only", "-o", path("a.rbe")}).code, 0);
    EXPECT_EQ(rbepwt_cmd({"roi", path("h.rbe"), "--roi-labels", "9", "--ancestors-only"}).code, cli::kPreconditionViolation);
}

TEST_F(CliTest, FormatErrors) {
    std::ofstream(path("junk.rbe"), std::ios::binary) << "XXXXnot a container";
    EXPECT_EQ(rbepwt_cmd({"decode", path("junk.rbe"), "-o", path("x.pgm")}).code, cli::kFormatError);
    std::ofstream(path("junk.pgm"), std::ios::binary) << "P7\n";
    EXPECT_EQ(rbepwt_cmd({"segment", path("junk.pgm"), "-o", path("x.seg")}).code, cli::kFormatError);
}

TEST_F(CliTest, BasisAndPathDump) {
    ASSERT_EQ(rbepwt_cmd({"encode", cartoon(), "--path", "epwt", "--wavelet", "haar", "--levels", "6", "-o", path("c.rbe")}).code, 0);
    ASSERT_EQ(rbepwt_cmd({"basis", path("c.rbe"), "--level", "3", "--index", "2", "-o", path("b.pgm")}).code, 0);
    EXPECT_EQ(load_image(path("b.pgm")).size(), 4096u);
    EXPECT_EQ(rbepwt_cmd({"basis", path("c.rbe"), "--level", "9", "--index", "0", "-o", path("b.pgm")}).code,
              cli::kPreconditionViolation);
    const CmdResult dump = rbepwt_cmd({"path-dump", path("c.rbe"), "--level", "6"});
    ASSERT_EQ(dump.code, 0);
    EXPECT_EQ(dump.out.rfind("step,row,col\n0,0,0\n", 0), 0u);
    EXPECT_EQ(std::count(dump.out.begin(), dump.out.end(), '\n'), 4097);
    ASSERT_EQ(rbepwt_cmd({"pathdump", path("c.rbe"), "--level", "1", "-o", path("p.csv")}).code, 0);
    const std::string csv = slurp(path("p.csv"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 128 + 1);
}
