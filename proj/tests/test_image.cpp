#include <gtest/gtest.h>

#include <sstream>

#include "rbepwt/error.hpp"
#include "rbepwt/image.hpp"

using namespace rbepwt;

namespace {

ErrorKind kind_of(const std::string& text) {
    std::istringstream in(text);
    try {
        read_pgm(in);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for: " << text;
    return ErrorKind::Io;
}

}  // namespace

TEST(Pgm, ReadsAsciiWithComment) {
    std::istringstream in("P2\n# comment\n2 2\n255\n0 64\n128 255\n");
    const GrayImage img = read_pgm(in);
    ASSERT_EQ(img.width(), 2u);
    ASSERT_EQ(img.height(), 2u);
    EXPECT_EQ(img.pixels(), (std::vector<double>{0, 64, 128, 255}));
}

TEST(Pgm, ReadsBinary) {
    std::string data = "P5\n1 1\n255\n";
    data.push_back('\x7F');
    std::istringstream in(data);
    const GrayImage img = read_pgm(in);
    EXPECT_EQ(img(0, 0), 127.0);
}

TEST(Pgm, RejectsMalformedInput) {
    EXPECT_EQ(kind_of("P5\n2 2\n255\nab"), ErrorKind::Format);
    EXPECT_EQ(kind_of("P3\n1 1\n255\n0"), ErrorKind::Format);
    EXPECT_EQ(kind_of("P2\n1 1\n65535\n0"), ErrorKind::Format);
    EXPECT_EQ(kind_of("P2\n2 1\n255\n0"), ErrorKind::Format);
    EXPECT_EQ(kind_of("P2\n1 1\n255\n300"), ErrorKind::Format);
}

TEST(Pgm, DiagnosticsAreDistinct) {
    auto message = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_pgm(in);
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("P2 3 3 255 1 2 3 4 5 6 7 8").find("truncated payload"), std::string::npos);
    EXPECT_NE(message("P2 1 1 15 0").find("unsupported maxval"), std::string::npos);
    EXPECT_NE(message("P2 x 1 255 0").find("malformed header"), std::string::npos);
}

TEST(Pgm, QuantizesOnWrite) {
    GrayImage img(3, 1, std::vector<double>{127.5, -3.0, 260.0});
    std::stringstream buf;
    write_pgm(img, buf);
    const GrayImage back = read_pgm(buf);
    EXPECT_EQ(back.pixels(), (std::vector<double>{128, 0, 255}));
    EXPECT_EQ(quantize_pixel(127.49), 127);
}

TEST(Pgm, BinaryRoundTripIsExact) {
    GrayImage img(5, 3);
    for (std::size_t i = 0; i < img.size(); ++i) img.pixels()[i] = static_cast<double>(i * 17 % 256);
    std::stringstream buf;
    write_pgm(img, buf);
    EXPECT_EQ(read_pgm(buf), img);
}

TEST(Coordinates, RowMajorRank) {
    EXPECT_EQ(row_major_rank({0, 0}, 4), 0u);
    EXPECT_EQ(row_major_rank({1, 2}, 4), 6u);
    EXPECT_EQ(row_major_rank({3, 3}, 4), 15u);
    EXPECT_EQ(coord_of_rank(6, 4), (Coord{1, 2}));
    EXPECT_TRUE(Coord({0, 5}) < Coord({1, 0}));
}

TEST(Coordinates, CanonicalSets) {
    EXPECT_TRUE(is_canonical({{0, 0}, {0, 1}, {1, 0}}));
    EXPECT_FALSE(is_canonical({{0, 1}, {0, 0}}));
    EXPECT_FALSE(is_canonical({{0, 1}, {0, 1}}));
}
