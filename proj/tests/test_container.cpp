#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "fixtures.hpp"
#include "rbepwt/container.hpp"
#include "rbepwt/error.hpp"

using namespace rbepwt;
using namespace rbepwt::testing;

namespace {

std::string reject_reason(const std::vector<std::uint8_t>& bytes) {
    try {
        deserialize(bytes);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Format);
        return e.what();
    }
    return "accepted";
}

bool mentions(const std::string& text, const char* word) { return text.find(word) != std::string::npos; }

std::vector<EncodedImage> samples() {
    std::mt19937 rng(51);
    const GrayImage img = random_image(12, 10, rng);
    const LabelMap lm = random_segmentation(12, 10, 5, rng);
    std::vector<EncodedImage> out;
    for (PathMode mode : {PathMode::Easy, PathMode::Grad, PathMode::Epwt})
        for (WaveletKind bank : {WaveletKind::Haar, WaveletKind::Cdf97})
            out.push_back(encode(img, lm, {mode, Distance::Euclidean}, bank, 5));
    std::vector<std::uint8_t> mask(120, 1);
    mask[7] = mask[50] = mask[119] = 0;
    out.push_back(encode(img, lm, {PathMode::Grad, Distance::Chebyshev}, WaveletKind::Cdf97, 4, {mask}));
    return out;
}

}  // namespace

TEST(Container, RoundTripIsExact) {
    for (const EncodedImage& enc : samples()) {
        const auto bytes = serialize(enc);
        const EncodedImage back = deserialize(bytes);
        EXPECT_EQ(back, enc);
        EXPECT_EQ(serialize(back), bytes);
        EXPECT_EQ(decode(back), decode(enc));
    }
}

TEST(Container, HeaderLayout) {
    const EncodedImage enc = samples()[2];
    const auto bytes = serialize(enc);
    EXPECT_EQ(std::memcmp(bytes.data(), "RBE1", 4), 0);
    EXPECT_EQ(bytes[4], kContainerVersion);
    EXPECT_EQ(bytes[5], 1);  // grad
    EXPECT_EQ(bytes[6], 0);  // haar
    EXPECT_EQ(bytes[7], 0);
    EXPECT_EQ(bytes[8] | bytes[9] << 8, 12);
    EXPECT_EQ(bytes[10] | bytes[11] << 8, 10);
    EXPECT_EQ(bytes[12], 5);
    EXPECT_EQ(bytes[13], 5);
}

TEST(Container, RejectsCorruption) {
    const auto bytes = serialize(samples()[4]);
    auto magic = bytes;
    std::memcpy(magic.data(), "XXXX", 4);
    EXPECT_TRUE(mentions(reject_reason(magic), "bad magic"));
    auto version = bytes;
    version[4] = 9;
    EXPECT_TRUE(mentions(reject_reason(version), "version mismatch"));
    for (std::size_t cut : {bytes.size() - 1, bytes.size() - 20, std::size_t{30}, std::size_t{3}})
        EXPECT_TRUE(mentions(reject_reason({bytes.begin(), bytes.begin() + static_cast<long>(cut)}), "truncation"));
    auto payload = bytes;
    payload[payload.size() - 12] ^= 0x40;
    EXPECT_TRUE(mentions(reject_reason(payload), "checksum failure"));
    auto crc = bytes;
    crc.back() ^= 1;
    EXPECT_TRUE(mentions(reject_reason(crc), "checksum failure"));
    auto trailing = bytes;
    trailing.push_back(0);
    EXPECT_NE(reject_reason(trailing), "accepted");
}

TEST(Container, SerializeValidates) {
    EncodedImage enc = samples()[0];
    enc.approx_lowest.push_back(1.0);
    EXPECT_THROW(serialize(enc), Error);
}
