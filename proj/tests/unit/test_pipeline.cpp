#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "tsr/enhance.hpp"
#include "tsr/error.hpp"
#include "tsr/parallel.hpp"
#include "tsr/pipeline.hpp"

using namespace tsr;

namespace {

Image random_bgr(std::mt19937& gen, int w = 32, int h = 32) {
    Image img(w, h, ColorSpace::Bgr);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(d(gen));
    return img;
}

}  // namespace

TEST_CASE("names") {
    const std::vector<std::string> expect = {"HOG",           "CLAHE-HOG",   "YUV-HOG",          "HUE-HOG",
                                             "CLAHE-YUV-HOG", "HUE-YUV-HOG", "CLAHE-HUE-YUV-HOG"};
    REQUIRE(kAllPipelines.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(pipeline_name(kAllPipelines[i]) == expect[i]);
        CHECK(parse_pipeline(expect[i]) == kAllPipelines[i]);
    }
    try {
        parse_pipeline("FOO-HOG");
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownPipelineName);
        const std::string msg = e.what();
        for (const auto& n : expect) CHECK(msg.find(n) != std::string::npos);
    }
}

TEST_CASE("hue_equalize") {
    SUBCASE("achromatic input is unchanged") {
        std::mt19937 gen(1);
        Image img(32, 32, ColorSpace::Bgr);
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            const auto v = static_cast<std::uint8_t>(gen() % 256);
            img.data()[3 * i] = img.data()[3 * i + 1] = img.data()[3 * i + 2] = v;
        }
        const Image out = hue_equalize(img);
        for (std::size_t i = 0; i < img.data().size(); ++i) CHECK(std::abs(out.data()[i] - img.data()[i]) <= 1);
    }
    SUBCASE("constant saturated hue moves to red") {
        Image img(8, 8, ColorSpace::Bgr);
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            img.data()[3 * i] = 0;
            img.data()[3 * i + 1] = 200;  // green
            img.data()[3 * i + 2] = 0;
        }
        const Image out = hue_equalize(img);
        CHECK(out.color_space() == ColorSpace::Bgr);
        CHECK(out.width() == 8);
        const Image hsv = bgr_to_hsv(out);
        for (std::size_t i = 0; i < hsv.pixel_count(); ++i) {
            CHECK(hsv.data()[3 * i] == 0);
            CHECK(hsv.data()[3 * i + 1] == 255);
            CHECK(hsv.data()[3 * i + 2] == 200);
        }
    }
    CHECK_THROWS_AS(hue_equalize(Image(4, 4, ColorSpace::Gray)), Error);
}

TEST_CASE("apply_pipeline composes its stages") {
    std::mt19937 gen(2);
    for (int t = 0; t < 5; ++t) {
        const Image img = random_bgr(gen);
        auto hog_of = [](const Image& i) { return hog_descriptor(gaussian_blur_3x3(i)); };
        CHECK(apply_pipeline(PipelineKind::Hog, img) == hog_of(img));
        CHECK(apply_pipeline(PipelineKind::ClaheHog, img) == hog_of(apply_clahe_dynamic(img)));
        CHECK(apply_pipeline(PipelineKind::YuvHog, img) == hog_of(bgr_to_yuv(img)));
        CHECK(apply_pipeline(PipelineKind::HueHog, img) == hog_of(hue_equalize(img)));
        CHECK(apply_pipeline(PipelineKind::ClaheYuvHog, img) == hog_of(bgr_to_yuv(apply_clahe_dynamic(img))));
        CHECK(apply_pipeline(PipelineKind::HueYuvHog, img) == hog_of(bgr_to_yuv(hue_equalize(img))));
        CHECK(apply_pipeline(PipelineKind::ClaheHueYuvHog, img) ==
              hog_of(bgr_to_yuv(hue_equalize(apply_clahe_dynamic(img)))));
        for (PipelineKind k : kAllPipelines) CHECK(apply_pipeline(k, img).size() == 324);
    }
}

TEST_CASE("constant image gives a zero descriptor") {
    Image img(32, 32, ColorSpace::Bgr);
    std::fill(img.data().begin(), img.data().end(), 90);
    const auto d = apply_pipeline(PipelineKind::Hog, img);
    CHECK(d.size() == 324);
    CHECK(std::all_of(d.begin(), d.end(), [](float v) { return v == 0.0f; }));
}

TEST_CASE("YUV-HOG on achromatic input equals HOG on the gray replica") {
    std::mt19937 gen(3);
    for (int t = 0; t < 10; ++t) {
        Image gray(32, 32, ColorSpace::Gray);
        for (auto& v : gray.data()) v = static_cast<std::uint8_t>(gen() % 256);
        const Image bgr = gray_to_bgr(gray);
        const auto a = apply_pipeline(PipelineKind::YuvHog, bgr);
        const auto b = hog_descriptor(gaussian_blur_3x3(gray));
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-6);
    }
}

TEST_CASE("deterministic across threads") {
    std::mt19937 gen(4);
    std::vector<Image> imgs;
    for (int i = 0; i < 24; ++i) imgs.push_back(random_bgr(gen));
    for (PipelineKind k : kAllPipelines) {
        std::vector<FeatureVector> serial(imgs.size()), threaded(imgs.size());
        parallel_for(imgs.size(), [&](std::size_t i) { serial[i] = apply_pipeline(k, imgs[i]); }, 1);
        parallel_for(imgs.size(), [&](std::size_t i) { threaded[i] = apply_pipeline(k, imgs[i]); }, 4);
        CHECK(serial == threaded);
    }
}

TEST_CASE("input contract") {
    std::mt19937 gen(5);
    try {
        apply_pipeline(PipelineKind::Hog, random_bgr(gen, 31, 32));
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WrongInputSize);
    }
    CHECK_THROWS_AS(apply_pipeline(PipelineKind::Hog, Image(32, 32, ColorSpace::Gray)), Error);
}
