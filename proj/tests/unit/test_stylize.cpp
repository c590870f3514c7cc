#include <doctest.h>

#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include <sys/stat.h>

#include "fixtures.hpp"
#include "imgobf/core/error.hpp"
#include "imgobf/io/codec.hpp"
#include "imgobf/ml/stylize.hpp"

using namespace imgobf;

namespace {

// Records every request and returns a constant image of the requested size.
class RecordingBackend final : public StylizationBackend {
 public:
  std::string describe() const override { return "recording"; }
  ImageBuffer stylize(const ImageBuffer& input, const StylizeRequest& request) const override {
    std::lock_guard lock(mutex_);
    sizes.emplace_back(input.height(), input.width());
    requests.push_back(request);
    return ImageBuffer(input.height(), input.width(), {0.25, 0.5, 0.75});
  }
  mutable std::vector<std::pair<int, int>> sizes;
  mutable std::vector<StylizeRequest> requests;

 private:
  mutable std::mutex mutex_;
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

void write_script(const std::filesystem::path& path, const std::string& body) {
  std::ofstream(path) << "#!/bin/sh\n" << body << "\n";
  ::chmod(path.c_str(), 0755);
}

}  // namespace

TEST_SUITE("ml-stylize") {
  TEST_CASE("null backend never passes through") {
    const ImageBuffer img = fixtures::random_image(224, 224, 51);
    const NullBackend null;
    CHECK(code_of([&] { style_transfer(img, "a", 0, 2.0, null); }) == ErrorCode::BackendUnavailable);
    CHECK(code_of([&] { texturize(img, "a", 3, 2.0, null); }) == ErrorCode::BackendUnavailable);
  }

  TEST_CASE("recording backend sees the upscaled input") {
    const ImageBuffer img = fixtures::random_image(224, 224, 52);
    const RecordingBackend rec;
    const ImageBuffer out = style_transfer(img, "img7", 4, 2.0, rec);
    const ImageBuffer tex = texturize(img, "img7", 9, 1.5, rec);
    REQUIRE(rec.sizes.size() == 2);
    CHECK(rec.sizes[0] == std::pair{448, 448});
    CHECK(rec.sizes[1] == std::pair{336, 336});
    CHECK(rec.requests[0].obfuscation == ObfuscationId::StyleTransfer);
    CHECK(rec.requests[0].style_id == 4);
    CHECK(rec.requests[0].image_id == "img7");
    CHECK(rec.requests[1].obfuscation == ObfuscationId::Texturize);
    CHECK(rec.requests[1].style_id == 9);
    CHECK(out.height() == 224);
    CHECK(out.width() == 224);
    CHECK(out.pixel(100, 100) == Rgb{0.25, 0.5, 0.75});
    CHECK(tex.height() == 224);
    CHECK(upscaled_side(224, 2.5) == 560);

    CHECK_THROWS_AS(style_transfer(img, "x", 7, 2.0, rec), Error);
    CHECK_THROWS_AS(texturize(img, "x", 10, 2.0, rec), Error);
    CHECK_THROWS_AS(style_transfer(img, "x", 0, 1.0, rec), Error);
  }

  TEST_CASE("file cache backend") {
    fixtures::TempDir dir("cache");
    const ImageBuffer fixture = io::to_image(io::to_raster(fixtures::random_image(224, 224, 53)));
    std::filesystem::create_directories(dir / "n01440764_1/StyleTransfer");
    io::write_png(dir / "n01440764_1/StyleTransfer/2.png", fixture);
    const FileCacheBackend cache(dir.path());
    const ImageBuffer img = fixtures::random_image(224, 224, 54);
    CHECK(style_transfer(img, "n01440764_1", 2, 2.0, cache) == fixture);
    try {
      texturize(img, "n01440764_1", 2, 2.0, cache);
      FAIL("cache hit for a missing key");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CacheMiss);
      CHECK(std::string(e.what()).find("n01440764_1/Texturize/2") != std::string::npos);
    }
  }

  TEST_CASE("external command backend") {
    fixtures::TempDir dir("cmd");
    const ImageBuffer style = io::to_image(io::to_raster(fixtures::smooth_image(224, 224)));
    io::write_png(dir / "style.png", style);
    write_script(dir / "copy_style.sh", "test -f \"$1\" || exit 4\ncp \"$2\" \"$3\"");
    write_script(dir / "fail.sh", "exit 3");
    std::filesystem::create_directories(dir / "scratch");

    const ExternalCommandBackend ok(dir / "copy_style.sh", dir / "scratch", 2);
    const ImageBuffer img = fixtures::random_image(224, 224, 55);
    const std::vector<std::filesystem::path> styles(7, dir / "style.png");
    CHECK(style_transfer(img, "a", 1, 2.0, ok, styles) == style);

    std::vector<ImageBuffer> results(4);
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < results.size(); ++i) {
      threads.emplace_back([&, i] { results[i] = style_transfer(img, "a", 1, 2.0, ok, styles); });
    }
    for (auto& t : threads) t.join();
    for (const auto& r : results) CHECK(r == style);

    const ExternalCommandBackend bad(dir / "fail.sh", dir / "scratch", 1);
    CHECK(code_of([&] { style_transfer(img, "a", 1, 2.0, bad, styles); }) == ErrorCode::ExternalCommand);
  }
}
