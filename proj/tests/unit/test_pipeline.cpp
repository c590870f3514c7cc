#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "fixtures.hpp"
#include "imgobf/core/error.hpp"
#include "imgobf/io/codec.hpp"
#include "imgobf/io/files.hpp"
#include "imgobf/pipeline/corpus.hpp"
#include "imgobf/pipeline/obfuscate.hpp"
#include "imgobf/transforms/pixel.hpp"

using namespace imgobf;
using nlohmann::json;

namespace {

const AssetPack& test_pack() {
  static const AssetPack pack = load_asset_pack(IMGOBF_TEST_ASSETS);
  return pack;
}

class EchoBackend final : public StylizationBackend {
 public:
  std::string describe() const override { return "echo"; }
  ImageBuffer stylize(const ImageBuffer& input, const StylizeRequest&) const override { return input; }
};

void write_corpus(const std::filesystem::path& dir, int count, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  std::ofstream labels(dir / "labels.csv");
  labels << "image_id,class_id\n";
  for (int i = 0; i < count; ++i) {
    const std::string id = "img" + std::to_string(i);
    // Non-square sources exercise the central crop.
    io::write_png(dir / "images" / (id + ".png"), fixtures::random_image(90 + 7 * i, 120, seed + i));
    labels << id << "," << (404 + i) << "\n";
  }
}

double ks_uniform(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) d = std::max({d, (i + 1) / n - v[i], v[i] - i / n});
  return d;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("ranges load and validate") {
    const ParamRanges& r = ParamRanges::builtin();
    CHECK(r.version() == "1");
    CHECK(r.checksum().size() == 64);
    for (const auto& info : all_obfuscations()) {
      REQUIRE(r.covers(info.id));
      std::vector<std::string> keys;
      for (const auto& [k, _] : r.of(info.id)) keys.push_back(k);
      const auto names = parameter_names(info.id);
      CHECK(keys == std::vector<std::string>(names.begin(), names.end()));
    }
    const ParamRanges again = ParamRanges::from_json_text(r.to_json().dump());
    CHECK(again.checksum() == r.checksum());

    json doc = r.to_json();
    doc["obfuscations"]["RotateImage"].erase("degrees");
    CHECK_THROWS_AS(ParamRanges::from_json_text(doc.dump()), Error);
    doc = r.to_json();
    doc["obfuscations"]["RotateImage"]["bogus"] = {{"type", "real"}, {"lo", 0}, {"hi", 1}};
    CHECK_THROWS_AS(ParamRanges::from_json_text(doc.dump()), Error);
    doc = r.to_json();
    doc["obfuscations"]["RotateImage"]["degrees"] = {{"type", "real"}, {"lo", 5}, {"hi", 1}};
    CHECK_THROWS_AS(ParamRanges::from_json_text(doc.dump()), Error);
    doc = r.to_json();
    doc["obfuscations"]["Halftoning"]["technique"] = {{"type", "choice"}, {"values", json::array()}};
    CHECK_THROWS_AS(ParamRanges::from_json_text(doc.dump()), Error);
    doc = r.to_json();
    doc["obfuscations"].erase("Texturize");
    const ParamRanges partial = ParamRanges::from_json_text(doc.dump());
    CHECK_FALSE(partial.covers(ObfuscationId::Texturize));
    CHECK_THROWS_AS(sample_params(partial, ObfuscationId::Texturize, 1, "a"), Error);
  }

  TEST_CASE("sampling") {
    json doc = ParamRanges::builtin().to_json();
    doc["obfuscations"]["RotateImage"]["degrees"] = {{"type", "real"}, {"lo", 77.5}, {"hi", 77.5}};
    doc["obfuscations"]["RotateBlocks"]["rotations"] = {{"type", "int"}, {"lo", 2}, {"hi", 2}};
    const ParamRanges fixed = ParamRanges::from_json_text(doc.dump());
    for (int i = 0; i < 50; ++i) {
      const std::string id = "x" + std::to_string(i);
      CHECK(sample_params(fixed, ObfuscationId::RotateImage, 3, id).real("degrees") == 77.5);
      CHECK(sample_params(fixed, ObfuscationId::RotateBlocks, 3, id).integer("rotations") == 2);
    }

    const ParamRanges& r = ParamRanges::builtin();
    const SampledParams a = sample_params(r, ObfuscationId::SwirlWarp, 42, "n123");
    const SampledParams b = sample_params(r, ObfuscationId::SwirlWarp, 42, "n123");
    CHECK(a.values == b.values);
    CHECK(a.seed.global_seed == 42);
    CHECK(a.seed.image_id == "n123");
    CHECK(a.seed.name == "SwirlWarp");
    CHECK(sample_params(r, ObfuscationId::SwirlWarp, 43, "n123").values != a.values);

    const SampledParams round = params_from_json(params_to_json(a));
    CHECK(round.values == a.values);
    CHECK(round.obfuscation == a.obfuscation);
    CHECK(round.seed.name == a.seed.name);

    std::vector<double> u;
    std::set<std::int64_t> widths;
    std::set<std::int64_t> block_sizes;
    for (int i = 0; i < 10000; ++i) {
      const std::string id = "img" + std::to_string(i);
      const double deg = sample_params(r, ObfuscationId::RotateImage, 9, id).real("degrees");
      REQUIRE(deg >= 30.0);
      REQUIRE(deg < 330.0);
      u.push_back((deg - 30.0) / 300.0);
      const SampledParams il = sample_params(r, ObfuscationId::InvertLines, 9, id);
      widths.insert(il.integer("width"));
      block_sizes.insert(sample_params(r, ObfuscationId::RotateBlocks, 9, id).integer("block_size"));
    }
    CHECK(ks_uniform(u) < 1.628 / std::sqrt(10000.0));
    CHECK(widths == std::set<std::int64_t>{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    for (const auto bs : block_sizes) CHECK(bs % 2 == 0);
    CHECK(block_sizes.size() == r.of(ObfuscationId::RotateBlocks).at("block_size").values.size());
  }

  TEST_CASE("dispatch covers every obfuscation") {
    const ImageBuffer img = fixtures::random_image(224, 224, 61);
    const EchoBackend echo;
    std::set<std::size_t> seen;
    for (const auto& info : all_obfuscations()) {
      INFO(name_of(info.id));
      const SampledParams p = sample_params(ParamRanges::builtin(), info.id, 5, "dispatch");
      seen.insert(typed_params(p).index());
      CHECK(typed_params(p).index() == static_cast<std::size_t>(info.id));
      ImageBuffer out;
      REQUIRE_NOTHROW(out = obfuscate_image(img, p, &test_pack(), echo));
      CHECK(out.height() == 224);
      CHECK(out.width() == 224);
      CHECK(out.in_unit_range());
      CHECK(obfuscate_image(img, p, &test_pack(), echo) == out);
      if (info.uses_assets) CHECK_THROWS_AS(obfuscate_image(img, p, nullptr, echo), Error);
      if (info.uses_backend) CHECK_THROWS_AS(obfuscate_image(img, p, &test_pack(), NullBackend()), Error);
    }
    CHECK(seen.size() == kNumObfuscations);

    SampledParams wide = sample_params(ParamRanges::builtin(), ObfuscationId::InvertLines, 5, "wide");
    wide.values["width"] = std::int64_t{224};
    CHECK(obfuscate_image(img, wide, nullptr, echo) == img);
    CHECK_THROWS_AS(obfuscate_image(fixtures::random_image(100, 100, 1), wide, nullptr, echo), Error);
  }

  TEST_CASE("labels and corpus listing") {
    fixtures::TempDir dir("labels");
    std::ofstream(dir / "ok.csv") << "image_id,class_id\na,1\nb,999\n";
    std::ofstream(dir / "range.csv") << "image_id,class_id\na,1000\n";
    std::ofstream(dir / "header.csv") << "id,class\na,1\n";
    const auto labels = read_labels(dir / "ok.csv");
    CHECK(labels.size() == 2);
    CHECK(labels.at("b") == 999);
    CHECK_THROWS_AS(read_labels(dir / "range.csv"), Error);
    CHECK_THROWS_AS(read_labels(dir / "header.csv"), Error);

    std::filesystem::create_directories(dir / "c");
    io::write_png(dir / "c/b.png", fixtures::random_image(4, 4, 1));
    io::write_png(dir / "c/a.png", fixtures::random_image(4, 4, 2));
    std::ofstream(dir / "c/notes.txt") << "skip";
    const auto corpus = list_corpus(dir / "c");
    REQUIRE(corpus.size() == 2);
    CHECK(corpus[0].image_id == "a");
    io::write_png(dir / "c/a.jpg.png", fixtures::random_image(4, 4, 3));
    std::filesystem::copy_file(dir / "c/a.png", dir / "c/a.jpeg");
    CHECK_THROWS_AS(list_corpus(dir / "c"), Error);
  }

  TEST_CASE("corpus run") {
    fixtures::TempDir dir("corpus");
    write_corpus(dir.path(), 3, 70);
    CorpusRun run;
    run.corpus_dir = dir / "images";
    run.labels_file = dir / "labels.csv";
    run.out_dir = dir / "out";
    run.obfuscations = {ObfuscationId::SwirlWarp, ObfuscationId::TextOverlay};
    run.global_seed = 11;
    run.ranges = &ParamRanges::builtin();
    run.pack = &test_pack();
    const CorpusManifest m = run_corpus(run);
    CHECK(m.records.size() == 3);
    CHECK(m.failures.empty());
    int files = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(run.out_dir)) {
      files += e.path().extension() == ".png" ? 1 : 0;
    }
    CHECK(files == 9);
    for (const auto& r : m.records) {
      CHECK(r.outputs.size() == 2);
      const ImageBuffer clean = io::read_image(run.out_dir / r.clean_path);
      CHECK(clean.height() == 224);
      CHECK(clean.width() == 224);
    }
    CHECK(m.records[1].class_id == 405);
    CHECK(verify_manifest(run.out_dir).empty());
    const std::string first = io::sha256_file(run.out_dir / "manifest.json");

    // Reruns reproduce every byte, regardless of worker count.
    run.out_dir = dir / "out2";
    run.workers = 3;
    run_corpus(run);
    CHECK(io::sha256_file(run.out_dir / "manifest.json") == first);
    CHECK(io::read_bytes(dir / "out/SwirlWarp/img2.png") == io::read_bytes(dir / "out2/SwirlWarp/img2.png"));

    const CorpusManifest parsed = CorpusManifest::from_json(json::parse(io::read_text(run.out_dir / "manifest.json")));
    CHECK(parsed.serialize() == m.serialize());

    {
      std::fstream f(dir / "out/TextOverlay/img0.png", std::ios::in | std::ios::out | std::ios::binary);
      f.seekp(60);
      f.put('\x11');
    }
    const auto issues = verify_manifest(dir / "out");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].find("TextOverlay/img0.png") != std::string::npos);
  }

  TEST_CASE("corpus run records per-image failures") {
    fixtures::TempDir dir("faulty");
    write_corpus(dir.path(), 3, 80);
    std::ofstream(dir / "images/img1.png", std::ios::binary | std::ios::trunc) << "not an image";
    CorpusRun run;
    run.corpus_dir = dir / "images";
    run.labels_file = dir / "labels.csv";
    run.out_dir = dir / "out";
    run.obfuscations = {ObfuscationId::InvertLines, ObfuscationId::StyleTransfer};
    run.global_seed = 1;
    run.workers = 2;
    run.ranges = &ParamRanges::builtin();
    run.pack = &test_pack();
    const CorpusManifest m = run_corpus(run);
    int load_failures = 0;
    int backend_failures = 0;
    for (const auto& f : m.failures) {
      load_failures += f.stage == "load" ? 1 : 0;
      backend_failures += f.stage == "StyleTransfer" ? 1 : 0;
    }
    CHECK(load_failures == 1);
    CHECK(backend_failures == 2);
    CHECK(std::filesystem::exists(dir / "out/InvertLines/img0.png"));
    CHECK(std::filesystem::exists(dir / "out/InvertLines/img2.png"));
    CHECK_FALSE(std::filesystem::exists(dir / "out/InvertLines/img1.png"));
    CHECK(verify_manifest(run.out_dir).empty());

    run.corpus_dir = dir / "missing";
    CHECK_THROWS_AS(run_corpus(run), Error);
  }
}
