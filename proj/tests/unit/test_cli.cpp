#include <doctest.h>

#include <fstream>
#include <sstream>

#include "eval_oracles.hpp"
#include "fixtures.hpp"
#include "imgobf/cli/app.hpp"
#include "imgobf/core/obfuscation_id.hpp"
#include "imgobf/io/codec.hpp"
#include "imgobf/io/files.hpp"

using namespace imgobf;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write_corpus(const fixtures::TempDir& dir, int count) {
  std::filesystem::create_directories(dir / "images");
  std::ofstream labels(dir / "labels.csv");
  labels << "image_id,class_id\n";
  for (int i = 0; i < count; ++i) {
    io::write_png(dir / "images" / ("im" + std::to_string(i) + ".png"), fixtures::random_image(64, 80, 90 + i));
    labels << "im" << i << "," << fixtures::member(i % kNumSuperClasses, 0) << "\n";
  }
}

void write_superclass_csv(const std::filesystem::path& path, const imgobf::PredictionSet& set) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  f << "image_id";
  for (int i = 0; i < kNumSuperClasses; ++i) f << ",s" << i;
  f << "\n";
  f.precision(17);
  for (const auto& [id, v] : set.entries) {
    f << id;
    for (double x : v) f << "," << x;
    f << "\n";
  }
}

std::string last_line(const std::string& s) {
  std::string t = s;
  while (!t.empty() && t.back() == '\n') t.pop_back();
  return t.substr(t.find_last_of('\n') == std::string::npos ? 0 : t.find_last_of('\n') + 1);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("version and listing") {
    const Result v = run_cli({"--version"});
    CHECK(v.code == cli::kExitOk);
    CHECK(v.out.find(IMGOBF_VERSION) != std::string::npos);
    CHECK(v.out.find("ranges") != std::string::npos);
    CHECK(v.out.find("superclass table") != std::string::npos);
    const Result l = run_cli({"list"});
    CHECK(l.code == 0);
    for (const auto& info : all_obfuscations()) CHECK(l.out.find(std::string(info.name)) != std::string::npos);
    CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run_cli({}).code == cli::kExitUsage);
  }

  TEST_CASE("obfuscate") {
    fixtures::TempDir dir("cli_obf");
    write_corpus(dir, 2);
    const std::vector<std::string> base{"obfuscate", "--corpus", (dir / "images").string(), "--labels",
                                        (dir / "labels.csv").string(), "--assets", IMGOBF_TEST_ASSETS, "--seed", "7"};
    auto with = [&](std::vector<std::string> extra) {
      std::vector<std::string> a = base;
      a.insert(a.end(), extra.begin(), extra.end());
      return run_cli(a);
    };

    const Result bad = with({"--obfuscations", "Blurry", "--out", (dir / "o0").string()});
    CHECK(bad.code == cli::kExitUsage);
    for (const auto& info : all_obfuscations()) CHECK(bad.err.find(std::string(info.name)) != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(dir / "o0"));

    const Result hold = with({"--obfuscations", "LowContrastTriangles", "--out", (dir / "o0").string()});
    CHECK(hold.code == cli::kExitUsage);
    CHECK(with({"--obfuscations", "LowContrastTriangles", "--allow-holdout", "--split", "train", "--out",
                (dir / "o0").string()})
              .code == cli::kExitUsage);

    const Result ok = with({"--obfuscations", "InvertLines,SwirlWarp", "--out", (dir / "o1").string()});
    CHECK(ok.code == cli::kExitOk);
    CHECK(ok.out.empty());
    CHECK(std::filesystem::exists(dir / "o1/manifest.json"));
    CHECK(std::filesystem::exists(dir / "o1/SwirlWarp/im1.png"));
    const Result again = with({"--obfuscations", "InvertLines,SwirlWarp", "--workers", "2", "--out", (dir / "o2").string()});
    CHECK(again.code == 0);
    CHECK(io::read_bytes(dir / "o1/manifest.json") == io::read_bytes(dir / "o2/manifest.json"));
    CHECK(io::read_bytes(dir / "o1/InvertLines/im0.png") == io::read_bytes(dir / "o2/InvertLines/im0.png"));

    const Result ml = with({"--obfuscations", "StyleTransfer", "--allow-holdout", "--out", (dir / "o3").string()});
    CHECK(ml.code == cli::kExitData);
    CHECK(with({"--obfuscations", "InvertLines", "--backend", "gpu", "--out", (dir / "o4").string()}).code ==
          cli::kExitUsage);
    CHECK(run_cli({"obfuscate", "--corpus", (dir / "nowhere").string(), "--labels", (dir / "labels.csv").string(),
                   "--seed", "1", "--obfuscations", "InvertLines", "--out", (dir / "o5").string()})
              .code == cli::kExitUsage);
  }

  TEST_CASE("evaluate") {
    fixtures::TempDir dir("cli_eval");
    Labels labels;
    for (int i = 0; i < 32; ++i) labels["im" + std::to_string(i)] = fixtures::member(i % kNumSuperClasses, i);
    {
      std::ofstream f(dir / "labels.csv");
      f << "image_id,class_id\n";
      for (const auto& [id, c] : labels) f << id << "," << c << "\n";
    }
    const std::vector<std::string> holdouts{"ColorPatternOverlay", "LowContrastTriangles", "PerspectiveComposition"};
    for (const auto& h : holdouts) {
      PredictionSet s;
      for (const auto& [id, c] : labels) {
        std::vector<double> v(kNumSuperClasses, 0.0);
        v[static_cast<std::size_t>(*SuperClassTable::builtin().superclass_of(c))] = 1.0;
        s.entries[id] = v;
      }
      write_superclass_csv(dir / "perfect/model" / (h + ".csv"), s);
    }
    const Result perfect = run_cli({"evaluate", "--predictions", (dir / "perfect/model").string(), "--labels",
                                    (dir / "labels.csv").string(), "--out", (dir / "r1").string(), "--format",
                                    "json,csv,svg", "--metric", "topk", "--k", "3,5"});
    CHECK(perfect.code == 0);
    CHECK(perfect.out == "1.0000\n");
    const std::string csv = io::read_text(dir / "r1/report.csv");
    CHECK(csv.find(",top3,") != std::string::npos);
    CHECK(csv.find(",top5,") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "r1/report.svg"));
    CHECK(std::filesystem::exists(dir / "r1/report.json"));

    // Two random models under the oracle.
    std::mt19937_64 gen(91);
    std::map<std::string, std::vector<PredictionSet>> models;
    std::uniform_real_distribution<double> u(0, 1);
    for (const std::string m : {"a", "b"}) {
      for (const auto& h : holdouts) {
        PredictionSet s;
        s.obfuscation = h;
        s.kind = PredictionKind::SuperClass;
        for (const auto& [id, c] : labels) {
          std::vector<double> v(kNumSuperClasses);
          for (auto& x : v) x = u(gen);
          if (u(gen) < 0.7) v[static_cast<std::size_t>(*SuperClassTable::builtin().superclass_of(c))] = 2.0;
          s.entries[id] = v;
        }
        write_superclass_csv(dir / "two" / m / (h + ".csv"), s);
        models[m].push_back(s);
      }
    }
    const Result oracle = run_cli({"evaluate", "--predictions", (dir / "two").string(), "--labels",
                                   (dir / "labels.csv").string(), "--out", (dir / "r2").string(), "--oracle", "per-image"});
    CHECK(oracle.code == 0);
    char want[32];
    std::snprintf(want, sizeof(want), "%.4f", oracles::oracle_per_image(models, labels));
    CHECK(last_line(oracle.out) == want);

    std::filesystem::remove(dir / "two/b/ColorPatternOverlay.csv");
    const Result missing = run_cli({"evaluate", "--predictions", (dir / "two").string(), "--labels",
                                    (dir / "labels.csv").string(), "--out", (dir / "r3").string()});
    CHECK(missing.code == cli::kExitData);
    CHECK(missing.err.find("ColorPatternOverlay") != std::string::npos);

    {
      std::ofstream f(dir / "two/a/LowContrastTriangles.csv", std::ios::app);
      f << "extra";
      for (int i = 0; i < kNumSuperClasses; ++i) f << ",0.5";
      f << "\n";
    }
    std::ofstream(dir / "labels.csv", std::ios::app) << "extra,404\n";
    const Result coverage = run_cli({"evaluate", "--predictions", (dir / "two/a").string(), "--labels",
                                     (dir / "labels.csv").string(), "--out", (dir / "r4").string()});
    CHECK(coverage.code == cli::kExitData);
    CHECK(coverage.err.find("extra") != std::string::npos);
    CHECK(run_cli({"evaluate", "--predictions", (dir / "two").string(), "--labels", (dir / "labels.csv").string(),
                   "--metric", "fancy"})
              .code == cli::kExitUsage);
  }

  TEST_CASE("assets verify") {
    fixtures::TempDir dir("cli_assets");
    CHECK(run_cli({"assets", "generate", "--out", dir.path().string()}).code == 0);
    CHECK(run_cli({"assets", "verify", dir.path().string()}).code == 0);
    {
      std::fstream f(dir / "photos/photo_02.png", std::ios::in | std::ios::out | std::ios::binary);
      f.seekg(100);
      const char c = static_cast<char>(f.get());
      f.seekp(100);
      f.put(static_cast<char>(c ^ 0x01));
    }
    const Result tampered = run_cli({"assets", "verify", dir.path().string()});
    CHECK(tampered.code == cli::kExitData);
    CHECK((tampered.out + tampered.err).find("photos/photo_02.png") != std::string::npos);
    CHECK(run_cli({"assets", "verify", (dir / "absent").string()}).code != 0);
  }

  TEST_CASE("super-class export") {
    const Result r = run_cli({"superclasses"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(SuperClassTable::from_json(doc).entries().size() == kNumSuperClasses);
  }
}
