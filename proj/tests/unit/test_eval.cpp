#include <doctest.h>

#include <fstream>
#include <regex>
#include <set>

#include "eval_oracles.hpp"
#include "fixtures.hpp"
#include "imgobf/core/error.hpp"
#include "imgobf/core/obfuscation_id.hpp"
#include "imgobf/eval/predictions.hpp"
#include "imgobf/eval/report.hpp"

using namespace imgobf;

namespace {

const SuperClassTable& table() { return SuperClassTable::builtin(); }

PredictionSet superclass_set(const std::string& obf, const std::map<std::string, std::vector<double>>& entries) {
  PredictionSet s;
  s.obfuscation = obf;
  s.kind = PredictionKind::SuperClass;
  s.entries = entries;
  return s;
}

std::vector<double> sv(std::initializer_list<std::pair<int, double>> cells) {
  std::vector<double> v(kNumSuperClasses, 0.0);
  for (const auto& [i, x] : cells) v[static_cast<std::size_t>(i)] = x;
  return v;
}

std::vector<PredictionSet> holdout_sets(const Labels& labels, std::mt19937_64& gen) {
  std::vector<PredictionSet> out;
  for (const auto& info : all_obfuscations()) {
    if (info.split != Split::HoldOut) continue;
    PredictionSet s;
    s.obfuscation = std::string(info.name);
    s.kind = PredictionKind::SuperClass;
    std::uniform_real_distribution<double> u(0, 1);
    for (const auto& [id, c] : labels) {
      std::vector<double> v(kNumSuperClasses);
      for (auto& x : v) x = u(gen);
      if (u(gen) < 0.6) v[static_cast<std::size_t>(*table().superclass_of(c))] = 2.0;
      s.entries[id] = v;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("super-class aggregation") {
    const std::vector<double> uniform(kNumImageNetClasses, 1.0 / kNumImageNetClasses);
    const auto p = superclass_probabilities(uniform, table());
    double sum = 0.0;
    for (double x : p) {
      CHECK(x == doctest::Approx(1.0 / 1000).epsilon(1e-12));
      sum += x;
    }
    CHECK(sum == doctest::Approx(16.0 / 1000).epsilon(1e-12));
    CHECK(argmax_superclass(p) == 0);

    const auto airliner = superclass_probabilities(fixtures::one_hot(404), table());
    const int airplane = fixtures::superclass_index("Airplane");
    for (int s = 0; s < kNumSuperClasses; ++s) CHECK(airliner[static_cast<std::size_t>(s)] == (s == airplane ? 1.0 : 0.0));

    std::mt19937_64 gen(71);
    for (int t = 0; t < 20; ++t) {
      const auto v = fixtures::random_distribution(gen);
      const auto got = superclass_probabilities(v, table());
      const auto want = oracles::aggregate_probs(v, PredictionKind::ImageNet);
      for (int s = 0; s < kNumSuperClasses; ++s) CHECK(std::fabs(got[static_cast<std::size_t>(s)] - want[static_cast<std::size_t>(s)]) <= 1e-12);
    }
  }

  TEST_CASE("validation") {
    PredictionSet s;
    s.obfuscation = "Clean";
    s.entries["a"] = std::vector<double>(10, 0.1);
    CHECK_THROWS_AS(s.validate(), Error);
    s.entries["a"] = fixtures::one_hot(3);
    s.entries["a"][4] = 0.01;
    CHECK_THROWS_AS(s.validate(), Error);
    s.entries["a"] = fixtures::one_hot(3);
    CHECK_NOTHROW(s.validate());
    s.kind = PredictionKind::SuperClass;
    s.entries["a"] = sv({{1, -0.5}});
    CHECK_THROWS_AS(s.validate(), Error);
  }

  TEST_CASE("reference metric fixtures") {
    const Labels labels = fixtures::member_class_corpus(50);
    CHECK(labels.size() == 207 * 50);
    const int dog = fixtures::superclass_index("Dog");
    const int bird = fixtures::superclass_index("Bird");
    const PredictionSet dog_only = fixtures::selective_classifier(labels, {dog});
    CHECK(std::fabs(unweighted_accuracy(dog_only, labels, table()) - 0.5266) <= 1e-4);
    CHECK(weighted_accuracy(dog_only, labels, table()) == 0.0625);
    const PredictionSet dog_bird = fixtures::selective_classifier(labels, {dog, bird});
    CHECK(std::fabs(unweighted_accuracy(dog_bird, labels, table()) - 0.7633) <= 1e-4);
    CHECK(weighted_accuracy(dog_bird, labels, table()) == 0.125);

    std::vector<int> all(kNumSuperClasses);
    for (int i = 0; i < kNumSuperClasses; ++i) all[static_cast<std::size_t>(i)] = i;
    CHECK(weighted_accuracy(fixtures::selective_classifier(labels, all), labels, table()) == 1.0);
    CHECK(unweighted_accuracy(fixtures::selective_classifier(labels, {}), labels, table()) == 0.0);
  }

  TEST_CASE("accuracy against direct oracles") {
    std::mt19937_64 gen(72);
    for (int t = 0; t < 50; ++t) {
      const auto inst = oracles::random_instance(gen, 1, 3, 30);
      const auto& sets = inst.models.begin()->second;
      for (const auto& s : sets) {
        const auto c = oracles::correctness(s, inst.labels);
        CHECK(std::fabs(weighted_accuracy(s, inst.labels, table()) - oracles::accuracy(c, inst.labels, true)) <= 1e-12);
        CHECK(std::fabs(unweighted_accuracy(s, inst.labels, table()) - oracles::accuracy(c, inst.labels, false)) <= 1e-12);
        double prev = -1.0;
        for (int k = 1; k <= kNumSuperClasses; ++k) {
          const double acc = topk_accuracy(s, inst.labels, table(), k, true);
          CHECK(std::fabs(acc - oracles::accuracy(oracles::correctness(s, inst.labels, k), inst.labels, true)) <= 1e-12);
          CHECK(acc >= prev);
          prev = acc;
        }
        if (!c.empty()) CHECK(prev == 1.0);
        CHECK(topk_accuracy(s, inst.labels, table(), 1, true) == weighted_accuracy(s, inst.labels, table()));
        CHECK(topk_accuracy(s, inst.labels, table(), 1, false) == unweighted_accuracy(s, inst.labels, table()));
      }
      const double wc = worst_case_accuracy(sets, inst.labels, table(), true);
      CHECK(std::fabs(wc - oracles::worst_case(sets, inst.labels, true)) <= 1e-12);
      CHECK(std::fabs(worst_case_accuracy(sets, inst.labels, table(), false) -
                      oracles::worst_case(sets, inst.labels, false)) <= 1e-12);
      for (const auto& s : sets) CHECK(wc <= weighted_accuracy(s, inst.labels, table()) + 1e-15);
      CHECK(worst_case_accuracy(std::span(sets).first(1), inst.labels, table(), true) ==
            weighted_accuracy(sets[0], inst.labels, table()));
    }
  }

  TEST_CASE("argmax is invariant under rescaling") {
    std::mt19937_64 gen(73);
    std::uniform_real_distribution<double> scale(0.01, 50.0);
    const auto inst = oracles::random_instance(gen, 1, 1, 60);
    const PredictionSet& source = inst.models.begin()->second[0];
    PredictionSet s = source;
    s.kind = PredictionKind::SuperClass;
    for (auto& [id, v] : s.entries) {
      const auto agg = oracles::aggregate_probs(v, source.kind);
      v.assign(agg.begin(), agg.end());
    }
    const double before = weighted_accuracy(s, inst.labels, table());
    for (auto& [id, v] : s.entries) {
      const double f = scale(gen);
      for (auto& x : v) x *= f;
    }
    CHECK(weighted_accuracy(s, inst.labels, table()) == before);
  }

  TEST_CASE("top-k hand-ranked fixture") {
    const Labels labels{{"a", fixtures::member(0, 0)}, {"b", fixtures::member(5, 0)}, {"c", fixtures::member(2, 0)},
                        {"d", fixtures::member(7, 0)}, {"e", fixtures::member(9, 0)}};
    std::vector<double> e(kNumSuperClasses, 0.0);
    for (int i = 0; i <= 9; ++i) e[static_cast<std::size_t>(i)] = 0.1;
    const PredictionSet s = superclass_set("Clean", {{"a", sv({{0, 0.5}, {3, 0.9}})},
                                                     {"b", sv({{5, 0.2}, {1, 0.3}, {2, 0.3}, {7, 0.25}})},
                                                     {"c", sv({{2, 1.0}})},
                                                     {"d", sv({{7, 0.4}, {6, 0.4}})},
                                                     {"e", e}});
    // Ranks of the true class: a 1, b 3, c 0, d 1 (tie lost to index 6), e 9.
    const std::map<int, double> want{{1, 0.2}, {2, 0.6}, {3, 0.6}, {4, 0.8}, {9, 0.8}, {10, 1.0}, {16, 1.0}};
    for (const auto& [k, acc] : want) {
      CHECK(topk_accuracy(s, labels, table(), k, false) == doctest::Approx(acc).epsilon(1e-15));
      CHECK(topk_accuracy(s, labels, table(), k, true) == doctest::Approx(acc).epsilon(1e-15));
    }
    CHECK_THROWS_AS(topk_accuracy(s, labels, table(), 0, true), Error);
    CHECK_THROWS_AS(topk_accuracy(s, labels, table(), 17, true), Error);
  }

  TEST_CASE("worst case conjunction and coverage") {
    const Labels labels{{"a", fixtures::member(1, 0)}, {"b", fixtures::member(1, 1)}};
    const auto right = sv({{1, 1.0}});
    const auto wrong = sv({{2, 1.0}});
    const std::vector<PredictionSet> sets{superclass_set("X", {{"a", right}, {"b", right}}),
                                          superclass_set("Y", {{"a", right}, {"b", wrong}}),
                                          superclass_set("Z", {{"a", right}, {"b", right}})};
    CHECK(worst_case_accuracy(sets, labels, table(), false) == 0.5);
    const std::vector<PredictionSet> partial{sets[0], superclass_set("Y", {{"a", right}})};
    try {
      worst_case_accuracy(partial, labels, table(), true);
      FAIL("coverage mismatch accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Coverage);
      CHECK(std::string(e.what()).find("b") != std::string::npos);
    }
    const Labels missing{{"a", fixtures::member(1, 0)}};
    CHECK_THROWS_AS(weighted_accuracy(sets[0], missing, table()), Error);

    const Labels with_outside{{"a", fixtures::member(1, 0)}, {"b", fixtures::member(1, 1)}, {"z", 0}};
    PredictionSet s = sets[0];
    s.entries["z"] = right;
    CHECK(score(s, with_outside, table()).excluded == 1);
    CHECK(weighted_accuracy(s, with_outside, table()) == 1.0);
  }

  TEST_CASE("oracle combination") {
    std::mt19937_64 gen(74);
    for (int t = 0; t < 100; ++t) {
      const auto inst = oracles::random_instance(gen, 3, 3, 16);
      const double per_obf = oracle_combination(inst.models, inst.labels, table(), OracleMode::PerObfuscation).accuracy;
      const double per_img = oracle_combination(inst.models, inst.labels, table(), OracleMode::PerImage).accuracy;
      CHECK(std::fabs(per_obf - oracles::oracle_per_obfuscation(inst.models, inst.labels)) <= 1e-12);
      CHECK(std::fabs(per_img - oracles::oracle_per_image(inst.models, inst.labels)) <= 1e-12);
      double best_single = 0.0;
      for (const auto& [name, sets] : inst.models) best_single = std::max(best_single, worst_case_accuracy(sets, inst.labels, table(), true));
      CHECK(per_img >= per_obf - 1e-15);
      CHECK(per_obf >= best_single - 1e-15);
    }

    const auto inst = oracles::random_instance(gen, 1, 3, 20);
    const double single = worst_case_accuracy(inst.models.begin()->second, inst.labels, table(), true);
    CHECK(oracle_combination(inst.models, inst.labels, table(), OracleMode::PerImage).accuracy == single);
    const OracleResult r = oracle_combination(inst.models, inst.labels, table(), OracleMode::PerObfuscation);
    CHECK(r.accuracy == single);
    CHECK(r.assignment.size() == 3);

    // Two models right on disjoint halves: the union covers every image.
    Labels labels;
    for (int i = 0; i < 10; ++i) labels["i" + std::to_string(i)] = fixtures::member(i % kNumSuperClasses, 0);
    std::map<std::string, std::vector<PredictionSet>> halves;
    for (int m = 0; m < 2; ++m) {
      for (const std::string obf : {"P", "Q"}) {
        PredictionSet s;
        s.obfuscation = obf;
        s.kind = PredictionKind::SuperClass;
        for (const auto& [id, c] : labels) {
          const int truth = *table().superclass_of(c);
          const bool mine = (id.back() - '0') % 2 == m;
          s.entries[id] = sv({{mine ? truth : (truth + 1) % kNumSuperClasses, 1.0}});
        }
        halves["m" + std::to_string(m)].push_back(s);
      }
    }
    CHECK(oracle_combination(halves, labels, table(), OracleMode::PerImage).accuracy == 1.0);
  }

  TEST_CASE("hold-out choice histogram") {
    std::mt19937_64 gen(75);
    const Labels labels = fixtures::member_class_corpus(1);
    auto sets = holdout_sets(labels, gen);
    REQUIRE(sets.size() == 3);
    PredictionSet extra = sets[0];
    extra.obfuscation = "Halftoning";
    sets.push_back(extra);
    const auto hist = holdout_choice_histogram(sets, labels, table());
    CHECK(hist.size() == 4);
    const std::vector<PredictionSet> fixture_triple(sets.begin(), sets.begin() + 3);
    ObfuscationTriple key{sets[0].obfuscation, sets[1].obfuscation, sets[2].obfuscation};
    REQUIRE(hist.count(key) == 1);
    CHECK(hist.at(key) == worst_case_accuracy(fixture_triple, labels, table(), true));
    CHECK_THROWS_AS(holdout_choice_histogram(std::span(sets).first(2), labels, table()), Error);
  }

  TEST_CASE("confusion matrix") {
    // Hand-tabulated: (true, predicted) pairs.
    const std::vector<std::pair<int, int>> pairs{{0, 0}, {0, 0}, {0, 1}, {1, 1}, {1, 1}, {2, 3},
                                                 {2, 3}, {2, 2}, {2, 4}, {5, 5}, {5, 0}, {5, 0}};
    Labels labels;
    std::map<std::string, std::vector<double>> entries;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string id = "p" + std::to_string(i);
      labels[id] = fixtures::member(pairs[i].first, static_cast<int>(i));
      entries[id] = sv({{pairs[i].second, 1.0}});
    }
    const ConfusionMatrix m = confusion_matrix(superclass_set("Clean", entries), labels, table());
    CHECK(m.percent[0][0] == doctest::Approx(200.0 / 3));
    CHECK(m.percent[0][1] == doctest::Approx(100.0 / 3));
    CHECK(m.percent[1][1] == 100.0);
    CHECK(m.percent[2][2] == 25.0);
    CHECK(m.percent[2][3] == 50.0);
    CHECK(m.percent[2][4] == 25.0);
    CHECK(m.percent[5][5] == doctest::Approx(100.0 / 3));
    CHECK(m.percent[5][0] == doctest::Approx(200.0 / 3));
    CHECK(m.row_counts[2] == 4);
    CHECK(m.empty_rows.size() == 12);
    for (int t : {0, 1, 2, 5}) {
      double sum = 0.0;
      for (double x : m.percent[static_cast<std::size_t>(t)]) sum += x;
      CHECK(std::fabs(sum - 100.0) <= 1e-6);
    }
    std::mt19937_64 gen(76);
    for (int t = 0; t < 30; ++t) {
      const auto inst = oracles::random_instance(gen, 1, 1, 25);
      const auto& s = inst.models.begin()->second[0];
      const auto got = confusion_matrix(s, inst.labels, table());
      const auto want = oracles::confusion(s, inst.labels);
      for (std::size_t a = 0; a < 16; ++a) {
        for (std::size_t b = 0; b < 16; ++b) CHECK(std::fabs(got.percent[a][b] - want[a][b]) <= 1e-12);
      }
    }
  }

  TEST_CASE("reports") {
    std::mt19937_64 gen(77);
    const Labels labels = fixtures::member_class_corpus(1);
    ModelPredictions models;
    for (const std::string name : {"alpha", "beta"}) {
      auto sets = holdout_sets(labels, gen);
      PredictionSet clean = sets[0];
      clean.obfuscation = "Clean";
      sets.push_back(clean);
      models[name] = sets;
    }
    ReportOptions opts;
    opts.k_values = {3, 1};
    opts.confusion = true;
    opts.oracle = OracleMode::PerImage;
    opts.manifest_checksum = "abc";
    const EvalReport r = build_report(models, labels, table(), opts);
    REQUIRE(r.models.size() == 2);
    CHECK(r.k_values == std::vector<int>{1, 3});
    CHECK(r.worst_case_obfuscations ==
          std::vector<std::string>{"ColorPatternOverlay", "LowContrastTriangles", "PerspectiveComposition"});
    CHECK(r.headline() == r.oracle->accuracy);
    CHECK(*r.models[0].worst_case == worst_case_accuracy(std::span(models["alpha"]).first(3), labels, table(), true));

    CHECK(report_from_json(report_to_json(r)) == r);
    fixtures::TempDir dir("report");
    emit_report(r, ReportFormat::Json, dir / "report.json");
    CHECK(load_report_json(dir / "report.json") == r);

    const std::string csv = render_report(r, ReportFormat::Csv);
    const auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
    CHECK(rows == 2 * 4 * (2 + 2));
    CHECK(csv.rfind("model,obfuscation,metric,value\n", 0) == 0);

    const std::string svg = render_report(r, ReportFormat::Svg);
    const std::regex cell("<g class=\"cell\" data-model=\"([^\"]+)\" data-obfuscation=\"([^\"]+)\"><rect[^>]*/><text[^>]*>[0-9.]+</text></g>");
    std::set<std::pair<std::string, std::string>> cells;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), cell); it != std::sregex_iterator(); ++it) {
      cells.insert({(*it)[1], (*it)[2]});
    }
    CHECK(cells.size() == 8);

    ReportOptions missing = opts;
    missing.worst_case_obfuscations = {"Texturize"};
    CHECK_THROWS_AS(build_report(models, labels, table(), missing), Error);
    ReportOptions none;
    none.worst_case_obfuscations = {"Clean"};
    const EvalReport plain = build_report(models, labels, table(), none);
    CHECK(plain.headline() == std::max(*plain.models[0].worst_case, *plain.models[1].worst_case));
  }

  TEST_CASE("prediction loaders") {
    fixtures::TempDir dir("preds");
    std::filesystem::create_directories(dir / "models/m1");
    {
      std::ofstream f(dir / "models/m1/Clean.csv");
      f << "image_id";
      for (int i = 0; i < 16; ++i) f << ",s" << i;
      f << "\nimg1";
      for (int i = 0; i < 16; ++i) f << "," << (i == 3 ? 1 : 0);
      f << "\n";
    }
    {
      std::ofstream f(dir / "models/m1/Halftoning.csv");
      f << "image_id";
      for (int i = 0; i < 1000; ++i) f << ",p" << i;
      f << "\nimg1";
      for (int i = 0; i < 1000; ++i) f << "," << (i == 404 ? "1.0" : "0");
      f << "\n";
    }
    const ModelPredictions dir_models = load_prediction_dir(dir / "models");
    REQUIRE(dir_models.count("m1") == 1);
    REQUIRE(dir_models.at("m1").size() == 2);
    for (const auto& s : dir_models.at("m1")) {
      if (s.obfuscation == "Clean") CHECK(s.kind == PredictionKind::SuperClass);
      if (s.obfuscation == "Halftoning") CHECK(s.entries.at("img1")[404] == 1.0);
    }
    const ModelPredictions flat = load_prediction_dir(dir / "models/m1");
    CHECK(flat.count("m1") == 1);

    std::ofstream(dir / "bad.csv") << "image_id,s0,s1\na,1,0\n";
    CHECK_THROWS_AS(load_prediction_csv(dir / "bad.csv", "Clean"), Error);

    std::ofstream(dir / "bundle.json")
        << R"({"models":{"x":{"Clean":{"kind":"superclass","predictions":{"a":[0,0,1,0,0,0,0,0,0,0,0,0,0,0,0,0]}}}}})";
    const ModelPredictions bundle = load_prediction_bundle(dir / "bundle.json");
    CHECK(bundle.at("x").at(0).entries.at("a")[2] == 1.0);

    std::ofstream(dir / "labels.csv") << "image_id,class_id\na,404\n";
    CHECK(load_labels(dir / "labels.csv").at("a") == 404);
  }
}
