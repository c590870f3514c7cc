#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "imgobf/core/image.hpp"
#include "imgobf/core/superclass.hpp"
#include "imgobf/eval/metrics.hpp"

namespace fixtures {

// Test-side randomness uses the standard library engine so the oracles never
// share code with the generator under test.
inline imgobf::ImageBuffer random_image(int h, int w, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * 3);
  for (auto& x : v) x = u(gen);
  return imgobf::ImageBuffer::from_values(h, w, std::move(v));
}

/// Smooth image with values strictly inside (0, 1), for interpolation tests.
inline imgobf::ImageBuffer smooth_image(int h, int w, double phase = 0.0) {
  imgobf::ImageBuffer img(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.set_pixel(y, x, {0.5 + 0.4 * std::sin(x / 9.0 + phase), 0.5 + 0.4 * std::cos(y / 11.0 - phase),
                           0.5 + 0.3 * std::sin((x + y) / 13.0)});
    }
  }
  return img;
}

inline double max_abs_diff(const imgobf::ImageBuffer& a, const imgobf::ImageBuffer& b) {
  double m = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::fabs(va[i] - vb[i]));
  return m;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("imgobf_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// 1000-vector with all mass on one class.
inline std::vector<double> one_hot(int class_id) {
  std::vector<double> v(imgobf::kNumImageNetClasses, 0.0);
  v[static_cast<std::size_t>(class_id)] = 1.0;
  return v;
}

/// Random normalized 1000-vector.
inline std::vector<double> random_distribution(std::mt19937_64& gen) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(imgobf::kNumImageNetClasses);
  double sum = 0.0;
  for (auto& x : v) sum += (x = e(gen));
  for (auto& x : v) x /= sum;
  return v;
}

/// Member class of super-class s, cycling through its members.
inline int member(int s, int j) {
  const auto& m = imgobf::SuperClassTable::builtin().entries()[static_cast<std::size_t>(s)].members;
  return m[static_cast<std::size_t>(j) % m.size()];
}

inline int superclass_index(const std::string& name) {
  const auto e = imgobf::SuperClassTable::builtin().entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

/// Corpus where each of the 207 member classes has `per_class` images.
/// Returns labels; ids are "c<class>_<k>".
inline imgobf::Labels member_class_corpus(int per_class) {
  imgobf::Labels labels;
  for (const auto& sc : imgobf::SuperClassTable::builtin().entries()) {
    for (const int c : sc.members) {
      for (int k = 0; k < per_class; ++k) labels["c" + std::to_string(c) + "_" + std::to_string(k)] = c;
    }
  }
  return labels;
}

/// Predictions that are perfect for images whose super-class is in
/// `perfect` and point at a wrong super-class otherwise.
inline imgobf::PredictionSet selective_classifier(const imgobf::Labels& labels, const std::vector<int>& perfect,
                                                  const std::string& obfuscation = "Clean") {
  const auto& table = imgobf::SuperClassTable::builtin();
  imgobf::PredictionSet set;
  set.obfuscation = obfuscation;
  for (const auto& [id, c] : labels) {
    const int s = *table.superclass_of(c);
    const bool right = std::find(perfect.begin(), perfect.end(), s) != perfect.end();
    set.entries[id] = one_hot(right ? c : member((s + 1) % imgobf::kNumSuperClasses, 0));
  }
  return set;
}

}  // namespace fixtures
