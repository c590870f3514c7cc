#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "imgobf/core/superclass.hpp"

namespace imgobf {

using Labels = std::map<std::string, int>;  // image id -> ImageNet class id
using SuperClassVector = std::array<double, kNumSuperClasses>;

enum class PredictionKind { ImageNet, SuperClass };

/// Predictions of one model under one obfuscation (or "Clean").
struct PredictionSet {
  std::string obfuscation;
  PredictionKind kind = PredictionKind::ImageNet;
  std::map<std::string, std::vector<double>> entries;

  /// Length must match the kind, entries >= 0, and 1000-class vectors must
  /// sum to 1 within 1e-4. Throws ErrorCode::Format naming the image.
  void validate() const;
};

/// out[s] = mean of v over the member classes of s.
SuperClassVector superclass_probabilities(std::span<const double> v, const SuperClassTable& table);

/// Lowest index wins ties.
int argmax_superclass(const SuperClassVector& p);

/// True when fewer than k super-classes rank ahead of `truth` (ranked by
/// probability, ties broken by lower index).
bool in_top_k(const SuperClassVector& p, int truth, int k);

/// Per-image outcome of one prediction set, restricted to labeled images
/// whose class belongs to one of the 16 super-classes.
struct Outcomes {
  std::vector<std::string> ids;  // sorted
  std::vector<int> truth;        // super-class index
  std::vector<std::uint8_t> correct;
  std::int64_t excluded = 0;     // labeled outside the 207 member classes
};

/// Throws InvalidArgument when a predicted image has no label.
Outcomes score(const PredictionSet& preds, const Labels& labels, const SuperClassTable& table, int k = 1);

/// Weighted: mean over present super-classes of their accuracy. Unweighted:
/// plain fraction of correct images. Empty input yields 0.
double aggregate(std::span<const int> truth, std::span<const std::uint8_t> correct, bool weighted);

double weighted_accuracy(const PredictionSet& preds, const Labels& labels, const SuperClassTable& table);
double unweighted_accuracy(const PredictionSet& preds, const Labels& labels, const SuperClassTable& table);
double topk_accuracy(const PredictionSet& preds, const Labels& labels, const SuperClassTable& table, int k,
                     bool weighted);

/// Image is correct only when correct in every set. All sets must cover the
/// same ids; otherwise ErrorCode::Coverage lists the missing ids.
double worst_case_accuracy(std::span<const PredictionSet> sets, const Labels& labels, const SuperClassTable& table,
                           bool weighted);

/// Throws ErrorCode::Coverage when the sets do not share one id set.
void check_coverage(std::span<const PredictionSet> sets);

enum class OracleMode { PerObfuscation, PerImage };

struct OracleResult {
  double accuracy = 0.0;
  /// Obfuscation -> chosen model (PerObfuscation only).
  std::map<std::string, std::string> assignment;
};

/// Best-case fusion of several models over the same obfuscations.
/// PerObfuscation picks one model per obfuscation, maximizing the weighted
/// worst-case accuracy over all assignments. PerImage counts an image as
/// correct under an obfuscation when any model is correct.
OracleResult oracle_combination(const std::map<std::string, std::vector<PredictionSet>>& models,
                                const Labels& labels, const SuperClassTable& table, OracleMode mode);

using ObfuscationTriple = std::array<std::string, 3>;

/// Weighted worst-case accuracy for every 3-subset of the sets (keys sorted
/// by set order). Requires at least 3 sets with distinct obfuscation names.
std::map<ObfuscationTriple, double> holdout_choice_histogram(std::span<const PredictionSet> sets,
                                                             const Labels& labels, const SuperClassTable& table);

struct ConfusionMatrix {
  std::array<std::array<double, kNumSuperClasses>, kNumSuperClasses> percent{};  // [true][predicted]
  std::array<std::int64_t, kNumSuperClasses> row_counts{};
  /// Super-classes without any image; their rows are all zero.
  std::vector<int> empty_rows;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(const PredictionSet& preds, const Labels& labels, const SuperClassTable& table);

}  // namespace imgobf
