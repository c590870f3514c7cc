#include "imgobf/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "imgobf/core/error.hpp"

namespace imgobf {

namespace {

constexpr std::size_t kMaxListedIds = 20;
constexpr double kMaxOracleAssignments = 1e6;

std::string list_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < kMaxListedIds; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > kMaxListedIds) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

SuperClassVector aggregated(const PredictionSet& preds, const std::vector<double>& v, const SuperClassTable& table) {
  if (preds.kind == PredictionKind::SuperClass) {
    SuperClassVector out{};
    std::copy_n(v.begin(), kNumSuperClasses, out.begin());
    return out;
  }
  return superclass_probabilities(v, table);
}

// Correctness vectors of several sets aligned on the shared id order.
struct Aligned {
  std::vector<int> truth;
  std::vector<std::vector<std::uint8_t>> correct;  // one per set
};

Aligned align(std::span<const PredictionSet> sets, const Labels& labels, const SuperClassTable& table) {
  check_coverage(sets);
  Aligned a;
  for (const auto& s : sets) {
    Outcomes o = score(s, labels, table);
    if (a.correct.empty()) a.truth = o.truth;
    a.correct.push_back(std::move(o.correct));
  }
  return a;
}

}  // namespace

void PredictionSet::validate() const {
  const std::size_t n = kind == PredictionKind::ImageNet ? kNumImageNetClasses : kNumSuperClasses;
  for (const auto& [id, v] : entries) {
    const std::string where = "predictions " + obfuscation + "/" + id;
    if (v.size() != n) {
      fail(ErrorCode::Format, where + ": expected " + std::to_string(n) + " values, got " + std::to_string(v.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
        fail(ErrorCode::Format, where + ": entry " + std::to_string(i) + " is negative or not finite");
      }
      sum += v[i];
    }
    if (kind == PredictionKind::ImageNet && std::fabs(sum - 1.0) > 1e-4) {
      fail(ErrorCode::Format, where + ": probabilities sum to " + std::to_string(sum) + ", not 1");
    }
  }
}

SuperClassVector superclass_probabilities(std::span<const double> v, const SuperClassTable& table) {
  require(v.size() == static_cast<std::size_t>(kNumImageNetClasses), "superclass_probabilities: need 1000 values");
  SuperClassVector out{};
  const auto entries = table.entries();
  for (std::size_t s = 0; s < entries.size(); ++s) {
    // Extended accumulation keeps equal inputs at equal means, so uniform
    // vectors tie exactly and fall to the lowest index.
    long double sum = 0.0L;
    for (const int c : entries[s].members) sum += v[static_cast<std::size_t>(c)];
    out[s] = static_cast<double>(sum / static_cast<long double>(entries[s].members.size()));
  }
  return out;
}

int argmax_superclass(const SuperClassVector& p) {
  int best = 0;
  for (int s = 1; s < kNumSuperClasses; ++s) {
    if (p[static_cast<std::size_t>(s)] > p[static_cast<std::size_t>(best)]) best = s;
  }
  return best;
}

bool in_top_k(const SuperClassVector& p, int truth, int k) {
  const double pt = p[static_cast<std::size_t>(truth)];
  int ahead = 0;
  for (int s = 0; s < kNumSuperClasses; ++s) {
    const double ps = p[static_cast<std::size_t>(s)];
    if (ps > pt || (ps == pt && s < truth)) ++ahead;
  }
  return ahead < k;
}

Outcomes score(const PredictionSet& preds, const Labels& labels, const SuperClassTable& table, int k) {
  require(k >= 1 && k <= kNumSuperClasses, "top-k: k must lie in 1..16");
  Outcomes out;
  std::vector<std::string> unlabeled;
  for (const auto& [id, v] : preds.entries) {
    const auto it = labels.find(id);
    if (it == labels.end()) {
      unlabeled.push_back(id);
      continue;
    }
    const auto sc = table.superclass_of(it->second);
    if (!sc) {
      ++out.excluded;
      continue;
    }
    const SuperClassVector p = aggregated(preds, v, table);
    out.ids.push_back(id);
    out.truth.push_back(*sc);
    out.correct.push_back(in_top_k(p, *sc, k) ? 1 : 0);
  }
  if (!unlabeled.empty()) {
    fail(ErrorCode::InvalidArgument, "predictions " + preds.obfuscation + " contain unlabeled images: " +
                                         list_ids(unlabeled));
  }
  return out;
}

double aggregate(std::span<const int> truth, std::span<const std::uint8_t> correct, bool weighted) {
  require(truth.size() == correct.size(), "aggregate: size mismatch");
  if (truth.empty()) return 0.0;
  if (!weighted) {
    std::int64_t hits = 0;
    for (const auto c : correct) hits += c ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
  }
  std::array<std::int64_t, kNumSuperClasses> hits{};
  std::array<std::int64_t, kNumSuperClasses> total{};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto s = static_cast<std::size_t>(truth[i]);
    ++total[s];
    hits[s] += correct[i] ? 1 : 0;
  }
  double sum = 0.0;
  int present = 0;
  for (std::size_t s = 0; s < total.size(); ++s) {
    if (total[s] == 0) continue;
    sum += static_cast<double>(hits[s]) / static_cast<double>(total[s]);
    ++present;
  }
  return sum / present;
}

double weighted_accuracy(const PredictionSet& preds, const Labels& labels, const SuperClassTable& table) {
  const Outcomes o = score(preds, labels, table);
  return aggregate(o.truth, o.correct, true);
}

double unweighted_accuracy(const PredictionSet& preds, const Labels& labels, const SuperClassTable& table) {
  const Outcomes o = score(preds, labels, table);
  return aggregate(o.truth, o.correct, false);
}

double topk_accuracy(const PredictionSet& preds, const Labels& labels, const SuperClassTable& table, int k,
                     bool weighted) {
  const Outcomes o = score(preds, labels, table, k);
  return aggregate(o.truth, o.correct, weighted);
}

void check_coverage(std::span<const PredictionSet> sets) {
  require(!sets.empty(), "at least one prediction set is required");
  std::set<std::string> all;
  for (const auto& s : sets) {
    for (const auto& [id, v] : s.entries) all.insert(id);
  }
  std::string problems;
  for (const auto& s : sets) {
    if (s.entries.size() == all.size()) continue;
    std::vector<std::string> missing;
    for (const auto& id : all) {
      if (!s.entries.contains(id)) missing.push_back(id);
    }
    problems += (problems.empty() ? "" : "; ") + s.obfuscation + " is missing " + list_ids(missing);
  }
  if (!problems.empty()) fail(ErrorCode::Coverage, "prediction sets cover different images: " + problems);
}

double worst_case_accuracy(std::span<const PredictionSet> sets, const Labels& labels, const SuperClassTable& table,
                           bool weighted) {
  const Aligned a = align(sets, labels, table);
  std::vector<std::uint8_t> all(a.truth.size(), 1);
  for (const auto& c : a.correct) {
    for (std::size_t i = 0; i < all.size(); ++i) all[i] &= c[i];
  }
  return aggregate(a.truth, all, weighted);
}

OracleResult oracle_combination(const std::map<std::string, std::vector<PredictionSet>>& models,
                                const Labels& labels, const SuperClassTable& table, OracleMode mode) {
  require(!models.empty(), "oracle_combination: no models");
  std::vector<std::string> model_names;
  std::vector<std::string> obfuscations;
  for (const auto& s : models.begin()->second) obfuscations.push_back(s.obfuscation);
  std::sort(obfuscations.begin(), obfuscations.end());
  require(!obfuscations.empty(), "oracle_combination: models have no prediction sets");

  // Sets ordered [model][obfuscation], all checked for a common id set.
  std::vector<PredictionSet> flat;
  for (const auto& [name, sets] : models) {
    model_names.push_back(name);
    std::vector<std::string> mine;
    for (const auto& s : sets) mine.push_back(s.obfuscation);
    std::sort(mine.begin(), mine.end());
    if (mine != obfuscations) {
      fail(ErrorCode::Coverage, "oracle_combination: model " + name + " covers different obfuscations");
    }
    for (const auto& o : obfuscations) {
      flat.push_back(*std::find_if(sets.begin(), sets.end(), [&](const auto& s) { return s.obfuscation == o; }));
    }
  }
  const Aligned a = align(flat, labels, table);
  const std::size_t nm = model_names.size();
  const std::size_t no = obfuscations.size();
  const std::size_t n = a.truth.size();
  auto at = [&](std::size_t m, std::size_t o) -> const std::vector<std::uint8_t>& { return a.correct[m * no + o]; };

  OracleResult result;
  if (mode == OracleMode::PerImage) {
    std::vector<std::uint8_t> all(n, 1);
    for (std::size_t o = 0; o < no; ++o) {
      for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t any = 0;
        for (std::size_t m = 0; m < nm; ++m) any |= at(m, o)[i];
        all[i] &= any;
      }
    }
    result.accuracy = aggregate(a.truth, all, true);
    return result;
  }

  if (std::pow(static_cast<double>(nm), static_cast<double>(no)) > kMaxOracleAssignments) {
    fail(ErrorCode::InvalidArgument, "oracle_combination: too many model assignments to search");
  }
  std::vector<std::size_t> choice(no, 0);
  std::vector<std::size_t> best_choice(no, 0);
  double best = -1.0;
  std::vector<std::uint8_t> all(n);
  while (true) {
    std::fill(all.begin(), all.end(), 1);
    for (std::size_t o = 0; o < no; ++o) {
      const auto& c = at(choice[o], o);
      for (std::size_t i = 0; i < n; ++i) all[i] &= c[i];
    }
    const double acc = aggregate(a.truth, all, true);
    if (acc > best) {
      best = acc;
      best_choice = choice;
    }
    std::size_t d = no;
    while (d > 0 && ++choice[d - 1] == nm) choice[--d] = 0;
    if (d == 0) break;
  }
  result.accuracy = best;
  for (std::size_t o = 0; o < no; ++o) result.assignment[obfuscations[o]] = model_names[best_choice[o]];
  return result;
}

std::map<ObfuscationTriple, double> holdout_choice_histogram(std::span<const PredictionSet> sets,
                                                             const Labels& labels, const SuperClassTable& table) {
  require(sets.size() >= 3, "holdout_choice_histogram: need at least 3 prediction sets");
  std::set<std::string> names;
  for (const auto& s : sets) {
    require(names.insert(s.obfuscation).second, "holdout_choice_histogram: duplicate set " + s.obfuscation);
  }
  const Aligned a = align(sets, labels, table);
  const std::size_t n = a.truth.size();
  std::map<ObfuscationTriple, double> out;
  std::vector<std::uint8_t> ab(n);
  std::vector<std::uint8_t> abc(n);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      for (std::size_t t = 0; t < n; ++t) ab[t] = a.correct[i][t] & a.correct[j][t];
      for (std::size_t k = j + 1; k < sets.size(); ++k) {
        for (std::size_t t = 0; t < n; ++t) abc[t] = ab[t] & a.correct[k][t];
        out[{sets[i].obfuscation, sets[j].obfuscation, sets[k].obfuscation}] = aggregate(a.truth, abc, true);
      }
    }
  }
  return out;
}

ConfusionMatrix confusion_matrix(const PredictionSet& preds, const Labels& labels, const SuperClassTable& table) {
  std::array<std::array<std::int64_t, kNumSuperClasses>, kNumSuperClasses> counts{};
  ConfusionMatrix m;
  std::vector<std::string> unlabeled;
  for (const auto& [id, v] : preds.entries) {
    const auto it = labels.find(id);
    if (it == labels.end()) {
      unlabeled.push_back(id);
      continue;
    }
    const auto sc = table.superclass_of(it->second);
    if (!sc) continue;
    const int p = argmax_superclass(aggregated(preds, v, table));
    ++counts[static_cast<std::size_t>(*sc)][static_cast<std::size_t>(p)];
    ++m.row_counts[static_cast<std::size_t>(*sc)];
  }
  if (!unlabeled.empty()) {
    fail(ErrorCode::InvalidArgument, "predictions " + preds.obfuscation + " contain unlabeled images: " +
                                         list_ids(unlabeled));
  }
  for (std::size_t t = 0; t < kNumSuperClasses; ++t) {
    if (m.row_counts[t] == 0) {
      m.empty_rows.push_back(static_cast<int>(t));
      continue;
    }
    for (std::size_t p = 0; p < kNumSuperClasses; ++p) {
      m.percent[t][p] = 100.0 * static_cast<double>(counts[t][p]) / static_cast<double>(m.row_counts[t]);
    }
  }
  return m;
}

}  // namespace imgobf
