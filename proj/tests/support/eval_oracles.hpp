#pragma once

// Direct-loop reference implementations for the evaluation metrics. They
// share no code with the library beyond the super-class membership table.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "imgobf/eval/metrics.hpp"

namespace oracles {

using imgobf::kNumSuperClasses;

inline const imgobf::SuperClassTable& table() { return imgobf::SuperClassTable::builtin(); }

/// Super-class index of an ImageNet class by scanning the member lists, or -1.
inline int owner(int class_id) {
  const auto e = table().entries();
  for (std::size_t s = 0; s < e.size(); ++s) {
    for (int m : e[s].members) {
      if (m == class_id) return static_cast<int>(s);
    }
  }
  return -1;
}

inline std::array<double, kNumSuperClasses> aggregate_probs(const std::vector<double>& v, imgobf::PredictionKind kind) {
  std::array<double, kNumSuperClasses> out{};
  if (kind == imgobf::PredictionKind::SuperClass) {
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }
  const auto e = table().entries();
  for (std::size_t s = 0; s < e.size(); ++s) {
    double sum = 0.0;
    for (int m : e[s].members) sum += v[static_cast<std::size_t>(m)];
    out[s] = sum / static_cast<double>(e[s].members.size());
  }
  return out;
}

/// Rank of `truth` after a stable sort by descending probability.
inline int rank_of(const std::array<double, kNumSuperClasses>& p, int truth) {
  std::array<int, kNumSuperClasses> order{};
  for (int i = 0; i < kNumSuperClasses; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return p[static_cast<std::size_t>(a)] > p[static_cast<std::size_t>(b)]; });
  return static_cast<int>(std::find(order.begin(), order.end(), truth) - order.begin());
}

/// image id -> correct, over labeled images inside the 207 member classes.
inline std::map<std::string, bool> correctness(const imgobf::PredictionSet& set, const imgobf::Labels& labels, int k = 1) {
  std::map<std::string, bool> out;
  for (const auto& [id, v] : set.entries) {
    const int truth = owner(labels.at(id));
    if (truth < 0) continue;
    out[id] = rank_of(aggregate_probs(v, set.kind), truth) < k;
  }
  return out;
}

inline double accuracy(const std::map<std::string, bool>& correct, const imgobf::Labels& labels, bool weighted) {
  if (correct.empty()) return 0.0;
  if (!weighted) {
    double hits = 0.0;
    for (const auto& [id, ok] : correct) hits += ok ? 1.0 : 0.0;
    return hits / static_cast<double>(correct.size());
  }
  std::array<double, kNumSuperClasses> hits{};
  std::array<double, kNumSuperClasses> totals{};
  for (const auto& [id, ok] : correct) {
    const auto s = static_cast<std::size_t>(owner(labels.at(id)));
    totals[s] += 1.0;
    hits[s] += ok ? 1.0 : 0.0;
  }
  double sum = 0.0;
  int present = 0;
  for (std::size_t s = 0; s < totals.size(); ++s) {
    if (totals[s] == 0.0) continue;
    sum += hits[s] / totals[s];
    ++present;
  }
  return sum / present;
}

inline std::map<std::string, bool> conjunction(const std::vector<std::map<std::string, bool>>& parts) {
  std::map<std::string, bool> out = parts.front();
  for (const auto& p : parts) {
    for (auto& [id, ok] : out) ok = ok && p.at(id);
  }
  return out;
}

inline double worst_case(const std::vector<imgobf::PredictionSet>& sets, const imgobf::Labels& labels, bool weighted) {
  std::vector<std::map<std::string, bool>> parts;
  for (const auto& s : sets) parts.push_back(correctness(s, labels));
  return accuracy(conjunction(parts), labels, weighted);
}

/// Exhaustive search over every model-to-obfuscation assignment.
inline double oracle_per_obfuscation(const std::map<std::string, std::vector<imgobf::PredictionSet>>& models,
                                     const imgobf::Labels& labels) {
  std::vector<const std::vector<imgobf::PredictionSet>*> list;
  for (const auto& [name, sets] : models) list.push_back(&sets);
  const std::size_t obfs = list.front()->size();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < obfs; ++i) combos *= list.size();
  double best = -1.0;
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<imgobf::PredictionSet> chosen;
    std::size_t rest = code;
    for (std::size_t o = 0; o < obfs; ++o) {
      const auto* sets = list[rest % list.size()];
      rest /= list.size();
      // Sets of one model may come in any order; match by name.
      const std::string& want = (*list.front())[o].obfuscation;
      chosen.push_back(*std::find_if(sets->begin(), sets->end(), [&](const auto& s) { return s.obfuscation == want; }));
    }
    best = std::max(best, worst_case(chosen, labels, true));
  }
  return best;
}

inline double oracle_per_image(const std::map<std::string, std::vector<imgobf::PredictionSet>>& models,
                               const imgobf::Labels& labels) {
  const auto& first = models.begin()->second;
  std::vector<std::map<std::string, bool>> parts;
  for (const auto& ref : first) {
    std::map<std::string, bool> any;
    for (const auto& [name, sets] : models) {
      const auto& s = *std::find_if(sets.begin(), sets.end(), [&](const auto& x) { return x.obfuscation == ref.obfuscation; });
      for (const auto& [id, ok] : correctness(s, labels)) any[id] = any[id] || ok;
    }
    parts.push_back(any);
  }
  return accuracy(conjunction(parts), labels, true);
}

inline std::array<std::array<double, kNumSuperClasses>, kNumSuperClasses> confusion(const imgobf::PredictionSet& set,
                                                                                   const imgobf::Labels& labels) {
  std::array<std::array<double, kNumSuperClasses>, kNumSuperClasses> counts{};
  std::array<double, kNumSuperClasses> rows{};
  for (const auto& [id, v] : set.entries) {
    const int truth = owner(labels.at(id));
    if (truth < 0) continue;
    const auto p = aggregate_probs(v, set.kind);
    int arg = 0;
    for (int s = 1; s < kNumSuperClasses; ++s) {
      if (p[static_cast<std::size_t>(s)] > p[static_cast<std::size_t>(arg)]) arg = s;
    }
    counts[static_cast<std::size_t>(truth)][static_cast<std::size_t>(arg)] += 1.0;
    rows[static_cast<std::size_t>(truth)] += 1.0;
  }
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (auto& c : counts[t]) c = rows[t] > 0 ? 100.0 * c / rows[t] : 0.0;
  }
  return counts;
}

/// Small random instance: labels plus `models` x `obfuscations` prediction
/// sets over the same ids. Super-class vectors use small integers so ties
/// occur; ImageNet vectors put random mass on a few member classes.
struct Instance {
  imgobf::Labels labels;
  std::map<std::string, std::vector<imgobf::PredictionSet>> models;
};

inline Instance random_instance(std::mt19937_64& gen, int models, int obfuscations, int images) {
  Instance inst;
  const auto e = table().entries();
  std::uniform_int_distribution<int> sc(0, kNumSuperClasses - 1);
  std::uniform_int_distribution<int> any_class(0, imgobf::kNumImageNetClasses - 1);
  std::bernoulli_distribution outside(0.1);
  for (int i = 0; i < images; ++i) {
    const auto& members = e[static_cast<std::size_t>(sc(gen))].members;
    const int c = outside(gen) ? any_class(gen) : members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(gen)];
    inst.labels["im" + std::to_string(i)] = c;
  }
  std::bernoulli_distribution superclass_kind(0.5);
  std::uniform_int_distribution<int> small(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int m = 0; m < models; ++m) {
    auto& sets = inst.models["model" + std::to_string(m)];
    for (int o = 0; o < obfuscations; ++o) {
      imgobf::PredictionSet set;
      set.obfuscation = "Obf" + std::to_string(o);
      set.kind = superclass_kind(gen) ? imgobf::PredictionKind::SuperClass : imgobf::PredictionKind::ImageNet;
      for (const auto& [id, c] : inst.labels) {
        std::vector<double> v;
        if (set.kind == imgobf::PredictionKind::SuperClass) {
          v.resize(kNumSuperClasses);
          for (auto& x : v) x = small(gen);
          if (u(gen) < 0.5 && owner(c) >= 0) v[static_cast<std::size_t>(owner(c))] = 3;
        } else {
          v.assign(imgobf::kNumImageNetClasses, 0.0);
          double total = 0.0;
          for (int j = 0; j < 4; ++j) {
            const double w = u(gen);
            v[static_cast<std::size_t>(j == 0 ? c : any_class(gen))] += w;
            total += w;
          }
          for (auto& x : v) x /= total;
        }
        set.entries[id] = std::move(v);
      }
      sets.push_back(std::move(set));
    }
  }
  return inst;
}

}  // namespace oracles
