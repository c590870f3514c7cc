#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "imgobf/eval/metrics.hpp"

namespace imgobf {

using ModelPredictions = std::map<std::string, std::vector<PredictionSet>>;  // model -> sets

/// CSV with header `image_id,p0,...,p999` (ImageNet) or `image_id,s0,...,s15`
/// (super-class); one row per image. The set is validated before return.
PredictionSet load_prediction_csv(const std::filesystem::path& path, const std::string& obfuscation);

/// {"models": {model: {obfuscation: {"kind": "imagenet"|"superclass",
///                                   "predictions": {image_id: [..]}}}}}
ModelPredictions load_prediction_bundle(const std::filesystem::path& path);

/// `<dir>/<model>/<Obfuscation>.csv`; CSV files directly inside `dir` form a
/// single model named after the directory.
ModelPredictions load_prediction_dir(const std::filesystem::path& dir);

/// Labels CSV (`image_id,class_id`) or a corpus manifest.json.
Labels load_labels(const std::filesystem::path& path);

}  // namespace imgobf
