#pragma once

#include "imgobf/core/image.hpp"
#include "imgobf/ml/stylize.hpp"
#include "imgobf/overlays/assets.hpp"
#include "imgobf/pipeline/params.hpp"

namespace imgobf {

inline constexpr int kBenchmarkSide = 224;

/// Applies the obfuscation described by `params` to a 224x224 image. Asset
/// based obfuscations need `pack`; transform-internal randomness comes from
/// transform_rng(params.seed).
ImageBuffer obfuscate_image(const ImageBuffer& img, const SampledParams& params, const AssetPack* pack,
                            const StylizationBackend& backend);

}  // namespace imgobf
