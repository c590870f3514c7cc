#pragma once

#include <condition_variable>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "imgobf/core/image.hpp"
#include "imgobf/core/obfuscation_id.hpp"

namespace imgobf {

struct StylizeRequest {
  std::string image_id;
  ObfuscationId obfuscation = ObfuscationId::StyleTransfer;  // StyleTransfer or Texturize
  int style_id = 0;
  std::filesystem::path style_path;  // reference image, empty when the pack ships none
};

/// Provider for the neural obfuscations. Implementations must tolerate
/// concurrent calls.
class StylizationBackend {
 public:
  virtual ~StylizationBackend() = default;
  virtual std::string describe() const = 0;
  virtual ImageBuffer stylize(const ImageBuffer& input, const StylizeRequest& request) const = 0;
};

/// Always throws ErrorCode::BackendUnavailable.
class NullBackend final : public StylizationBackend {
 public:
  std::string describe() const override { return "null"; }
  ImageBuffer stylize(const ImageBuffer& input, const StylizeRequest& request) const override;
};

/// Precomputed outputs under <dir>/<image_id>/<obfuscation>/<style_id>.png.
class FileCacheBackend final : public StylizationBackend {
 public:
  explicit FileCacheBackend(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::string describe() const override { return "cache:" + dir_.string(); }
  ImageBuffer stylize(const ImageBuffer& input, const StylizeRequest& request) const override;

  std::filesystem::path key_path(const StylizeRequest& request) const;

 private:
  std::filesystem::path dir_;
};

/// Runs `program in_path style_path out_path` (no shell) and reads out_path
/// back. At most `max_parallel` invocations run at once.
class ExternalCommandBackend final : public StylizationBackend {
 public:
  ExternalCommandBackend(std::filesystem::path program, std::filesystem::path scratch_dir, int max_parallel = 1);
  std::string describe() const override { return "command:" + program_.string(); }
  ImageBuffer stylize(const ImageBuffer& input, const StylizeRequest& request) const override;

 private:
  std::filesystem::path program_;
  std::filesystem::path scratch_;
  int max_parallel_;
  mutable std::mutex mutex_;
  mutable std::condition_variable slot_free_;
  mutable int running_ = 0;
};

/// Upscales by `resize_factor`, hands the result to the backend and resizes
/// the answer back to the input size.
ImageBuffer style_transfer(const ImageBuffer& img, std::string_view image_id, int style_index, double resize_factor,
                           const StylizationBackend& backend, const std::vector<std::filesystem::path>& styles = {});
ImageBuffer texturize(const ImageBuffer& img, std::string_view image_id, int texture_index, double resize_factor,
                      const StylizationBackend& backend, const std::vector<std::filesystem::path>& textures = {});

/// Size handed to the backend for a side and factor: round(side * factor).
int upscaled_side(int side, double resize_factor);

}  // namespace imgobf
