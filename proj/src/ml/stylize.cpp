#include "imgobf/ml/stylize.hpp"

#include <sys/wait.h>
#include <spawn.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>

#include "imgobf/core/error.hpp"
#include "imgobf/core/resample.hpp"
#include "imgobf/io/codec.hpp"
#include "imgobf/overlays/assets.hpp"

extern char** environ;

namespace imgobf {

namespace fs = std::filesystem;

namespace {

std::string key_string(const StylizeRequest& r) {
  return r.image_id + "/" + std::string(name_of(r.obfuscation)) + "/" + std::to_string(r.style_id);
}

ImageBuffer run_stylization(const ImageBuffer& img, std::string_view image_id, ObfuscationId id, int index,
                            int count, double resize_factor, const StylizationBackend& backend,
                            const std::vector<fs::path>& references) {
  require(index >= 0 && index < count, std::string(name_of(id)) + ": style index out of range");
  require(resize_factor > 1.0, std::string(name_of(id)) + ": resize factor must exceed 1");
  StylizeRequest req;
  req.image_id = std::string(image_id);
  req.obfuscation = id;
  req.style_id = index;
  if (static_cast<std::size_t>(index) < references.size()) req.style_path = references[static_cast<std::size_t>(index)];

  const ImageBuffer up =
      resize_bilinear(img, upscaled_side(img.height(), resize_factor), upscaled_side(img.width(), resize_factor));
  const ImageBuffer out = backend.stylize(up, req);
  require(!out.empty(), "stylization backend returned an empty image");
  return resize_bilinear(out, img.height(), img.width());
}

}  // namespace

int upscaled_side(int side, double resize_factor) {
  return static_cast<int>(std::lround(side * resize_factor));
}

ImageBuffer NullBackend::stylize(const ImageBuffer&, const StylizeRequest& request) const {
  fail(ErrorCode::BackendUnavailable,
       "stylization backend unavailable for " + std::string(name_of(request.obfuscation)) +
           " (configure --backend cache:<dir> or command:<program>)");
}

fs::path FileCacheBackend::key_path(const StylizeRequest& r) const {
  return dir_ / r.image_id / std::string(name_of(r.obfuscation)) / (std::to_string(r.style_id) + ".png");
}

ImageBuffer FileCacheBackend::stylize(const ImageBuffer&, const StylizeRequest& request) const {
  const fs::path p = key_path(request);
  if (!fs::exists(p)) {
    fail(ErrorCode::CacheMiss, "stylization cache miss for key " + key_string(request) + " (" + p.string() + ")");
  }
  return io::read_image(p);
}

ExternalCommandBackend::ExternalCommandBackend(fs::path program, fs::path scratch_dir, int max_parallel)
    : program_(std::move(program)), scratch_(std::move(scratch_dir)), max_parallel_(max_parallel) {
  require(max_parallel_ >= 1, "external backend: parallelism limit must be >= 1");
}

ImageBuffer ExternalCommandBackend::stylize(const ImageBuffer& input, const StylizeRequest& request) const {
  {
    std::unique_lock lock(mutex_);
    slot_free_.wait(lock, [&] { return running_ < max_parallel_; });
    ++running_;
  }
  struct Release {
    const ExternalCommandBackend* self;
    ~Release() {
      {
        std::lock_guard lock(self->mutex_);
        --self->running_;
      }
      self->slot_free_.notify_one();
    }
  } release{this};

  static std::atomic<std::uint64_t> counter{0};
  const std::string stem = std::to_string(::getpid()) + "_" + std::to_string(counter.fetch_add(1));
  const fs::path in_path = scratch_ / (stem + "_in.png");
  const fs::path out_path = scratch_ / (stem + "_out.png");
  io::write_png(in_path, input);

  const std::string prog = program_.string();
  const std::string in_s = in_path.string();
  const std::string style_s = request.style_path.string();
  const std::string out_s = out_path.string();
  std::vector<char*> argv{const_cast<char*>(prog.c_str()), const_cast<char*>(in_s.c_str()),
                          const_cast<char*>(style_s.c_str()), const_cast<char*>(out_s.c_str()), nullptr};
  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, prog.c_str(), nullptr, nullptr, argv.data(), environ);
  if (rc != 0) {
    fs::remove(in_path);
    fail(ErrorCode::ExternalCommand, "cannot start " + prog + ": " + std::strerror(rc));
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) break;
  }
  fs::remove(in_path);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    fs::remove(out_path);
    fail(ErrorCode::ExternalCommand, prog + " failed for key " + key_string(request));
  }
  ImageBuffer out = io::read_image(out_path);
  fs::remove(out_path);
  return out;
}

ImageBuffer style_transfer(const ImageBuffer& img, std::string_view image_id, int style_index, double resize_factor,
                           const StylizationBackend& backend, const std::vector<fs::path>& styles) {
  return run_stylization(img, image_id, ObfuscationId::StyleTransfer, style_index, kNumStyles, resize_factor, backend,
                         styles);
}

ImageBuffer texturize(const ImageBuffer& img, std::string_view image_id, int texture_index, double resize_factor,
                      const StylizationBackend& backend, const std::vector<fs::path>& textures) {
  return run_stylization(img, image_id, ObfuscationId::Texturize, texture_index, kNumTextures, resize_factor, backend,
                         textures);
}

}  // namespace imgobf
