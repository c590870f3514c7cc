#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>

#include "imgobf/core/error.hpp"
#include "imgobf/core/superclass.hpp"
#include "imgobf/eval/report.hpp"
#include "imgobf/pipeline/obfuscate.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace imgobf;

namespace {

ObfuscationId parse_id(const std::string& name) {
  const auto id = parse_obfuscation(name);
  if (!id) fail(ErrorCode::InvalidArgument, "unknown obfuscation '" + name + "'; valid names: " + obfuscation_names_joined());
  return *id;
}

fs::path resolve_assets(const std::string& path) {
  if (!path.empty()) return path;
  if (const char* env = std::getenv("IMGOBF_ASSETS"); env != nullptr && *env != '\0') return env;
  return IMGOBF_DEFAULT_ASSETS;
}

// Packs are immutable after load, so one copy per directory is shared.
const AssetPack& cached_pack(const fs::path& dir) {
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<AssetPack>> packs;
  std::lock_guard lock(mutex);
  auto& slot = packs[fs::absolute(dir).lexically_normal().string()];
  if (!slot) slot = std::make_unique<AssetPack>(load_asset_pack(dir));
  return *slot;
}

ImageBuffer to_buffer(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) throw py::value_error("image must have shape (height, width, 3)");
  std::vector<double> values(a.data(), a.data() + a.size());
  return ImageBuffer::from_values(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), std::move(values));
}

py::array_t<double> to_array(const ImageBuffer& img) {
  py::array_t<double> out({img.height(), img.width(), 3});
  std::copy(img.values().begin(), img.values().end(), out.mutable_data());
  return out;
}

SampledParams sample(const std::string& name, std::uint64_t seed, const std::string& image_id,
                     const std::map<std::string, py::object>& overrides) {
  const ObfuscationId id = parse_id(name);
  SampledParams p = sample_params(ParamRanges::builtin(), id, seed, image_id);
  const auto& specs = ParamRanges::builtin().of(id);
  for (const auto& [key, value] : overrides) {
    const auto it = specs.find(key);
    if (it == specs.end()) fail(ErrorCode::InvalidArgument, name + " has no parameter '" + key + "'");
    if (it->second.type == RangeSpec::Type::Real) {
      p.values[key] = value.cast<double>();
    } else {
      p.values[key] = value.cast<std::int64_t>();
    }
  }
  return p;
}

py::dict params_dict(const SampledParams& p) {
  py::dict d;
  for (const auto& [key, value] : p.values) {
    std::visit([&](auto v) { d[py::str(key)] = v; }, value);
  }
  return d;
}

std::string evaluate_json(const std::map<std::string, std::map<std::string, std::map<std::string, std::vector<double>>>>& predictions,
                          const std::map<std::string, int>& labels, const std::vector<int>& k, bool unweighted,
                          bool confusion, const std::vector<std::string>& worst_case, const std::string& oracle) {
  ModelPredictions models;
  for (const auto& [model, sets] : predictions) {
    for (const auto& [obf, entries] : sets) {
      PredictionSet s;
      s.obfuscation = obf;
      s.entries = entries;
      if (!entries.empty() && entries.begin()->second.size() == static_cast<std::size_t>(kNumSuperClasses)) {
        s.kind = PredictionKind::SuperClass;
      }
      s.validate();
      models[model].push_back(std::move(s));
    }
  }
  ReportOptions opts;
  opts.k_values = k;
  opts.unweighted = unweighted;
  opts.confusion = confusion;
  opts.worst_case_obfuscations = worst_case;
  if (oracle == "per-image") {
    opts.oracle = OracleMode::PerImage;
  } else if (oracle == "per-obfuscation") {
    opts.oracle = OracleMode::PerObfuscation;
  } else if (!oracle.empty()) {
    fail(ErrorCode::InvalidArgument, "oracle must be 'per-image' or 'per-obfuscation'");
  }
  return report_to_json(build_report(models, labels, SuperClassTable::builtin(), opts)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.attr("__version__") = IMGOBF_VERSION;

  m.def(
      "obfuscate",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& image, const std::string& name,
         std::uint64_t seed, const std::string& image_id, const std::map<std::string, py::object>& overrides,
         const std::string& assets) {
        const ImageBuffer img = to_buffer(image);
        const SampledParams p = sample(name, seed, image_id, overrides);
        const AssetPack* pack = info(p.obfuscation).uses_assets ? &cached_pack(resolve_assets(assets)) : nullptr;
        ImageBuffer out;
        {
          py::gil_scoped_release release;
          out = obfuscate_image(img, p, pack, NullBackend());
        }
        return to_array(out);
      },
      py::arg("image"), py::arg("name"), py::arg("seed"), py::arg("image_id") = "",
      py::arg("overrides") = std::map<std::string, py::object>{}, py::arg("assets") = "");

  m.def(
      "sample_params",
      [](const std::string& name, std::uint64_t seed, const std::string& image_id) {
        return params_dict(sample(name, seed, image_id, {}));
      },
      py::arg("name"), py::arg("seed"), py::arg("image_id") = "");

  m.def(
      "evaluate_json",
      [](const std::map<std::string, std::map<std::string, std::map<std::string, std::vector<double>>>>& predictions,
         const std::map<std::string, int>& labels, const std::vector<int>& k, bool unweighted, bool confusion,
         const std::vector<std::string>& worst_case, const std::string& oracle) {
        py::gil_scoped_release release;
        return evaluate_json(predictions, labels, k, unweighted, confusion, worst_case, oracle);
      },
      py::arg("predictions"), py::arg("labels"), py::arg("k"), py::arg("unweighted"), py::arg("confusion"),
      py::arg("worst_case"), py::arg("oracle"));

  m.def("list_obfuscations", [] {
    py::list out;
    for (const auto& i : all_obfuscations()) {
      py::dict d;
      d["name"] = std::string(i.name);
      d["holdout"] = i.split == Split::HoldOut;
      d["uses_assets"] = i.uses_assets;
      d["uses_backend"] = i.uses_backend;
      out.append(d);
    }
    return out;
  });

  m.def("superclass_table_json", [] { return builtin_superclass_json(); });
}
