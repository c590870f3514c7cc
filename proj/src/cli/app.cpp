#include "imgobf/cli/app.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "imgobf/core/error.hpp"
#include "imgobf/core/obfuscation_id.hpp"
#include "imgobf/core/superclass.hpp"
#include "imgobf/eval/report.hpp"
#include "imgobf/io/files.hpp"
#include "imgobf/ml/stylize.hpp"
#include "imgobf/overlays/assets.hpp"
#include "imgobf/pipeline/corpus.hpp"

#ifndef IMGOBF_DEFAULT_ASSETS
#define IMGOBF_DEFAULT_ASSETS ""
#endif

namespace imgobf::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> flatten(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& r : raw) {
    for (auto& x : split_list(r)) out.push_back(std::move(x));
  }
  return out;
}

std::vector<ObfuscationId> resolve_obfuscations(const std::vector<std::string>& names) {
  std::vector<ObfuscationId> out;
  auto add = [&](ObfuscationId id) {
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  for (const auto& n : names) {
    if (n == "all" || n == "all-train" || n == "holdout") {
      for (const auto& i : all_obfuscations()) {
        const bool holdout = i.split == Split::HoldOut;
        if (n == "all" || (n == "holdout") == holdout) add(i.id);
      }
      continue;
    }
    const auto id = parse_obfuscation(n);
    if (!id) {
      throw UsageError("unknown obfuscation \"" + n + "\"; valid names: " + obfuscation_names_joined() +
                       " (or all, all-train, holdout)");
    }
    add(*id);
  }
  if (out.empty()) throw UsageError("--obfuscations selects nothing");
  return out;
}

std::optional<fs::path> assets_path(const std::string& flag) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv("IMGOBF_ASSETS"); env != nullptr && *env != '\0') return fs::path(env);
  const fs::path builtin = IMGOBF_DEFAULT_ASSETS;
  if (!builtin.empty() && fs::exists(builtin / "manifest.json")) return builtin;
  return std::nullopt;
}

std::string version_text() {
  const auto& ranges = ParamRanges::builtin();
  return std::string("imgobf ") + IMGOBF_VERSION + "\nranges config " + ranges.version() + " (sha256 " +
         ranges.checksum().substr(0, 16) + ")\nsuperclass table " + SuperClassTable::builtin().version() + "\n";
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::Io:
    case ErrorCode::BackendUnavailable:
      return kExitUsage;
    default:
      return kExitData;
  }
}

// ------------------------------------------------------------- obfuscate

struct ObfuscateArgs {
  std::string corpus, labels, assets, out, ranges, backend = "null", split = "any";
  std::vector<std::string> obfuscations;
  std::uint64_t seed = 0;
  int workers = 1;
  int backend_parallel = 0;
  bool allow_holdout = false;
};

std::unique_ptr<StylizationBackend> make_backend(const std::string& spec, const fs::path& out_dir, int parallel) {
  if (spec == "null") return std::make_unique<NullBackend>();
  if (spec.rfind("cache:", 0) == 0) return std::make_unique<FileCacheBackend>(spec.substr(6));
  if (spec.rfind("command:", 0) == 0) {
    return std::make_unique<ExternalCommandBackend>(spec.substr(8), out_dir / ".scratch", parallel);
  }
  throw UsageError("--backend must be null, cache:<dir> or command:<program>");
}

int cmd_obfuscate(const ObfuscateArgs& a, std::ostream& out, std::ostream& err) {
  const auto ids = resolve_obfuscations(flatten(a.obfuscations));
  if (a.workers < 1) throw UsageError("--workers must be >= 1");
  if (a.split != "train" && a.split != "holdout" && a.split != "any") {
    throw UsageError("--split must be train, holdout or any");
  }
  bool needs_assets = false;
  for (const auto id : ids) {
    const bool holdout = info(id).split == Split::HoldOut;
    if (holdout && a.split == "train") {
      throw UsageError(std::string(name_of(id)) + " is a hold-out obfuscation and cannot be part of --split=train");
    }
    if (!holdout && a.split == "holdout") {
      throw UsageError(std::string(name_of(id)) + " is a training obfuscation and cannot be part of --split=holdout");
    }
    if (holdout && !a.allow_holdout) {
      throw UsageError(std::string(name_of(id)) + " is a hold-out obfuscation; pass --allow-holdout to generate it");
    }
    needs_assets = needs_assets || info(id).uses_assets;
  }
  const auto pack_dir = assets_path(a.assets);
  if (needs_assets && !pack_dir) throw UsageError("selected obfuscations need --assets (or IMGOBF_ASSETS)");
  const fs::path out_dir = a.out;
  auto backend = make_backend(a.backend, out_dir, a.backend_parallel > 0 ? a.backend_parallel : a.workers);

  const ParamRanges ranges = a.ranges.empty() ? ParamRanges::builtin() : ParamRanges::from_file(a.ranges);
  std::optional<AssetPack> pack;
  if (pack_dir && (needs_assets || a.backend.rfind("command:", 0) == 0)) pack = load_asset_pack(*pack_dir);

  CorpusRun run;
  run.corpus_dir = a.corpus;
  run.labels_file = a.labels;
  run.out_dir = out_dir;
  run.obfuscations = ids;
  run.global_seed = a.seed;
  run.workers = a.workers;
  run.ranges = &ranges;
  run.pack = pack ? &*pack : nullptr;
  run.backend = backend.get();
  run.progress = [&](const std::string& line) { err << "[obfuscate] " << line << "\n"; };
  const CorpusManifest m = run_corpus(run);
  std::error_code ec;
  fs::remove_all(out_dir / ".scratch", ec);
  (void)out;

  for (const auto& f : m.failures) err << "failed: " << f.image_id << " " << f.stage << ": " << f.message << "\n";
  std::size_t outputs = 0;
  for (const auto& r : m.records) outputs += 1 + r.outputs.size();
  err << "[obfuscate] " << m.records.size() << " images, " << outputs << " outputs, " << m.failures.size()
      << " failures\n";
  return m.failures.empty() ? kExitOk : kExitData;
}

// -------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string predictions, labels, manifest, out, oracle;
  std::vector<std::string> formats, metrics, k, worst_case;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  std::set<ReportFormat> formats;
  for (const auto& f : flatten(a.formats)) {
    if (f == "json") {
      formats.insert(ReportFormat::Json);
    } else if (f == "csv") {
      formats.insert(ReportFormat::Csv);
    } else if (f == "svg") {
      formats.insert(ReportFormat::Svg);
    } else {
      throw UsageError("--format accepts json, csv, svg");
    }
  }
  if (!formats.empty() && a.out.empty()) throw UsageError("--format requires --out");
  if (formats.empty() && !a.out.empty()) formats.insert(ReportFormat::Json);

  ReportOptions opt;
  opt.unweighted = false;
  for (const auto& m : flatten(a.metrics)) {
    if (m == "weighted") {
    } else if (m == "unweighted") {
      opt.unweighted = true;
    } else if (m == "topk") {
      if (a.k.empty()) opt.k_values = {3, 5};
    } else if (m == "confusion") {
      opt.confusion = true;
    } else {
      throw UsageError("--metric accepts weighted, unweighted, topk, confusion");
    }
  }
  for (const auto& k : flatten(a.k)) {
    int v = 0;
    try {
      v = std::stoi(k);
    } catch (const std::exception&) {
      throw UsageError("--k values must be integers in 1..16");
    }
    if (v < 1 || v > kNumSuperClasses) throw UsageError("--k values must be integers in 1..16");
    opt.k_values.push_back(v);
  }
  if (a.oracle == "per-image") {
    opt.oracle = OracleMode::PerImage;
  } else if (a.oracle == "per-obfuscation") {
    opt.oracle = OracleMode::PerObfuscation;
  } else if (!a.oracle.empty()) {
    throw UsageError("--oracle must be per-image or per-obfuscation");
  }
  for (const auto& w : flatten(a.worst_case)) {
    if (w == "holdout") continue;
    opt.worst_case_obfuscations.push_back(w);
  }
  if (a.labels.empty() && a.manifest.empty()) throw UsageError("evaluate needs --labels or --manifest");

  const fs::path pred_path = a.predictions;
  if (!fs::exists(pred_path)) throw UsageError("predictions not found: " + a.predictions);
  if (!a.manifest.empty()) opt.manifest_checksum = io::sha256_file(a.manifest);
  const Labels labels = load_labels(a.labels.empty() ? fs::path(a.manifest) : fs::path(a.labels));
  const ModelPredictions models =
      fs::is_directory(pred_path) ? load_prediction_dir(pred_path) : load_prediction_bundle(pred_path);
  const EvalReport report = build_report(models, labels, SuperClassTable::builtin(), opt);

  const std::map<ReportFormat, const char*> names{
      {ReportFormat::Json, "report.json"}, {ReportFormat::Csv, "report.csv"}, {ReportFormat::Svg, "report.svg"}};
  for (const auto f : formats) emit_report(report, f, fs::path(a.out) / names.at(f));

  for (const auto& m : report.models) {
    err << "[evaluate] " << m.model << ": worst case " << (m.worst_case ? *m.worst_case : 0.0);
    if (m.excluded_images > 0) err << " (" << m.excluded_images << " images outside the 16 super-classes)";
    if (m.superclass_inputs) err << " (super-class inputs)";
    err << "\n";
    for (const auto& [k, table] : m.topk) {
      for (const auto& [obf, v] : table) err << "  top" << k << " " << obf << " " << v << "\n";
    }
  }
  const auto headline = report.headline();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", headline.value_or(0.0));
  out << buf << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic image obfuscation benchmark pipeline and evaluator", "imgobf"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print tool, ranges and super-class table versions");

  ObfuscateArgs ob;
  auto* obf = app.add_subcommand("obfuscate", "Apply obfuscations to a corpus");
  obf->add_option("--corpus", ob.corpus, "Directory of PNG/JPEG images")->required();
  obf->add_option("--labels", ob.labels, "CSV image_id,class_id")->required();
  obf->add_option("--assets", ob.assets, "Asset pack directory (default: $IMGOBF_ASSETS)");
  obf->add_option("--seed", ob.seed, "Global seed")->required();
  obf->add_option("--obfuscations", ob.obfuscations, "Names, all-train, holdout or all")->required()->delimiter(',');
  obf->add_option("--out", ob.out, "Output directory")->required();
  obf->add_option("--ranges", ob.ranges, "Parameter ranges JSON (default: built in)");
  obf->add_option("--workers", ob.workers, "Parallel images");
  obf->add_option("--split", ob.split, "train, holdout or any");
  obf->add_flag("--allow-holdout", ob.allow_holdout, "Permit hold-out obfuscations");
  obf->add_option("--backend", ob.backend, "null, cache:<dir> or command:<program>");
  obf->add_option("--backend-parallel", ob.backend_parallel, "Concurrent external backend calls");

  EvaluateArgs ev;
  auto* eva = app.add_subcommand("evaluate", "Score prediction files");
  eva->add_option("--predictions", ev.predictions, "Prediction directory or JSON bundle")->required();
  eva->add_option("--labels", ev.labels, "CSV image_id,class_id");
  eva->add_option("--manifest", ev.manifest, "Corpus manifest (labels and checksum)");
  eva->add_option("--out", ev.out, "Report directory");
  eva->add_option("--format", ev.formats, "json, csv, svg")->delimiter(',');
  eva->add_option("--metric", ev.metrics, "weighted, unweighted, topk, confusion")->delimiter(',');
  eva->add_option("--k", ev.k, "k values for top-k")->delimiter(',');
  eva->add_option("--oracle", ev.oracle, "per-image or per-obfuscation");
  eva->add_option("--worst-case", ev.worst_case, "Sets combined for the worst case (default: holdout)")->delimiter(',');

  auto* assets = app.add_subcommand("assets", "Asset pack tools");
  assets->require_subcommand(1);
  std::string verify_dir;
  auto* verify = assets->add_subcommand("verify", "Check counts, checksums and scene geometry");
  verify->add_option("dir", verify_dir, "Asset pack directory (default: $IMGOBF_ASSETS)");
  std::string generate_dir;
  auto* generate = assets->add_subcommand("generate", "Write the procedural default pack");
  generate->add_option("--out", generate_dir, "Output directory")->required();

  std::string superclass_out;
  auto* superclasses = app.add_subcommand("superclasses", "Export the super-class table as JSON");
  superclasses->add_option("--out", superclass_out, "Output file (default: stdout)");

  auto* list = app.add_subcommand("list", "List the obfuscations");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "imgobf: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (show_version) {
      out << version_text();
      return kExitOk;
    }
    if (obf->parsed()) return cmd_obfuscate(ob, out, err);
    if (eva->parsed()) return cmd_evaluate(ev, out, err);
    if (verify->parsed()) {
      const auto dir = assets_path(verify_dir);
      if (!dir) throw UsageError("assets verify needs a directory (or IMGOBF_ASSETS)");
      const auto issues = verify_asset_pack(*dir);
      for (const auto& i : issues) err << "invalid: " << i << "\n";
      if (!issues.empty()) return kExitData;
      err << "asset pack " << dir->string() << " is valid\n";
      return kExitOk;
    }
    if (generate->parsed()) {
      generate_default_pack(generate_dir);
      return kExitOk;
    }
    if (superclasses->parsed()) {
      if (superclass_out.empty()) {
        out << builtin_superclass_json();
      } else {
        io::write_atomic(superclass_out, builtin_superclass_json());
      }
      return kExitOk;
    }
    if (list->parsed()) {
      for (const auto& i : all_obfuscations()) {
        out << i.name << (i.split == Split::HoldOut ? "\tholdout" : "\ttrain")
            << (i.uses_assets ? "\tassets" : "") << (i.uses_backend ? "\tbackend" : "") << "\n";
      }
      return kExitOk;
    }
    out << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "imgobf: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "imgobf: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "imgobf: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace imgobf::cli
