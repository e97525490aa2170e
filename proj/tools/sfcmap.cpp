// sfcmap: voxelize structures, map grids between dimensions along
// space-filling curves, and report locality measures.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 capacity error.

#include <sfcmap/dataset/manifest.hpp>
#include <sfcmap/dataset/pipeline.hpp>
#include <sfcmap/dataset/png.hpp>
#include <sfcmap/dataset/split.hpp>
#include <sfcmap/dataset/tensor_file.hpp>
#include <sfcmap/locality.hpp>

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace sfcmap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCapacity = 3;

struct GlobalOptions {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool keep_going = false;
  bool verbose = false;
};

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::CapacityExceeded ? kExitCapacity : kExitData;
}

struct ItemResult {
  bool ok = false;
  std::string error;
  int code = kExitOk;
  std::optional<dataset::ManifestEntry> entry;
  std::string note;
};

// Runs `work` for every index with up to `jobs` threads; results keep input order.
std::vector<ItemResult> run_items(std::size_t count, unsigned jobs,
                                  const std::function<ItemResult(std::size_t)>& work) {
  std::vector<ItemResult> results(count);
  auto guarded = [&](std::size_t i) {
    try {
      results[i] = work(i);
    } catch (const Error& e) {
      results[i] = {false, e.what(), exit_code_for(e), std::nullopt, {}};
    } catch (const std::exception& e) {
      results[i] = {false, e.what(), kExitData, std::nullopt, {}};
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) guarded(i);
      });
  }
  return results;
}

// Prints per-item failures in input order and picks the exit code.
int report(const std::vector<ItemResult>& results, const std::vector<std::string>& labels,
           const GlobalOptions& global) {
  std::size_t failures = 0;
  int code = kExitOk;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].ok) {
      if (global.verbose) {
        std::cerr << labels[i] << ": ok";
        if (!results[i].note.empty()) std::cerr << " (" << results[i].note << ")";
        std::cerr << '\n';
      }
      continue;
    }
    ++failures;
    std::cerr << "error: " << labels[i] << ": " << results[i].error << '\n';
    code = std::max(code, results[i].code);
  }
  if (failures == 0) return kExitOk;
  if (global.keep_going) {
    std::cerr << failures << " of " << results.size() << " inputs failed\n";
    return kExitOk;
  }
  return code;
}

std::string output_path(const std::string& input, const std::string& out_dir,
                        const std::string& suffix) {
  const fs::path in(input);
  const fs::path dir = out_dir.empty() ? in.parent_path() : fs::path(out_dir);
  return (dir / (in.stem().string() + suffix)).string();
}

dataset::ManifestEntry describe(const dataset::TensorFile& tensor, std::string id,
                                std::string label, std::string source, std::string output) {
  dataset::ManifestEntry e;
  e.id = std::move(id);
  e.label = std::move(label);
  e.source = std::move(source);
  e.output = std::move(output);
  e.shape = dataset::file_extents(dataset::shape_of(tensor.grid));
  e.channels = dataset::channels_of(tensor.grid);
  return e;
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

// ---------------------------------------------------------------------------

struct VoxelizeArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string channels = "ras8";
  std::uint64_t window_side = 64;
  double resolution = 1.0;
  bool hetatm = false;
  std::string label;
  std::string manifest;
  std::vector<std::string> radii;
  std::optional<double> default_radius;
};

int cmd_voxelize(const VoxelizeArgs& args, const GlobalOptions& global) {
  dataset::VoxelizeOptions options;
  options.window = {args.window_side, args.resolution};
  options.window.validate();
  options.scheme = args.channels == "ras8" ? dataset::SchemeKind::Ras8 : dataset::SchemeKind::Geometric;
  options.parse.include_hetatm = args.hetatm;
  options.raster.default_radius = args.default_radius;
  for (const auto& item : args.radii) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--radius", "expected ELEMENT=RADIUS");
    std::string element = item.substr(0, eq);
    for (char& c : element) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    options.raster.radius_overrides[element] = std::stod(item.substr(eq + 1));
  }
  ensure_dir(args.out_dir);

  const auto results = run_items(args.inputs.size(), global.jobs, [&](std::size_t i) {
    const std::string& input = args.inputs[i];
    auto result = dataset::voxelize_file(input, options);
    const std::string out = output_path(input, args.out_dir, ".sfct");
    dataset::save_tensor(out, result.tensor);
    ItemResult r{true, {}, kExitOk,
                 describe(result.tensor, fs::path(input).stem().string(), args.label, input, out), {}};
    if (result.clipped_atoms > 0)
      r.note = std::to_string(result.clipped_atoms) + " of " + std::to_string(result.atoms) +
               " atoms outside the window";
    return r;
  });

  for (std::size_t i = 0; i < results.size(); ++i)
    if (results[i].ok && results[i].note.find("outside") != std::string::npos)
      std::cerr << "warning: " << args.inputs[i] << ": " << results[i].note << '\n';

  if (!args.manifest.empty()) {
    dataset::Manifest manifest;
    for (const auto& r : results)
      if (r.entry) manifest.push_back(*r.entry);
    dataset::save_manifest(args.manifest, manifest);
  }
  return report(results, args.inputs, global);
}

// ---------------------------------------------------------------------------

struct TransformArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string manifest;
  std::string manifest_out;
  unsigned target_dim = 2;
  std::optional<unsigned> target_order;
  std::string family = "hilbert";
};

using Transform = std::function<dataset::TensorFile(const dataset::TensorFile&)>;

int run_transform(const TransformArgs& args, const GlobalOptions& global, const Transform& transform,
                  const std::string& suffix) {
  dataset::Manifest manifest;
  std::vector<std::string> inputs = args.inputs;
  if (!args.manifest.empty()) {
    manifest = dataset::load_manifest(args.manifest);
    for (const auto& e : manifest) inputs.push_back(e.output);
  }
  if (inputs.empty()) throw CLI::ValidationError("inputs", "no input files given");
  ensure_dir(args.out_dir);

  const auto results = run_items(inputs.size(), global.jobs, [&](std::size_t i) {
    const auto input = dataset::load_tensor(inputs[i]);
    const auto output = transform(input);
    const std::string out = output_path(inputs[i], args.out_dir, suffix);
    dataset::save_tensor(out, output);
    return ItemResult{true, {}, kExitOk,
                      describe(output, fs::path(inputs[i]).stem().string(), {}, inputs[i], out), {}};
  });

  if (!args.manifest.empty()) {
    const std::size_t offset = args.inputs.size();
    for (std::size_t k = 0; k < manifest.size(); ++k) {
      const auto& r = results[offset + k];
      if (!r.ok) continue;  // failed entries keep their previous record
      manifest[k].output = r.entry->output;
      manifest[k].shape = r.entry->shape;
      manifest[k].channels = r.entry->channels;
    }
    dataset::save_manifest(args.manifest_out.empty() ? args.manifest : args.manifest_out, manifest);
  }
  return report(results, inputs, global);
}

int cmd_encode(const TransformArgs& args, const GlobalOptions& global) {
  dataset::EncodeOptions options;
  options.target_dimension = args.target_dim;
  options.target_order = args.target_order;
  options.family = parse_family(args.family);
  dataset::MappingCache cache;
  return run_transform(args, global,
                       [&](const dataset::TensorFile& t) { return dataset::encode_tensor(t, options, cache); },
                       ".enc.sfct");
}

int cmd_decode(const TransformArgs& args, const GlobalOptions& global) {
  dataset::MappingCache cache;
  return run_transform(args, global,
                       [&](const dataset::TensorFile& t) { return dataset::decode_tensor(t, cache); },
                       ".dec.sfct");
}

// ---------------------------------------------------------------------------

struct SplitArgs {
  std::string manifest;
  std::string out;
  std::vector<double> fractions{0.7, 0.1, 0.2};
  bool no_stratify = false;
};

int cmd_split(const SplitArgs& args, const GlobalOptions& global) {
  dataset::validate_fractions(args.fractions);
  auto manifest = dataset::load_manifest(args.manifest);
  dataset::SplitOptions options;
  std::copy(args.fractions.begin(), args.fractions.end(), options.fractions.begin());
  options.seed = global.seed;
  options.stratify = !args.no_stratify;
  dataset::assign_splits(manifest, options);
  dataset::save_manifest(args.out.empty() ? args.manifest : args.out, manifest);
  const auto sizes = dataset::split_sizes(manifest);
  std::cout << "train " << sizes[0] << "\nvalidation " << sizes[1] << "\ntest " << sizes[2] << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct LocalityArgs {
  std::string measure = "eq1";
  std::string family = "hilbert";
  unsigned m = 2;
  unsigned p = 2;
  std::string target_family;
  unsigned target_dim = 1;
  std::optional<unsigned> target_order;
  std::uint64_t kernel_m = 0;
  std::uint64_t kernel_l = 0;
  bool exact = false;
  std::optional<std::uint64_t> pairs;
  std::uint64_t exact_limit = 4096;
};

std::string format_value(const LocalityReport& r) {
  if (r.kind == MeasureKind::KernelCount) return std::to_string(r.count);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", r.value);
  return buf;
}

int cmd_locality(const LocalityArgs& args, const GlobalOptions& global) {
  if (args.exact == args.pairs.has_value())
    throw CLI::ValidationError("mode", "give exactly one of --exact or --pairs N");
  LocalityMode mode = Exact{};
  if (args.pairs) mode = Sampled{global.seed, *args.pairs};
  LocalityLimits limits;
  limits.exact_points = args.exact_limit;

  const CurveSpec source(parse_family(args.family), args.m, args.p);
  LocalityReport result;
  try {
    if (args.measure == "eq1") {
      result = curve_locality(source, mode, limits);
    } else if (args.measure == "eq2" || args.measure == "eq3") {
      dataset::EncodeOptions options;
      options.family = parse_family(args.target_family.empty() ? args.family : args.target_family);
      options.target_dimension = args.target_dim;
      options.target_order = args.target_order;
      const Mapping mapping(source, dataset::target_curve(source, options));
      result = args.measure == "eq2"
                   ? composed_locality(mapping, mode, limits)
                   : kernel_locality(mapping, KernelSpec{args.kernel_m, args.kernel_l}, mode, limits);
    } else {
      throw CLI::ValidationError("--measure", "expected eq1, eq2 or eq3");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CapacityExceeded) {
      std::cerr << "error: " << e.what() << "\nhint: rerun with --pairs N for sampled mode\n";
      return kExitCapacity;
    }
    throw;
  }

  std::cout << "measure,value,pairs,exact,seed\n"
            << to_string(result.kind) << ',' << format_value(result) << ',' << result.pairs << ','
            << (result.exact ? "true" : "false") << ','
            << (result.seed ? std::to_string(*result.seed) : std::string{}) << '\n';
  if (global.verbose) {
    std::cerr << to_string(result.kind) << " over " << result.pairs << " pairs of "
              << to_string(source) << ": " << format_value(result);
    if (result.pairs > 0 && result.kind != MeasureKind::KernelCount)
      std::cerr << " (mean " << result.value / static_cast<double>(result.pairs) << ")";
    std::cerr << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PngArgs {
  std::string input;
  std::string out;
  std::string colors;
};

int cmd_export_png(const PngArgs& args, const GlobalOptions&) {
  const auto tensor = dataset::load_tensor(args.input);
  const auto palette = args.colors.empty() ? dataset::default_palette() : dataset::parse_palette(args.colors);
  const std::string out = args.out.empty() ? output_path(args.input, {}, ".png") : args.out;
  dataset::write_file_bytes(out, dataset::render_png(tensor.grid, palette));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Map voxel grids between dimensions along space-filling curves"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for shuffling and pair sampling")->capture_default_str();
  app.add_option("--jobs,-j", global.jobs, "Worker threads for per-file commands")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--keep-going", global.keep_going, "Continue past failing inputs and exit 0");
  app.add_flag("--verbose,-v", global.verbose, "Per-item progress on stderr");

  VoxelizeArgs vox;
  auto* voxelize = app.add_subcommand("voxelize", "Render binvox or ATOM-record files into 3-D tensors");
  voxelize->add_option("inputs", vox.inputs, "Input files (.binvox or PDB-style text)")->required();
  voxelize->add_option("--out-dir,-o", vox.out_dir, "Output directory");
  voxelize->add_option("--channels", vox.channels, "Channel scheme for atom input")
      ->check(CLI::IsMember({"ras8", "geom"}))
      ->capture_default_str();
  voxelize->add_option("--window-side", vox.window_side, "Voxels per window edge")->capture_default_str();
  voxelize->add_option("--resolution", vox.resolution, "Angstrom per voxel")->capture_default_str();
  voxelize->add_flag("--hetatm", vox.hetatm, "Include HETATM records");
  voxelize->add_option("--label", vox.label, "Class label recorded in the manifest");
  voxelize->add_option("--manifest", vox.manifest, "Write a JSON-lines manifest here");
  voxelize->add_option("--radius", vox.radii, "Override a van der Waals radius, ELEMENT=ANGSTROM");
  voxelize->add_option("--default-radius", vox.default_radius, "Radius for elements not in the table");

  TransformArgs enc;
  auto* encode_cmd = app.add_subcommand("encode", "Map tensors onto a lower-dimensional grid");
  encode_cmd->add_option("inputs", enc.inputs, "Tensor files");
  encode_cmd->add_option("--out-dir,-o", enc.out_dir, "Output directory");
  encode_cmd->add_option("--target-dim", enc.target_dim, "Target dimension")
      ->check(CLI::Range(1u, 8u))
      ->capture_default_str();
  encode_cmd->add_option("--target-order", enc.target_order, "Target curve order (default: keep cell count)");
  encode_cmd->add_option("--family", enc.family, "Curve family: hilbert, zorder, gray")->capture_default_str();
  encode_cmd->add_option("--manifest", enc.manifest, "Take inputs from this manifest and update it");
  encode_cmd->add_option("--manifest-out", enc.manifest_out, "Write the updated manifest here");

  TransformArgs dec;
  auto* decode_cmd = app.add_subcommand("decode", "Map encoded tensors back to their source grid");
  decode_cmd->add_option("inputs", dec.inputs, "Encoded tensor files");
  decode_cmd->add_option("--out-dir,-o", dec.out_dir, "Output directory");
  decode_cmd->add_option("--manifest", dec.manifest, "Take inputs from this manifest and update it");
  decode_cmd->add_option("--manifest-out", dec.manifest_out, "Write the updated manifest here");

  SplitArgs spl;
  auto* split_cmd = app.add_subcommand("split", "Assign train/validation/test splits");
  split_cmd->add_option("--manifest", spl.manifest, "Manifest to split")->required();
  split_cmd->add_option("--out", spl.out, "Output manifest (default: overwrite input)");
  split_cmd->add_option("--fractions", spl.fractions, "train,validation,test")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  split_cmd->add_flag("--no-stratify", spl.no_stratify, "Shuffle all labels together");

  LocalityArgs loc;
  auto* locality_cmd = app.add_subcommand("locality", "Locality-preservation measures as CSV");
  locality_cmd->add_option("--measure", loc.measure, "eq1 (curve), eq2 (composed), eq3 (kernel)")
      ->check(CLI::IsMember({"eq1", "eq2", "eq3"}))
      ->capture_default_str();
  locality_cmd->add_option("--family", loc.family, "Source curve family")->capture_default_str();
  locality_cmd->add_option("-m,--dim", loc.m, "Source dimension")->capture_default_str();
  locality_cmd->add_option("-p,--order", loc.p, "Source order")->capture_default_str();
  locality_cmd->add_option("--target-family", loc.target_family, "Target family (default: source family)");
  locality_cmd->add_option("--target-dim", loc.target_dim, "Target dimension")->capture_default_str();
  locality_cmd->add_option("--target-order", loc.target_order, "Target order (default: keep cell count)");
  locality_cmd->add_option("--kernel-m", loc.kernel_m, "Source kernel size K_m")->capture_default_str();
  locality_cmd->add_option("--kernel-l", loc.kernel_l, "Target kernel size K_l")->capture_default_str();
  locality_cmd->add_flag("--exact", loc.exact, "Evaluate every pair");
  locality_cmd->add_option("--pairs", loc.pairs, "Sample this many distinct pairs (uses --seed)");
  locality_cmd->add_option("--exact-limit", loc.exact_limit, "Largest grid for exact mode")->capture_default_str();

  PngArgs png;
  auto* png_cmd = app.add_subcommand("export-png", "Render a 2-D tensor as PNG");
  png_cmd->add_option("input", png.input, "2-D tensor file")->required();
  png_cmd->add_option("--out,-o", png.out, "Output PNG path");
  png_cmd->add_option("--channel-colors", png.colors, "Palette as #rrggbb,#rrggbb,...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*voxelize) return cmd_voxelize(vox, global);
    if (*encode_cmd) return cmd_encode(enc, global);
    if (*decode_cmd) return cmd_decode(dec, global);
    if (*split_cmd) return cmd_split(spl, global);
    if (*locality_cmd) return cmd_locality(loc, global);
    if (*png_cmd) return cmd_export_png(png, global);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
