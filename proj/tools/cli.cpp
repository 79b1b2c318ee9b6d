#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hadain/error.hpp"
#include "hadain/hadain.hpp"
#include "hadain/image_io.hpp"
#include "hadain/metrics.hpp"
#include "hadain/shift_sim.hpp"
#include "hadain/sweep.hpp"

namespace hadain::cli {

namespace {

namespace fs = std::filesystem;

int default_threads() {
  if (const char* env = std::getenv("HADAIN_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::vector<int> parse_label(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("bad retouch label '" + text + "' (expected e.g. 1,0,3)");
    }
  }
  return out;
}

struct CorrectArgs {
  std::string reference, generated, out, report;
  int levels = 30;
  double overlap = 0.7;
  double eps = kDefaultEps;
  bool no_clamp = false;
  bool adain_only = false;
  int threads = 1;
};

int cmd_correct(const CorrectArgs& a, std::ostream& out, std::ostream& err) {
  HAdaInConfig cfg{a.levels, a.overlap, a.eps, !a.no_clamp};
  if (a.adain_only) {
    cfg.levels = 1;
    cfg.gamma = 0.0;
  }
  cfg.validate();
  const Image reference = load_image(a.reference);
  const Image generated = load_image(a.generated);
  if (!reference.same_shape(generated)) {
    throw ShapeError("'" + a.generated + "' is " + std::to_string(generated.height()) + "x" +
                     std::to_string(generated.width()) + " but '" + a.reference + "' is " +
                     std::to_string(reference.height()) + "x" +
                     std::to_string(reference.width()));
  }
  const std::size_t ph = patch_extent(reference.height(), cfg.levels, cfg.gamma);
  const std::size_t pw = patch_extent(reference.width(), cfg.levels, cfg.gamma);
  if (ph < 4 || pw < 4) {
    err << "warning: finest level " << cfg.levels << " uses " << ph << "x" << pw
        << " patches; tiny patches copy the reference locally\n";
  }
  const Image corrected = hadain_correct(reference, generated, cfg, a.threads);
  save_image(corrected, a.out);
  if (!a.report.empty()) write_json(a.report, to_json(evaluate_pair(corrected, reference)));
  out << "wrote " << a.out << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string input, kind, out, spec_out, spec_in, label;
  std::uint64_t seed = 0;
  std::optional<double> magnitude;
  std::size_t rows = 0, cols = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  ShiftSpec spec;
  const Image input = load_image(a.input);
  if (!a.spec_in.empty()) {
    spec = shift_spec_from_json(read_json(a.spec_in));
  } else {
    if (a.kind.empty() || !a.magnitude) {
      throw ConfigError("simulate needs --kind and --magnitude (or --spec-in)");
    }
    spec = random_spec(parse_shift_kind(a.kind), input.height(), input.width(), a.seed,
                       *a.magnitude, a.rows, a.cols);
  }
  if (!a.label.empty()) spec.label = RetouchLabel::from_values(parse_label(a.label));
  const Image shifted = apply_shift(input, spec);
  save_image(shifted, a.out);
  if (!a.spec_out.empty()) write_json(a.spec_out, to_json(spec));
  out << "wrote " << a.out << '\n';
  return kExitOk;
}

struct EvaluateArgs {
  std::string a, b, out;
  std::optional<int> grid_level;
  std::optional<double> grid_overlap;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  if (a.grid_level.has_value() != a.grid_overlap.has_value()) {
    throw ConfigError("--grid-level and --grid-overlap must be given together");
  }
  std::optional<PatchGrid> grid;
  const Image ia = load_image(a.a);
  const Image ib = load_image(a.b);
  if (!ia.same_shape(ib)) {
    throw ShapeError("'" + a.a + "' and '" + a.b + "' differ in size");
  }
  if (a.grid_level) grid = make_grid(ia.height(), ia.width(), *a.grid_level, *a.grid_overlap);
  const auto report = to_json(evaluate_pair(ia, ib, grid ? &*grid : nullptr));
  write_json(a.out, report);
  out << report.dump(2) << '\n';
  return kExitOk;
}

struct SweepArgs {
  std::string plan, out_dir;
  bool default_plan = false;
  bool dump_grids = false;
  int threads = 1;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (a.plan.empty() == !a.default_plan) {
    throw ConfigError("sweep needs exactly one of --plan or --default-plan");
  }
  const SweepPlan plan = a.default_plan ? default_plan() : load_sweep_plan(a.plan);
  plan.validate();
  const SweepResult result = run_sweep(plan, a.threads);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  write_text(dir / "results.csv", to_csv(result));
  write_json(dir / "results.json", to_json(result));
  if (a.dump_grids) write_json(dir / "grids.json", grid_dump(result));
  out << format_table(result);
  for (const auto& f : result.failures) err << "error: " << f.entry << ": " << f.message << '\n';
  return result.failures.empty() && !result.entries.empty() ? kExitOk : kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical AdaIN colour correction"};
  app.name("hadain");
  app.require_subcommand(1);

  CorrectArgs ca;
  ca.threads = default_threads();
  auto* correct = app.add_subcommand("correct", "Match the colours of a generated image to a reference");
  correct->add_option("--reference", ca.reference, "Reference image (colour source)")->required();
  correct->add_option("--generated", ca.generated, "Image to correct")->required();
  correct->add_option("--out", ca.out, "Corrected image (.ppm or .png)")->required();
  correct->add_option("--levels", ca.levels, "Hierarchical level L")->capture_default_str();
  correct->add_option("--overlap", ca.overlap, "Overlap ratio in [0, 1)")->capture_default_str();
  correct->add_option("--eps", ca.eps, "Degenerate sigma threshold")->capture_default_str();
  correct->add_flag("--no-clamp", ca.no_clamp, "Keep samples outside [0, 1] before quantization");
  correct->add_flag("--adain-only", ca.adain_only, "Global AdaIN (same as --levels 1 --overlap 0)");
  correct->add_option("--report", ca.report, "Write a JSON metric report (corrected vs reference)");
  correct->add_option("--threads", ca.threads, "Worker threads")->check(CLI::PositiveNumber);

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Apply a seeded synthetic colour shift");
  simulate->add_option("--input", sa.input, "Source image")->required();
  simulate->add_option("--kind", sa.kind, "global | block | smooth");
  simulate->add_option("--seed", sa.seed, "Generator seed");
  simulate->add_option("--magnitude", sa.magnitude, "Shift magnitude in (0, 1]");
  simulate->add_option("--grid-rows", sa.rows, "Block / lattice rows (0: default)");
  simulate->add_option("--grid-cols", sa.cols, "Block / lattice columns (0: default)");
  simulate->add_option("--label", sa.label, "Retouch label metadata, e.g. 1,0,3");
  simulate->add_option("--spec-in", sa.spec_in, "Re-apply a saved shift spec instead of drawing one");
  simulate->add_option("--out", sa.out, "Shifted image")->required();
  simulate->add_option("--spec-out", sa.spec_out, "Write the shift spec as JSON");

  EvaluateArgs ea;
  auto* evaluate = app.add_subcommand("evaluate", "Compare two images");
  evaluate->add_option("--a", ea.a, "First image")->required();
  evaluate->add_option("--b", ea.b, "Second image")->required();
  evaluate->add_option("--grid-level", ea.grid_level, "Level of the grid used for seam_score");
  evaluate->add_option("--grid-overlap", ea.grid_overlap, "Overlap of the grid used for seam_score");
  evaluate->add_option("--out", ea.out, "JSON report")->required();

  SweepArgs wa;
  wa.threads = default_threads();
  auto* sweep = app.add_subcommand("sweep", "Run an (L, overlap) ablation sweep");
  sweep->add_option("--plan", wa.plan, "Sweep plan JSON");
  sweep->add_flag("--default-plan", wa.default_plan, "Use the built-in ablation plan");
  sweep->add_option("--out-dir", wa.out_dir, "Output directory")->required();
  sweep->add_flag("--dump-grids", wa.dump_grids, "Also write grids.json");
  sweep->add_option("--threads", wa.threads, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (*correct) return cmd_correct(ca, out, err);
    if (*simulate) return cmd_simulate(sa, out);
    if (*evaluate) return cmd_evaluate(ea, out);
    if (*sweep) return cmd_sweep(wa, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace hadain::cli
