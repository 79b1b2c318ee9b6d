#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hadain/hadain.hpp"
#include "hadain/image.hpp"
#include "hadain/shift_sim.hpp"

namespace hadain {

// One (L, gamma) configuration of the ablation table.
struct SweepCell {
  int levels = 1;
  double gamma = 0.0;

  friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

struct CorpusEntry {
  std::filesystem::path reference;
  std::filesystem::path generated;
  std::optional<RetouchLabel> label;
};

// Synthetic corpus: entry i pairs reference i with
// apply_shift(reference, random_spec(kind, H, W, seed + i, magnitude)).
// References are synthetic_image(H, W, seed + i) unless files are listed, in
// which case they are cycled and H, W come from the files.
struct SimulateRecipe {
  ShiftKind kind = ShiftKind::SmoothField;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double magnitude = 0.5;
  std::size_t height = 128;
  std::size_t width = 128;
  std::size_t rows = 0;  // 0: default table size for the kind
  std::size_t cols = 0;
  std::vector<std::filesystem::path> references;
};

enum class SweepMetric { Psnr, Ssim, StatDistance, SeamScore };

struct SweepPlan {
  // Cells are `cells` when non-empty, else levels x gammas. The AdaIN
  // control (1, 0) is always evaluated.
  std::vector<int> levels;
  std::vector<double> gammas;
  std::vector<SweepCell> cells;
  std::vector<CorpusEntry> corpus;
  std::optional<SimulateRecipe> simulate;
  std::vector<SweepMetric> metrics{SweepMetric::Psnr, SweepMetric::Ssim,
                                   SweepMetric::StatDistance, SweepMetric::SeamScore};
  double eps = kDefaultEps;
  bool clamp_output = true;

  // Throws ConfigError when there is nothing to evaluate.
  void validate() const;
  std::vector<SweepCell> resolved_cells() const;
};

// Standard ablation cells: (1,0) (30,0) (100,0) (30,0.5) (30,0.9)
// (30,0.7), on 8 synthetic 128x128 smooth-field pairs.
SweepPlan default_plan();

// Relative corpus paths are resolved against `base_dir`.
SweepPlan sweep_plan_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});
SweepPlan load_sweep_plan(const std::filesystem::path& path);

// One metric across the corpus. Column names: psnr_db, ssim, stat_dmu,
// stat_dsigma (largest channel gap), seam_score (on the cell's level-L grid).
struct MetricColumn {
  std::string name;
  std::vector<double> values;  // indexed like SweepResult::entries
  double mean = 0.0;
};

struct CellResult {
  SweepCell cell;
  std::vector<MetricColumn> columns;

  const MetricColumn& column(const std::string& name) const;
};

struct SweepFailure {
  std::string entry;
  std::string message;
};

struct SweepResult {
  std::vector<std::string> entries;  // names of the successfully loaded pairs
  std::vector<std::pair<std::size_t, std::size_t>> shapes;  // (H, W) per entry
  std::vector<CellResult> cells;
  std::vector<SweepFailure> failures;

  const CellResult& cell(const SweepCell& c) const;
};

// Evaluates every cell on every loadable entry. Unloadable entries are
// reported in `failures` and skipped. Means are order-independent, so
// permuting cells or entries changes no reported number.
SweepResult run_sweep(const SweepPlan& plan, int threads = 1);

// Sum of the values in ascending order, divided by their count.
double order_independent_mean(std::vector<double> values);

std::string format_table(const SweepResult& result);
std::string to_csv(const SweepResult& result);
nlohmann::json to_json(const SweepResult& result);
// Level geometry of each cell for each distinct corpus image size.
nlohmann::json grid_dump(const SweepResult& result);

}  // namespace hadain
