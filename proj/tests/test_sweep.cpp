#include "doctest.h"

#include <algorithm>

#include "hadain/error.hpp"
#include "hadain/image_io.hpp"
#include "hadain/sweep.hpp"
#include "test_util.hpp"

using namespace hadain;

namespace {

SweepPlan small_sim_plan(ShiftKind kind, std::size_t count) {
  SweepPlan p;
  p.cells = {{1, 0.0}, {4, 0.0}, {4, 0.7}};
  SimulateRecipe sim;
  sim.kind = kind;
  sim.count = count;
  sim.seed = 10;
  sim.magnitude = 0.5;
  sim.height = 32;
  sim.width = 40;
  p.simulate = sim;
  return p;
}

}  // namespace

TEST_CASE("identity corpus gives perfect scores") {
  testing::TempDir dir("sweep-id");
  save_image(synthetic_image(24, 24, 1), dir / "a.png");
  SweepPlan p;
  p.levels = {1};
  p.gammas = {0.0};
  p.corpus = {{dir / "a.png", dir / "a.png", std::nullopt}};
  const SweepResult r = run_sweep(p);
  REQUIRE(r.cells.size() == 1);
  CHECK(r.cells[0].column("psnr_db").mean == 99.0);
  CHECK(r.cells[0].column("ssim").mean == 1.0);
  CHECK(r.failures.empty());
}

TEST_CASE("default plan covers the standard ablation cells") {
  const SweepPlan p = default_plan();
  const std::vector<SweepCell> expected{{1, 0.0},  {30, 0.0}, {100, 0.0},
                                        {30, 0.5}, {30, 0.9}, {30, 0.7}};
  CHECK(p.resolved_cells() == expected);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("control cell is always evaluated") {
  SweepPlan p;
  p.levels = {3};
  p.gammas = {0.5, 0.7};
  p.simulate = SimulateRecipe{};
  p.simulate->count = 1;
  const auto cells = p.resolved_cells();
  REQUIRE(cells.size() == 3);
  CHECK(cells[0] == SweepCell{1, 0.0});
  CHECK(cells[2] == SweepCell{3, 0.7});
}

TEST_CASE("global affine corpus is corrected exactly by the control cell") {
  const SweepResult r = run_sweep(small_sim_plan(ShiftKind::GlobalAffine, 4));
  CHECK(r.cell({1, 0.0}).column("psnr_db").mean >= 60.0);
}

TEST_CASE("permuting cells and corpus changes no number") {
  testing::TempDir dir("sweep-perm");
  std::vector<CorpusEntry> corpus;
  for (std::uint64_t i = 0; i < 4; ++i) {
    const Image ref = synthetic_image(20, 20, i);
    const Image gen = apply_shift(ref, random_spec(ShiftKind::BlockAffine, 20, 20, i, 0.3));
    const std::string n = std::to_string(i);
    save_image(ref, dir / ("ref" + n + ".ppm"));
    save_image(gen, dir / ("gen" + n + ".ppm"));
    corpus.push_back({dir / ("ref" + n + ".ppm"), dir / ("gen" + n + ".ppm"), std::nullopt});
  }
  SweepPlan p;
  p.cells = {{1, 0.0}, {5, 0.0}, {5, 0.5}};
  p.corpus = corpus;
  SweepPlan q = p;
  std::reverse(q.cells.begin(), q.cells.end());
  std::rotate(q.corpus.begin(), q.corpus.begin() + 1, q.corpus.end());

  const SweepResult a = run_sweep(p);
  const SweepResult b = run_sweep(q, 3);
  for (const auto& ca : a.cells) {
    const CellResult& cb = b.cell(ca.cell);
    for (const auto& col : ca.columns) {
      const auto& other = cb.column(col.name);
      CHECK(col.mean == other.mean);
      for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const auto j = std::find(b.entries.begin(), b.entries.end(), a.entries[i]) - b.entries.begin();
        CHECK(col.values[i] == other.values[j]);
      }
    }
  }
}

TEST_CASE("threads do not change sweep output") {
  const SweepPlan p = small_sim_plan(ShiftKind::SmoothField, 3);
  const SweepResult one = run_sweep(p, 1);
  const SweepResult many = run_sweep(p, 8);
  CHECK(to_csv(one) == to_csv(many));
  CHECK(to_json(one).dump() == to_json(many).dump());
}

TEST_CASE("unreadable entries are reported and skipped") {
  testing::TempDir dir("sweep-bad");
  save_image(synthetic_image(16, 16, 1), dir / "a.ppm");
  save_image(synthetic_image(16, 18, 1), dir / "wide.ppm");
  SweepPlan p;
  p.levels = {1};
  p.gammas = {0.0};
  p.corpus = {{dir / "a.ppm", dir / "a.ppm", std::nullopt},
              {dir / "a.ppm", dir / "missing.ppm", std::nullopt},
              {dir / "a.ppm", dir / "wide.ppm", std::nullopt}};
  const SweepResult r = run_sweep(p);
  CHECK(r.entries.size() == 1);
  REQUIRE(r.failures.size() == 2);
  CHECK(r.failures[0].message.find("missing.ppm") != std::string::npos);
  CHECK(to_json(r).at("errors").size() == 2);
}

TEST_CASE("plan JSON parsing") {
  const auto j = nlohmann::json::parse(R"({
    "levels": [2, 30], "gammas": [0, 0.7],
    "corpus": [{"reference": "r.png", "generated": "g.png", "label": [1, 0, 3]}],
    "simulate": {"kind": "block", "count": 2, "seed": 5, "magnitude": 0.4,
                 "height": 20, "width": 24, "grid": {"rows": 2, "cols": 3}},
    "metrics": ["psnr", "seam_score"], "eps": 1e-5, "clamp": false
  })");
  const SweepPlan p = sweep_plan_from_json(j, "/data");
  CHECK(p.resolved_cells().size() == 5);
  CHECK(p.corpus[0].reference == std::filesystem::path("/data/r.png"));
  CHECK(p.corpus[0].label->degrees[2] == 3);
  CHECK(p.simulate->kind == ShiftKind::BlockAffine);
  CHECK(p.simulate->cols == 3);
  CHECK(p.metrics.size() == 2);
  CHECK(p.eps == 1e-5);
  CHECK_FALSE(p.clamp_output);

  CHECK_THROWS_AS(sweep_plan_from_json(nlohmann::json::object()), ConfigError);
  CHECK_THROWS_AS(sweep_plan_from_json(nlohmann::json::parse(R"({"levels":[1],"gammas":[0]})")),
                  ConfigError);
  CHECK_THROWS_AS(sweep_plan_from_json(nlohmann::json::parse(
                      R"({"levels":[1],"gammas":[1.5],"simulate":{"count":1}})")),
                  ConfigError);
  CHECK_THROWS_AS(sweep_plan_from_json(nlohmann::json::parse(
                      R"({"levels":[1],"gammas":[0],"simulate":{"count":1},"metrics":["lpips"]})")),
                  ConfigError);
}

TEST_CASE("output formats use four decimals") {
  SweepPlan p = small_sim_plan(ShiftKind::GlobalAffine, 2);
  p.metrics = {SweepMetric::Psnr};
  const SweepResult r = run_sweep(p);
  const std::string csv = to_csv(r);
  CHECK(csv.rfind("L,gamma,metric,mean,sim-0000,sim-0001\n", 0) == 0);
  CHECK(csv.find("\n1,0.0000,psnr_db,") != std::string::npos);
  CHECK(csv.find("\n4,0.7000,psnr_db,") != std::string::npos);
  const std::string table = format_table(r);
  CHECK(table.find("psnr_db") != std::string::npos);
  const auto j = to_json(r);
  CHECK(j.at("cells").size() == 3);
  CHECK(j.at("cells")[0].at("per_image").at("psnr_db").size() == 2);
}

TEST_CASE("grid dump lists every level") {
  SweepResult r;
  r.shapes = {{512, 512}};
  r.cells = {CellResult{{1, 0.0}, {}}, CellResult{{30, 0.7}, {}}};
  const auto dump = grid_dump(r);
  REQUIRE(dump.size() == 2);
  const auto& levels = dump[1].at("levels");
  CHECK(levels.size() == 30);
  CHECK(levels[0].at("level") == 30);
  CHECK(levels[0].at("patch_h") == 53);
  CHECK(levels[0].at("n_patches") == 1024);
  CHECK(levels[0].at("stride_w") == 15);
}

TEST_CASE("order independent mean") {
  CHECK(order_independent_mean({}) == 0.0);
  CHECK(order_independent_mean({1.0, 2.0, 6.0}) == 3.0);
  CHECK(order_independent_mean({1e16, 1.0, -1e16}) == order_independent_mean({-1e16, 1e16, 1.0}));
}
