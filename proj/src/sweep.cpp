#include "hadain/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "hadain/error.hpp"
#include "hadain/image_io.hpp"
#include "hadain/metrics.hpp"
#include "hadain/parallel.hpp"

namespace hadain {

namespace {

constexpr SweepCell kControlCell{1, 0.0};

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

std::string metric_key(SweepMetric m) {
  switch (m) {
    case SweepMetric::Psnr:
      return "psnr";
    case SweepMetric::Ssim:
      return "ssim";
    case SweepMetric::StatDistance:
      return "stat_distance";
    case SweepMetric::SeamScore:
      return "seam_score";
  }
  return "psnr";
}

SweepMetric parse_metric(const std::string& name) {
  for (auto m : {SweepMetric::Psnr, SweepMetric::Ssim, SweepMetric::StatDistance,
                 SweepMetric::SeamScore}) {
    if (metric_key(m) == name) return m;
  }
  throw ConfigError("unknown sweep metric '" + name +
                    "' (expected psnr, ssim, stat_distance or seam_score)");
}

std::vector<std::string> column_names(const std::vector<SweepMetric>& metrics) {
  std::vector<std::string> names;
  auto has = [&](SweepMetric m) {
    return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
  };
  if (has(SweepMetric::Psnr)) names.emplace_back("psnr_db");
  if (has(SweepMetric::Ssim)) names.emplace_back("ssim");
  if (has(SweepMetric::StatDistance)) {
    names.emplace_back("stat_dmu");
    names.emplace_back("stat_dsigma");
  }
  if (has(SweepMetric::SeamScore)) names.emplace_back("seam_score");
  return names;
}

struct LoadedEntry {
  std::string name;
  Image reference;
  Image generated;
};

std::vector<LoadedEntry> load_corpus(const SweepPlan& plan,
                                     std::vector<SweepFailure>& failures) {
  std::vector<LoadedEntry> out;
  for (const auto& e : plan.corpus) {
    const std::string name = e.generated.filename().string();
    try {
      Image ref = load_image(e.reference);
      Image gen = load_image(e.generated);
      if (!ref.same_shape(gen)) {
        throw ShapeError("dimension mismatch between '" + e.reference.string() +
                         "' and '" + e.generated.string() + "'");
      }
      out.push_back({name, std::move(ref), std::move(gen)});
    } catch (const Error& err) {
      failures.push_back({e.generated.string(), err.what()});
    }
  }
  if (plan.simulate) {
    const SimulateRecipe& sim = *plan.simulate;
    std::vector<Image> files;
    for (const auto& p : sim.references) {
      try {
        files.push_back(load_image(p));
      } catch (const Error& err) {
        failures.push_back({p.string(), err.what()});
      }
    }
    if (!sim.references.empty() && files.empty()) return out;
    for (std::size_t i = 0; i < sim.count; ++i) {
      const std::uint64_t seed = sim.seed + i;
      Image ref = files.empty() ? synthetic_image(sim.height, sim.width, seed)
                                : files[i % files.size()];
      const ShiftSpec spec = random_spec(sim.kind, ref.height(), ref.width(), seed,
                                         sim.magnitude, sim.rows, sim.cols);
      Image gen = apply_shift(ref, spec);
      char name[32];
      std::snprintf(name, sizeof name, "sim-%04zu", i);
      out.push_back({name, std::move(ref), std::move(gen)});
    }
  }
  return out;
}

}  // namespace

void SweepPlan::validate() const {
  if (cells.empty() && (levels.empty() || gammas.empty())) {
    throw ConfigError("sweep plan needs non-empty levels and gammas (or cells)");
  }
  for (const auto& c : resolved_cells()) {
    HAdaInConfig cfg{c.levels, c.gamma, eps, clamp_output};
    cfg.validate();
  }
  const bool has_sim = simulate && simulate->count > 0;
  if (corpus.empty() && !has_sim) throw ConfigError("sweep plan has an empty corpus");
  if (has_sim) {
    if (!(simulate->magnitude > 0.0 && simulate->magnitude <= 1.0)) {
      throw ConfigError("simulate magnitude must lie in (0, 1]");
    }
    if (simulate->references.empty() && (simulate->height == 0 || simulate->width == 0)) {
      throw ConfigError("simulate needs a positive height and width");
    }
  }
  if (metrics.empty()) throw ConfigError("sweep plan selects no metrics");
}

std::vector<SweepCell> SweepPlan::resolved_cells() const {
  std::vector<SweepCell> out;
  if (!cells.empty()) {
    out = cells;
  } else {
    for (int l : levels) {
      for (double g : gammas) out.push_back({l, g});
    }
  }
  if (std::find(out.begin(), out.end(), kControlCell) == out.end()) {
    out.insert(out.begin(), kControlCell);
  }
  return out;
}

SweepPlan default_plan() {
  SweepPlan p;
  p.levels = {1, 30, 100};
  p.gammas = {0.0, 0.5, 0.7, 0.9};
  p.cells = {{1, 0.0}, {30, 0.0}, {100, 0.0}, {30, 0.5}, {30, 0.9}, {30, 0.7}};
  SimulateRecipe sim;
  sim.kind = ShiftKind::SmoothField;
  sim.count = 8;
  sim.seed = 1;
  sim.magnitude = 0.5;
  p.simulate = sim;
  return p;
}

SweepPlan sweep_plan_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  auto resolve = [&](const std::string& s) {
    std::filesystem::path p(s);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  };
  try {
    SweepPlan p;
    p.levels = j.value("levels", std::vector<int>{});
    p.gammas = j.value("gammas", std::vector<double>{});
    if (j.contains("cells")) {
      for (const auto& c : j.at("cells")) {
        if (c.is_array()) {
          p.cells.push_back({c.at(0).get<int>(), c.at(1).get<double>()});
        } else {
          p.cells.push_back({c.at("L").get<int>(), c.at("gamma").get<double>()});
        }
      }
    }
    if (j.contains("corpus")) {
      for (const auto& e : j.at("corpus")) {
        CorpusEntry entry{resolve(e.at("reference").get<std::string>()),
                          resolve(e.at("generated").get<std::string>()), std::nullopt};
        if (e.contains("label")) {
          entry.label = RetouchLabel::from_values(e.at("label").get<std::vector<int>>());
        }
        p.corpus.push_back(std::move(entry));
      }
    }
    if (j.contains("simulate")) {
      const auto& s = j.at("simulate");
      SimulateRecipe sim;
      sim.kind = parse_shift_kind(s.value("kind", std::string("smooth_field")));
      sim.count = s.at("count").get<std::size_t>();
      sim.seed = s.value("seed", std::uint64_t{0});
      sim.magnitude = s.value("magnitude", 0.5);
      sim.height = s.value("height", std::size_t{128});
      sim.width = s.value("width", std::size_t{128});
      if (s.contains("grid")) {
        sim.rows = s.at("grid").at("rows").get<std::size_t>();
        sim.cols = s.at("grid").at("cols").get<std::size_t>();
      }
      for (const auto& r : s.value("references", std::vector<std::string>{})) {
        sim.references.push_back(resolve(r));
      }
      p.simulate = sim;
    }
    if (j.contains("metrics")) {
      p.metrics.clear();
      for (const auto& m : j.at("metrics")) p.metrics.push_back(parse_metric(m.get<std::string>()));
    }
    p.eps = j.value("eps", kDefaultEps);
    p.clamp_output = j.value("clamp", true);
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid sweep plan: ") + e.what());
  }
}

SweepPlan load_sweep_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open plan '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("plan '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return sweep_plan_from_json(j, path.parent_path());
}

double order_independent_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

const MetricColumn& CellResult::column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c;
  }
  throw ConfigError("sweep cell has no metric '" + name + "'");
}

const CellResult& SweepResult::cell(const SweepCell& c) const {
  for (const auto& r : cells) {
    if (r.cell == c) return r;
  }
  throw ConfigError("sweep has no cell (" + std::to_string(c.levels) + ", " +
                    fixed4(c.gamma) + ")");
}

SweepResult run_sweep(const SweepPlan& plan, int threads) {
  plan.validate();
  SweepResult result;
  const auto corpus = load_corpus(plan, result.failures);
  for (const auto& e : corpus) {
    result.entries.push_back(e.name);
    result.shapes.emplace_back(e.reference.height(), e.reference.width());
  }
  const auto cells = plan.resolved_cells();
  const auto names = column_names(plan.metrics);
  const std::size_t n_entries = corpus.size();

  // values[cell][column][entry]; every task writes its own slots.
  std::vector<std::vector<std::vector<double>>> values(
      cells.size(),
      std::vector<std::vector<double>>(names.size(), std::vector<double>(n_entries, 0.0)));
  const std::size_t n_tasks = cells.size() * n_entries;
  parallel_for(n_tasks, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const std::size_t ci = t / n_entries;
      const std::size_t ei = t % n_entries;
      const SweepCell& cell = cells[ci];
      const LoadedEntry& e = corpus[ei];
      const HAdaInConfig cfg{cell.levels, cell.gamma, plan.eps, plan.clamp_output};
      const Image out = hadain_correct(e.reference, e.generated, cfg, 1);
      std::size_t col = 0;
      for (const auto& name : names) {
        double v = 0.0;
        if (name == "psnr_db") {
          v = psnr(out, e.reference);
        } else if (name == "ssim") {
          v = ssim(out, e.reference);
        } else if (name == "stat_dmu" || name == "stat_dsigma") {
          const auto sd = stat_distance(out, e.reference);
          for (const auto& g : sd) v = std::max(v, name == "stat_dmu" ? g.dmu : g.dsigma);
        } else if (name == "seam_score") {
          const auto grid = make_grid(out.height(), out.width(), cell.levels, cell.gamma);
          v = seam_score(out, grid);
        }
        values[ci][col++][ei] = v;
      }
    }
  });

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    CellResult cr{cells[ci], {}};
    for (std::size_t k = 0; k < names.size(); ++k) {
      MetricColumn mc{names[k], values[ci][k], 0.0};
      mc.mean = order_independent_mean(mc.values);
      cr.columns.push_back(std::move(mc));
    }
    result.cells.push_back(std::move(cr));
  }
  return result;
}

std::string format_table(const SweepResult& result) {
  std::ostringstream os;
  if (result.cells.empty()) return "";
  os << std::setw(6) << "L" << std::setw(9) << "gamma";
  for (const auto& col : result.cells.front().columns) os << std::setw(14) << col.name;
  os << '\n';
  for (const auto& cell : result.cells) {
    os << std::setw(6) << cell.cell.levels << std::setw(9) << fixed4(cell.cell.gamma);
    for (const auto& col : cell.columns) os << std::setw(14) << fixed4(col.mean);
    os << '\n';
  }
  os << "(" << result.entries.size() << " corpus entries";
  if (!result.failures.empty()) os << ", " << result.failures.size() << " failed";
  os << ")\n";
  return os.str();
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "L,gamma,metric,mean";
  for (const auto& e : result.entries) os << ',' << e;
  os << '\n';
  for (const auto& cell : result.cells) {
    for (const auto& col : cell.columns) {
      os << cell.cell.levels << ',' << fixed4(cell.cell.gamma) << ',' << col.name << ','
         << fixed4(col.mean);
      for (double v : col.values) os << ',' << fixed4(v);
      os << '\n';
    }
  }
  return os.str();
}

nlohmann::json to_json(const SweepResult& result) {
  nlohmann::json j;
  j["entries"] = result.entries;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    nlohmann::json c;
    c["L"] = cell.cell.levels;
    c["gamma"] = round4(cell.cell.gamma);
    nlohmann::json mean = nlohmann::json::object();
    nlohmann::json per = nlohmann::json::object();
    for (const auto& col : cell.columns) {
      mean[col.name] = round4(col.mean);
      nlohmann::json vals = nlohmann::json::array();
      for (double v : col.values) vals.push_back(round4(v));
      per[col.name] = vals;
    }
    c["mean"] = mean;
    c["per_image"] = per;
    cells.push_back(c);
  }
  j["cells"] = cells;
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : result.failures) fails.push_back({{"entry", f.entry}, {"message", f.message}});
  j["errors"] = fails;
  return j;
}

nlohmann::json grid_dump(const SweepResult& result) {
  const std::set<std::pair<std::size_t, std::size_t>> sizes(result.shapes.begin(),
                                                            result.shapes.end());
  nlohmann::json out = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    for (const auto& [h, w] : sizes) {
      nlohmann::json levels = nlohmann::json::array();
      for (const auto& lv : hadain_describe({cell.cell.levels, cell.cell.gamma}, h, w)) {
        levels.push_back({{"level", lv.level},
                          {"patch_h", lv.patch_h},
                          {"patch_w", lv.patch_w},
                          {"stride_h", lv.stride_h},
                          {"stride_w", lv.stride_w},
                          {"n_patches", lv.n_patches}});
      }
      out.push_back({{"L", cell.cell.levels},
                     {"gamma", round4(cell.cell.gamma)},
                     {"height", h},
                     {"width", w},
                     {"levels", levels}});
    }
  }
  return out;
}

}  // namespace hadain
