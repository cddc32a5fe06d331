#include "chargeqfi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "chargeqfi/errors.hpp"

namespace chargeqfi {

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kTime:
      return "time";
    case SweepAxis::kGamma:
      return "gamma";
    case SweepAxis::kEJ:
      return "ej";
    case SweepAxis::kEm:
      return "em";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view s) {
  if (s == "time" || s == "t") return SweepAxis::kTime;
  if (s == "gamma") return SweepAxis::kGamma;
  if (s == "ej") return SweepAxis::kEJ;
  if (s == "em") return SweepAxis::kEm;
  return std::nullopt;
}

std::string_view to_string(OutputFormat f) {
  return f == OutputFormat::kCsv ? "csv" : "json";
}

std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  return std::nullopt;
}

void SweepConfig::validate() const {
  params.validate();
  if (!(axis_start < axis_end)) {
    throw PreconditionError("sweep: axis_start must be below axis_end");
  }
  if (points < 2) throw PreconditionError("sweep: points must be >= 2");
  if (!(fd_step >= kMinFdStep && fd_step <= kMaxFdStep)) {
    throw PreconditionError("sweep: fd_step must lie in [1e-7, 1e-3]");
  }
  if (parallelism < 1) {
    throw PreconditionError("sweep: parallelism must be >= 1");
  }
  if (axis == SweepAxis::kTime && axis_start < 0.0) {
    throw PreconditionError("sweep: time axis must start at t >= 0");
  }
  if (axis != SweepAxis::kTime && !(time >= 0.0)) {
    throw PreconditionError("sweep: evaluation time must be >= 0");
  }
}

std::vector<double> linear_grid(double start, double end, int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    grid[k] = k == points - 1
                  ? end
                  : start + (end - start) * static_cast<double>(k) / (points - 1);
  }
  return grid;
}

namespace {

SweepRow evaluate_point(const SweepConfig& cfg, double x) {
  SweepRow row;
  row.axis_value = x;
  SystemParams p = cfg.params;
  double t = cfg.time;
  switch (cfg.axis) {
    case SweepAxis::kTime:
      t = x;
      break;
    case SweepAxis::kGamma:
      p = with_estimand(p, Estimand::kGamma, x);
      break;
    case SweepAxis::kEJ:
      p = with_estimand(p, Estimand::kEJ, x);
      break;
    case SweepAxis::kEm:
      p = with_estimand(p, Estimand::kEm, x);
      break;
  }
  try {
    row.qfi = qfi_components(p, t, cfg.estimand, cfg.fd_step);
    row.sld = qfi_sld(p, t, cfg.estimand, cfg.fd_step);
  } catch (const std::exception& e) {
    row.qfi.reset();
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult result;
  result.config = cfg;
  result.engine_version = CHARGEQFI_VERSION;

  const std::vector<double> grid =
      linear_grid(cfg.axis_start, cfg.axis_end, cfg.points);
  result.rows.resize(grid.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      result.rows[k] = evaluate_point(cfg, grid[k]);
    }
  };
  const int threads =
      std::min<int>(cfg.parallelism, static_cast<int>(grid.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (const SweepRow& row : result.rows) {
    if (!row.qfi) {
      ++result.failed_rows;
      continue;
    }
    const double rel =
        std::abs(row.qfi->f_total - row.sld) / std::max(row.sld, 1e-6);
    result.worst_oracle_rel_deviation =
        std::max(result.worst_oracle_rel_deviation, rel);
  }
  return result;
}

std::string_view to_string(FigureId id) {
  static constexpr std::string_view names[] = {
      "fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b",
      "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b"};
  return names[static_cast<int>(id)];
}

std::optional<FigureId> parse_figure(std::string_view s) {
  for (FigureId id : all_figures()) {
    if (to_string(id) == s) return id;
  }
  return std::nullopt;
}

std::vector<FigureId> all_figures() {
  std::vector<FigureId> ids;
  for (int k = 0; k <= static_cast<int>(FigureId::kFig6b); ++k) {
    ids.push_back(static_cast<FigureId>(k));
  }
  return ids;
}

namespace {

std::string label(const char* prefix, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%g", prefix, v);
  return buf;
}

}  // namespace

FigureSpec figure_spec(FigureId id, int points, int parallelism) {
  FigureSpec spec;
  spec.id = id;
  const int k = static_cast<int>(id);
  const int family = k / 2;  // 0..5 -> figures 1..6
  const bool panel_b = k % 2 == 1;
  spec.estimand = family < 2   ? Estimand::kGamma
                  : family < 4 ? Estimand::kEJ
                               : Estimand::kEm;
  spec.components = family % 2 == 1;

  auto curve = [&](std::string name, double gamma, double e) {
    SweepConfig cfg;
    cfg.params = SystemParams::degenerate(gamma, e, e);
    cfg.estimand = spec.estimand;
    cfg.axis = SweepAxis::kTime;
    cfg.axis_start = kFigureTimeStart;
    cfg.axis_end = kFigureTimeEnd;
    cfg.points = points;
    cfg.parallelism = parallelism;
    spec.curves.push_back({std::move(name), cfg});
  };

  if (spec.components) {
    const double e = panel_b ? 0.2 : 0.1;
    curve(label("e", e), 0.4, e);
  } else if (!panel_b) {
    for (double e : {0.05, 0.1, 0.2}) curve(label("e", e), 0.4, e);
  } else {
    for (double g : {0.3, 0.4, 0.5}) curve(label("gamma", g), g, 0.1);
  }
  return spec;
}

FigureDataset figure_dataset(FigureId id, int points, int parallelism) {
  FigureDataset data;
  data.spec = figure_spec(id, points, parallelism);
  for (const FigureCurve& c : data.spec.curves) {
    data.curves.push_back(run_sweep(c.config));
  }
  return data;
}

}  // namespace chargeqfi
