#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chargeqfi/model.hpp"
#include "chargeqfi/qfi.hpp"

namespace chargeqfi {

enum class SweepAxis { kTime, kGamma, kEJ, kEm };
enum class OutputFormat { kCsv, kJson };

std::string_view to_string(SweepAxis a);
std::optional<SweepAxis> parse_axis(std::string_view s);
std::string_view to_string(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view s);

struct SweepConfig {
  SystemParams params;
  Estimand estimand = Estimand::kGamma;
  SweepAxis axis = SweepAxis::kTime;
  double axis_start = 1e-6;
  double axis_end = 10.0;
  int points = 200;
  // Evaluation time for parameter axes; ignored when axis == kTime.
  double time = 1.0;
  double fd_step = kDefaultFdStep;
  OutputFormat output_format = OutputFormat::kCsv;
  int parallelism = 1;

  // Throws PreconditionError when an invariant fails.
  void validate() const;
};

struct SweepRow {
  double axis_value = 0.0;
  std::optional<QfiBreakdown> qfi;  // empty when the point failed
  double sld = 0.0;
  std::string error;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
  std::string engine_version;
  // Largest |f_total - f_sld| / max(f_sld, 1e-6) over successful rows.
  double worst_oracle_rel_deviation = 0.0;
  int failed_rows = 0;
};

// Inclusive linear grid of `points` values from start to end.
std::vector<double> linear_grid(double start, double end, int points);

// Evaluates every axis point on up to cfg.parallelism threads. Rows are
// merged by index so the result does not depend on scheduling.
SweepResult run_sweep(const SweepConfig& cfg);

enum class FigureId {
  kFig1a, kFig1b, kFig2a, kFig2b, kFig3a, kFig3b,
  kFig4a, kFig4b, kFig5a, kFig5b, kFig6a, kFig6b,
};

std::string_view to_string(FigureId id);
std::optional<FigureId> parse_figure(std::string_view s);
std::vector<FigureId> all_figures();

struct FigureCurve {
  std::string label;  // used in file names, e.g. "e0.05" or "gamma0.3"
  SweepConfig config;
};

struct FigureSpec {
  FigureId id = FigureId::kFig1a;
  Estimand estimand = Estimand::kGamma;
  bool components = false;  // fig2/4/6 carry F, F_C, F_P, F_M
  std::vector<FigureCurve> curves;
};

inline constexpr double kFigureTimeStart = 1e-6;
inline constexpr double kFigureTimeEnd = 10.0;

FigureSpec figure_spec(FigureId id, int points, int parallelism = 1);

struct FigureDataset {
  FigureSpec spec;
  std::vector<SweepResult> curves;  // same order as spec.curves
};

FigureDataset figure_dataset(FigureId id, int points, int parallelism = 1);

}  // namespace chargeqfi
