#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chargeqfi/analytic.hpp"
#include "chargeqfi/dynamics.hpp"
#include "chargeqfi/errors.hpp"
#include "chargeqfi/qfi.hpp"
#include "chargeqfi/report.hpp"
#include "chargeqfi/sweep.hpp"

namespace chargeqfi::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

// Values shared by every subcommand. Options left unset fall back to the
// config file (sweep only) and then to these defaults.
struct Options {
  double gamma = 0.4;
  double ej = 0.1;
  double em = 0.1;
  double e = 0.1;
  double ec1 = 0.0;
  double ec2 = 0.0;
  double ng1 = 0.5;
  double ng2 = 0.5;
  double t = 1.0;
  double t_max = 10.0;
  int points = 0;
  std::string param = "gamma";
  double fd_step = kDefaultFdStep;
  std::string out;
  std::string format = "csv";
  int parallelism = 0;
  std::string config;
  std::string axis = "time";
  double axis_start = kFigureTimeStart;
  double axis_end = kFigureTimeEnd;
  double tol = 1e-6;
  bool acceptance_grid = false;
  std::string method = "expm";
  std::string figure;

  // Flag name -> its registrations across subcommands.
  struct Registry {
    std::map<std::string, std::vector<CLI::Option*>> options;
    CLI::Option*& operator[](const std::string& name) {
      return options[name].emplace_back(nullptr);
    }
  } given;

  bool set(const std::string& name) const {
    auto it = given.options.find(name);
    if (it == given.options.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [](const CLI::Option* opt) { return opt->count() > 0; });
  }
};

void add_physics_flags(CLI::App* app, Options& o) {
  o.given["gamma"] = app->add_option("--gamma", o.gamma, "Dephasing rate");
  o.given["ej"] =
      app->add_option("--ej", o.ej, "Josephson energy (both qubits)");
  o.given["em"] = app->add_option("--em", o.em, "Mutual coupling energy");
  o.given["e"] = app->add_option("--e", o.e, "Sets E_J = E_m");
  o.given["ec1"] = app->add_option("--ec1", o.ec1, "Charging energy, qubit 1");
  o.given["ec2"] = app->add_option("--ec2", o.ec2, "Charging energy, qubit 2");
  o.given["ng1"] = app->add_option("--ng1", o.ng1, "Gate charge, qubit 1");
  o.given["ng2"] = app->add_option("--ng2", o.ng2, "Gate charge, qubit 2");
}

void add_output_flags(CLI::App* app, Options& o) {
  o.given["out"] = app->add_option("--out", o.out, "Output path");
  o.given["format"] = app->add_option("--format", o.format, "csv or json")
                          ->check(CLI::IsMember({"csv", "json"}));
}

void add_qfi_flags(CLI::App* app, Options& o) {
  o.given["param"] = app->add_option("--param", o.param, "gamma, ej or em")
                         ->check(CLI::IsMember({"gamma", "ej", "em"}));
  o.given["fd-step"] =
      app->add_option("--fd-step", o.fd_step, "Finite-difference step");
}

SystemParams params_from(const Options& o) {
  SystemParams p;
  p.e_c1 = o.ec1;
  p.e_c2 = o.ec2;
  p.n_g1 = o.ng1;
  p.n_g2 = o.ng2;
  p.gamma = o.gamma;
  const double ej = o.set("ej") ? o.ej : (o.set("e") ? o.e : o.ej);
  const double em = o.set("em") ? o.em : (o.set("e") ? o.e : o.em);
  p.e_j1 = ej;
  p.e_j2 = ej;
  p.e_m = em;
  return p;
}

int default_parallelism() {
  const char* env = std::getenv("QFI_DEPHASE_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024) {
    throw UsageError("QFI_DEPHASE_THREADS must be a positive integer");
  }
  return static_cast<int>(v);
}

int parallelism_from(const Options& o) {
  if (o.set("parallelism")) {
    if (o.parallelism < 1) throw UsageError("--parallelism must be >= 1");
    return o.parallelism;
  }
  return default_parallelism();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot open output file " + path.string());
  f << text;
  if (!f) throw UsageError("failed writing " + path.string());
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
  }
}

Estimand estimand_from(const std::string& s) {
  const auto e = parse_estimand(s);
  if (!e) throw UsageError("unknown estimand '" + s + "'");
  return *e;
}

int cmd_evolve(const Options& o, std::ostream& out) {
  const SystemParams p = params_from(o);
  p.validate();
  if (!(o.t_max >= 0.0)) throw UsageError("--t-max must be >= 0");
  const int points = o.points > 0 ? o.points : 101;
  if (points < 2) throw UsageError("--points must be >= 2");
  const DensityMatrix rho0 = bell_state_psi_plus();
  const Liouvillian l(p);
  std::vector<TrajectoryPoint> traj;
  for (double t : linear_grid(0.0, o.t_max, points)) {
    const DensityMatrix rho = o.method == "rk" ? propagate_rk(rho0, p, t)
                                               : propagate_expm(rho0, l, t);
    traj.push_back({t, rho.matrix()});
  }
  emit(o, trajectory_csv(traj), out);
  return kExitOk;
}

int cmd_qfi(const Options& o, std::ostream& out) {
  const SystemParams p = params_from(o);
  const Estimand eta = estimand_from(o.param);
  const QfiBreakdown q = qfi_components(p, o.t, eta, o.fd_step);
  const double sld = qfi_sld(p, o.t, eta, o.fd_step);
  emit(o, qfi_json(p, o.t, eta, q, sld), out);
  return kExitOk;
}

double json_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw UsageError("config: '" + key + "' must be a number");
  return v.get<double>();
}

std::string json_string(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw UsageError("config: '" + key + "' must be a string");
  return v.get<std::string>();
}

int json_int(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) {
    throw UsageError("config: '" + key + "' must be an integer");
  }
  return v.get<int>();
}

// Flat JSON keyed by SweepConfig / SystemParams field names.
SweepConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: top level must be an object");

  SweepConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const nlohmann::json& v = it.value();
    if (k == "e_c1") c.params.e_c1 = json_number(v, k);
    else if (k == "e_c2") c.params.e_c2 = json_number(v, k);
    else if (k == "e_j1") c.params.e_j1 = json_number(v, k);
    else if (k == "e_j2") c.params.e_j2 = json_number(v, k);
    else if (k == "e_m") c.params.e_m = json_number(v, k);
    else if (k == "n_g1") c.params.n_g1 = json_number(v, k);
    else if (k == "n_g2") c.params.n_g2 = json_number(v, k);
    else if (k == "gamma") c.params.gamma = json_number(v, k);
    else if (k == "estimand") c.estimand = estimand_from(json_string(v, k));
    else if (k == "axis") {
      const auto a = parse_axis(json_string(v, k));
      if (!a) throw UsageError("config: unknown axis");
      c.axis = *a;
    } else if (k == "axis_start") c.axis_start = json_number(v, k);
    else if (k == "axis_end") c.axis_end = json_number(v, k);
    else if (k == "points") c.points = json_int(v, k);
    else if (k == "time") c.time = json_number(v, k);
    else if (k == "fd_step") c.fd_step = json_number(v, k);
    else if (k == "output_format") {
      const auto fm = parse_format(json_string(v, k));
      if (!fm) throw UsageError("config: output_format must be csv or json");
      c.output_format = *fm;
    } else if (k == "parallelism") c.parallelism = json_int(v, k);
    else throw UsageError("config: unknown key '" + k + "'");
  }
  return c;
}

SweepConfig sweep_config_from(const Options& o) {
  SweepConfig c;
  c.params = SystemParams::degenerate(o.gamma, o.ej, o.em);
  c.parallelism = 0;
  if (!o.config.empty()) c = load_config(o.config);

  SystemParams& p = c.params;
  if (o.set("gamma")) p.gamma = o.gamma;
  if (o.set("e")) p.e_j1 = p.e_j2 = p.e_m = o.e;
  if (o.set("ej")) p.e_j1 = p.e_j2 = o.ej;
  if (o.set("em")) p.e_m = o.em;
  if (o.set("ec1")) p.e_c1 = o.ec1;
  if (o.set("ec2")) p.e_c2 = o.ec2;
  if (o.set("ng1")) p.n_g1 = o.ng1;
  if (o.set("ng2")) p.n_g2 = o.ng2;
  if (o.set("param")) c.estimand = estimand_from(o.param);
  if (o.set("axis")) {
    const auto a = parse_axis(o.axis);
    if (!a) throw UsageError("unknown axis '" + o.axis + "'");
    c.axis = *a;
  }
  if (o.set("axis-start")) c.axis_start = o.axis_start;
  if (o.set("axis-end")) c.axis_end = o.axis_end;
  if (o.set("t-max")) c.axis_end = o.t_max;
  if (o.set("t")) c.time = o.t;
  if (o.set("points")) c.points = o.points;
  if (o.set("fd-step")) c.fd_step = o.fd_step;
  if (o.set("format")) c.output_format = *parse_format(o.format);
  if (o.set("parallelism") || c.parallelism < 1) {
    c.parallelism = parallelism_from(o);
  }
  return c;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const SweepConfig cfg = sweep_config_from(o);
  const SweepResult r = run_sweep(cfg);
  emit(o,
       cfg.output_format == OutputFormat::kCsv ? sweep_csv(r) : sweep_json(r),
       out);
  return kExitOk;
}

int cmd_figure(const Options& o, std::ostream& out) {
  std::vector<FigureId> ids;
  if (o.figure == "all") {
    ids = all_figures();
  } else {
    const auto id = parse_figure(o.figure);
    if (!id) throw UsageError("unknown figure id '" + o.figure + "'");
    ids.push_back(*id);
  }
  const int points = o.points > 0 ? o.points : 200;
  if (points < 2) throw UsageError("--points must be >= 2");
  const std::filesystem::path dir = o.out.empty() ? "." : o.out;
  const bool json = o.format == "json";
  const int threads = parallelism_from(o);
  for (FigureId id : ids) {
    const FigureDataset data = figure_dataset(id, points, threads);
    for (std::size_t k = 0; k < data.curves.size(); ++k) {
      const std::string name = std::string(to_string(id)) + "_" +
                               data.spec.curves[k].label +
                               (json ? ".json" : ".csv");
      write_file(dir / name,
                 json ? sweep_json(data.curves[k]) : sweep_csv(data.curves[k]));
      out << (dir / name).string() << '\n';
    }
  }
  return kExitOk;
}

int cmd_audit(const Options& o, std::ostream& out) {
  if (o.acceptance_grid) {
    const std::vector<double> grid = {0.5, 1.0, 2.0, 5.0, 10.0};
    std::vector<AuditReport> reports;
    for (double g : {0.3, 0.4, 0.5}) {
      for (double e : {0.05, 0.1, 0.2}) {
        reports.push_back(
            audit_analytic(SystemParams::degenerate(g, e, e), grid, o.tol));
      }
    }
    emit(o, audit_grid_json(reports), out);
    return kExitOk;
  }
  const SystemParams p = params_from(o);
  if (!p.degenerate_identical()) {
    throw UsageError(
        "audit needs identical qubits at the degeneracy point (--ng1/--ng2 = "
        "0.5)");
  }
  if (!(o.t_max >= 0.0)) throw UsageError("--t-max must be >= 0");
  const int points = o.points > 0 ? o.points : 21;
  if (points < 2) throw UsageError("--points must be >= 2");
  emit(o, audit_json(audit_analytic(p, linear_grid(0.0, o.t_max, points), o.tol)),
       out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Quantum Fisher information of two dephased charge qubits",
               "chargeqfi"};
  app.require_subcommand(1);
  Options o;

  CLI::App* evolve = app.add_subcommand("evolve", "State trajectory to CSV");
  add_physics_flags(evolve, o);
  o.given["t-max"] = evolve->add_option("--t-max", o.t_max, "Final time");
  o.given["points"] = evolve->add_option("--points", o.points, "Time points");
  o.given["out"] = evolve->add_option("--out", o.out, "Output CSV path");
  evolve->add_option("--method", o.method, "expm or rk")
      ->check(CLI::IsMember({"expm", "rk"}));

  CLI::App* qfi = app.add_subcommand("qfi", "Single QFI breakdown as JSON");
  add_physics_flags(qfi, o);
  add_qfi_flags(qfi, o);
  o.given["t"] = qfi->add_option("--t", o.t, "Evolution time");
  o.given["out"] = qfi->add_option("--out", o.out, "Output JSON path");

  CLI::App* sweep = app.add_subcommand("sweep", "QFI over a time or parameter axis");
  add_physics_flags(sweep, o);
  add_qfi_flags(sweep, o);
  add_output_flags(sweep, o);
  o.given["config"] = sweep->add_option("--config", o.config, "Flat JSON config");
  o.given["axis"] = sweep->add_option("--axis", o.axis, "time, gamma, ej or em");
  o.given["axis-start"] = sweep->add_option("--axis-start", o.axis_start);
  o.given["axis-end"] = sweep->add_option("--axis-end", o.axis_end);
  o.given["t-max"] =
      sweep->add_option("--t-max", o.t_max, "Alias for --axis-end");
  o.given["t"] = sweep->add_option("--t", o.t, "Evaluation time for parameter axes");
  o.given["points"] = sweep->add_option("--points", o.points, "Grid points");
  o.given["parallelism"] = sweep->add_option("--parallelism", o.parallelism);

  CLI::App* figure = app.add_subcommand("figure", "Regenerate figure datasets");
  figure->add_option("id", o.figure, "fig1a..fig6b or all")->required();
  o.given["points"] = figure->add_option("--points", o.points, "Time points");
  add_output_flags(figure, o);
  o.given["parallelism"] = figure->add_option("--parallelism", o.parallelism);

  CLI::App* audit = app.add_subcommand("audit", "Audit the closed-form solution");
  add_physics_flags(audit, o);
  o.given["t-max"] = audit->add_option("--t-max", o.t_max, "Grid end time");
  o.given["points"] = audit->add_option("--points", o.points, "Grid points");
  o.given["out"] = audit->add_option("--out", o.out, "Output JSON path");
  audit->add_option("--tol", o.tol, "Deviation tolerance");
  audit->add_flag("--acceptance-grid", o.acceptance_grid,
                  "Audit the Gamma x E x t acceptance grid");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (evolve->parsed()) return cmd_evolve(o, out);
    if (qfi->parsed()) return cmd_qfi(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (figure->parsed()) return cmd_figure(o, out);
    if (audit->parsed()) return cmd_audit(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace chargeqfi::cli
