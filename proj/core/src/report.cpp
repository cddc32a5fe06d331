#include "chargeqfi/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace chargeqfi {

using Json = nlohmann::ordered_json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

namespace {

// nlohmann's serializer picks the shortest round-trip form for doubles; this
// writer pins the documented fixed format instead. Non-finite numbers become
// null.
void dump(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        out += Json(it.key()).dump();
        out += ": ";
        dump(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const Json& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        dump(v, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_number(x) : "null";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

std::string to_text(const Json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

Json params_json(const SystemParams& p) {
  Json j;
  j["e_c1"] = p.e_c1;
  j["e_c2"] = p.e_c2;
  j["e_j1"] = p.e_j1;
  j["e_j2"] = p.e_j2;
  j["e_m"] = p.e_m;
  j["n_g1"] = p.n_g1;
  j["n_g2"] = p.n_g2;
  j["gamma"] = p.gamma;
  return j;
}

Json breakdown_json(const QfiBreakdown& q) {
  Json j;
  j["f_total"] = q.f_total;
  j["f_c"] = q.f_c;
  j["f_p"] = q.f_p;
  j["f_m"] = q.f_m;
  j["cramer_rao_bound"] = q.cramer_rao_bound;
  Json d;
  d["step"] = q.diagnostics.step;
  d["clamped_eigenvalues"] = q.diagnostics.clamped_eigenvalues;
  d["near_degenerate_pairs"] = q.diagnostics.near_degenerate_pairs;
  d["gauge_residual"] = q.diagnostics.gauge_residual;
  d["halving_rel_change"] = q.diagnostics.halving_rel_change;
  j["diagnostics"] = d;
  return j;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json audit_object(const AuditReport& r) {
  Json j;
  j["params"] = params_json(r.params);
  j["tolerance"] = r.tolerance;
  j["grid"] = r.grid;
  j["max_abs_deviation"] = r.max_abs_deviation;
  j["worst_t"] = r.worst_t;
  Json entries = Json::array();
  for (const AuditEntry& e : r.deviating_entries) {
    Json x;
    x["t"] = e.t;
    x["row"] = e.row + 1;
    x["col"] = e.col + 1;
    x["analytic"] = complex_json(e.analytic);
    x["oracle"] = complex_json(e.oracle);
    x["deviation"] = e.deviation();
    entries.push_back(std::move(x));
  }
  j["deviating_entries"] = std::move(entries);
  Json failures = Json::array();
  for (const AuditFailure& f : r.failures) {
    failures.push_back(Json{{"t", f.t}, {"message", f.message}});
  }
  j["failures"] = std::move(failures);
  j["verdict"] = to_string(r.verdict);
  return j;
}

}  // namespace

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream out;
  out << kSweepCsvHeader << '\n';
  const std::string nan = format_number(std::nan(""));
  for (const SweepRow& row : r.rows) {
    out << format_number(row.axis_value);
    if (row.qfi) {
      const QfiBreakdown& q = *row.qfi;
      for (double v : {q.f_total, q.f_c, q.f_p, q.f_m, q.cramer_rao_bound}) {
        out << ',' << format_number(v);
      }
    } else {
      for (int k = 0; k < 5; ++k) out << ',' << nan;
    }
    out << '\n';
  }
  return out.str();
}

std::string sweep_json(const SweepResult& r) {
  const SweepConfig& c = r.config;
  Json j;
  Json cfg;
  cfg["params"] = params_json(c.params);
  cfg["estimand"] = std::string(to_string(c.estimand));
  cfg["axis"] = std::string(to_string(c.axis));
  cfg["axis_start"] = c.axis_start;
  cfg["axis_end"] = c.axis_end;
  cfg["points"] = c.points;
  cfg["time"] = c.time;
  cfg["fd_step"] = c.fd_step;
  j["config"] = std::move(cfg);
  Json rows = Json::array();
  for (const SweepRow& row : r.rows) {
    Json x;
    x["axis"] = row.axis_value;
    if (row.qfi) {
      const Json b = breakdown_json(*row.qfi);
      for (auto it = b.begin(); it != b.end(); ++it) x[it.key()] = it.value();
      x["f_sld"] = row.sld;
    } else {
      x["error"] = row.error;
    }
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  Json prov;
  prov["engine_version"] = r.engine_version;
  prov["worst_oracle_rel_deviation"] = r.worst_oracle_rel_deviation;
  prov["failed_rows"] = r.failed_rows;
  j["provenance"] = std::move(prov);
  return to_text(j);
}

std::string qfi_json(const SystemParams& p, double t, Estimand eta,
                     const QfiBreakdown& q, double sld) {
  Json j;
  j["params"] = params_json(p);
  j["t"] = t;
  j["estimand"] = std::string(to_string(eta));
  const Json b = breakdown_json(q);
  for (auto it = b.begin(); it != b.end(); ++it) j[it.key()] = it.value();
  j["f_sld"] = sld;
  return to_text(j);
}

std::string audit_json(const AuditReport& r) { return to_text(audit_object(r)); }

std::string audit_grid_json(const std::vector<AuditReport>& reports) {
  Json j;
  double worst = 0.0;
  bool consistent = true;
  Json all = Json::array();
  for (const AuditReport& r : reports) {
    worst = std::max(worst, r.max_abs_deviation);
    consistent = consistent && r.verdict == Verdict::kConsistent;
    all.push_back(audit_object(r));
  }
  j["max_abs_deviation"] = worst;
  j["verdict"] = consistent ? "consistent" : "inconsistent";
  j["reports"] = std::move(all);
  return to_text(j);
}

std::string trajectory_header() {
  std::string h = "t";
  for (int i = 1; i <= 4; ++i) {
    for (int k = 1; k <= 4; ++k) {
      const std::string ij = std::to_string(i) + std::to_string(k);
      h += ",rho_re_" + ij + ",rho_im_" + ij;
    }
  }
  return h;
}

std::string trajectory_csv(const std::vector<TrajectoryPoint>& points) {
  std::ostringstream out;
  out << trajectory_header() << '\n';
  for (const TrajectoryPoint& pt : points) {
    out << format_number(pt.t);
    for (int i = 0; i < 4; ++i) {
      for (int k = 0; k < 4; ++k) {
        out << ',' << format_number(pt.rho(i, k).real()) << ','
            << format_number(pt.rho(i, k).imag());
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace chargeqfi
