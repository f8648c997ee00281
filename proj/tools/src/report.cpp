#include "report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>

#include "geoperc/estimators.hpp"
#include "geoperc/threshold.hpp"
#include "geoperc/version.hpp"

namespace geoperc::cli {
namespace {

using nlohmann::json;

// Identity columns of a model: family, marking, and the Voronoi mu, p.
ResultRow base_row(const ExperimentConfig& c, const std::string& quantity, const FieldSpec* field,
                   Marking marking) {
  ResultRow r;
  r.experiment = c.experiment + "/" + quantity;
  r.field_family = field ? field->family_name() : "none";
  r.marking = to_string(marking);
  if (field) {
    if (const auto* v = std::get_if<VoronoiFieldParams>(&field->family())) {
      r.mu = v->seed_intensity;
      r.p = v->high_probability;
    }
  }
  return r;
}

ResultRow base_row(const ExperimentConfig& c, const std::string& quantity) {
  return base_row(c, quantity, std::get_if<FieldSpec>(&c.model.radii), c.model.marking());
}

ResultRow& fill(ResultRow& r, const Estimate& e) {
  r.value = e.value;
  r.ci_low = e.ci_low;
  r.ci_high = e.ci_high;
  r.reps = e.replications;
  r.seed = e.master_seed;
  r.leakage_budget = e.leakage_budget_total;
  return r;
}

ResultRow& fill(ResultRow& r, const CovarianceEstimate& e) {
  r.value = e.value;
  r.ci_low = e.ci_low;
  r.ci_high = e.ci_high;
  r.reps = e.replications;
  r.seed = e.master_seed;
  r.leakage_budget = e.leakage_budget_total;
  r.extra["covariance"] = e.covariance;
  r.extra["family_size"] = e.family_size;
  return r;
}

ResultRow& fill(ResultRow& r, const ThresholdResult& t, const RunOptions& o) {
  r.value = t.midpoint();
  r.ci_low = t.lambda_low;
  r.ci_high = t.lambda_high;
  r.reps = o.replications;
  r.seed = o.master_seed;
  r.leakage_budget = t.curve.hard.empty() ? 0.0 : t.curve.hard.front().leakage_budget_total;
  r.extra["criterion"] = t.criterion;
  if (t.stability_bracket) {
    r.extra["stability_bracket"] = {t.stability_bracket->low, t.stability_bracket->high};
    r.extra["converged"] = t.converged;
  }
  return r;
}

void run_estimate(const ExperimentConfig& c, const RunOptions& o, std::vector<ResultRow>& rows) {
  const ModelSpec& m = c.model;
  const std::string& q = c.quantity;
  if (q == "field-mixing") {
    const FieldSpec& f = std::get<FieldSpec>(m.radii);
    for (double n : c.n) {
      ResultRow r = base_row(c, q);
      r.n = n;
      rows.push_back(fill(r, estimate_field_mixing_proxy(f, n, c.eps0, default_test_levels(f), o)));
    }
    return;
  }
  for (double lambda : c.lambda) {
    if (q == "point-coverage") {
      ResultRow r = base_row(c, q);
      r.lambda = lambda;
      rows.push_back(fill(r, estimate_point_coverage(m, lambda, o)));
      continue;
    }
    if (q == "segment-coverage") {
      for (double s : c.s) {
        ResultRow r = base_row(c, q);
        r.lambda = lambda;
        r.s = s;
        rows.push_back(fill(r, estimate_segment_coverage(m, lambda, s, o)));
      }
      continue;
    }
    for (double n : c.n) {
      ResultRow r = base_row(c, q);
      r.lambda = lambda;
      r.n = n;
      if (q == "crossing") {
        rows.push_back(fill(r, estimate_crossing(m, lambda, n, o)));
      } else if (q == "pi-lambda") {
        rows.push_back(fill(r, estimate_pi_lambda(m, lambda, n, c.eps0, o)));
      } else {
        const RhoReport rho = estimate_rho_proxy(m, lambda, n, c.eps0, o);
        ResultRow pi = r, bar = r, upper = r;
        rows.push_back(fill(r, rho.rho));
        pi.experiment = c.experiment + "/pi-lambda";
        rows.push_back(fill(pi, rho.pi));
        bar.experiment = c.experiment + "/field-mixing";
        rows.push_back(fill(bar, rho.pibar));
        upper.experiment = c.experiment + "/rho-upper-bound";
        upper.value = upper.ci_low = upper.ci_high = rho.upper_bound;
        upper.reps = o.replications;
        upper.seed = o.master_seed;
        upper.leakage_budget = rho.pi.leakage_budget_total;
        upper.extra["slack_sigma"] = rho.slack_sigma;
        upper.extra["within_3_sigma"] =
            rho.rho.value <= rho.upper_bound + 3.0 * rho.slack_sigma;
        rows.push_back(upper);
      }
    }
  }
}

void run_scan(const ExperimentConfig& c, const RunOptions& o, std::vector<ResultRow>& rows) {
  for (double n : c.n) {
    const CrossingCurve curve = crossing_curve(c.model, n, c.lambda, o);
    const std::vector<Criterion> verdict = finite_size_classify(curve);
    for (std::size_t k = 0; k < c.lambda.size(); ++k) {
      ResultRow hard = base_row(c, "cross-3n-n"), easy = base_row(c, "cross-n-3n");
      hard.lambda = easy.lambda = c.lambda[k];
      hard.n = easy.n = n;
      fill(hard, curve.hard[k]).extra["classification"] = to_string(verdict[k]);
      fill(easy, curve.easy[k]);
      rows.push_back(hard);
      rows.push_back(easy);
    }
  }
}

void run_lambda_c(const ExperimentConfig& c, const RunOptions& o, std::vector<ResultRow>& rows) {
  for (double n : c.n) {
    const ThresholdResult t =
        c.bracket.empty()
            ? estimate_lambda_c_auto(c.model, n, c.high_guess, c.tolerance, o, c.stability_check)
            : estimate_lambda_c(c.model, n, {c.bracket[0], c.bracket[1]}, c.tolerance, o,
                                c.stability_check);
    ResultRow r = base_row(c, "lambda-c");
    r.n = n;
    rows.push_back(fill(r, t, o));
  }
}

void run_compare(const ExperimentConfig& c, const RunOptions& o, std::vector<ResultRow>& rows) {
  const FieldSpec& f = std::get<FieldSpec>(c.model.radii);
  for (double lambda : c.lambda) {
    const ComparisonReport rep =
        compare_geostat_iid(f, f.marginal(), lambda, c.s, c.n, o, c.model.eps_leak);
    const auto emit = [&](const PairedEstimate& pe, const char* quantity, double ResultRow::*col) {
      for (const auto& [est, marking] :
           {std::pair{&pe.geostat, Marking::geostatistical}, std::pair{&pe.iid, Marking::iid}}) {
        ResultRow r = base_row(c, quantity, &f, marking);
        r.lambda = lambda;
        if (col) r.*col = pe.parameter;
        fill(r, *est).extra["ordering"] = pe.ordering;
        rows.push_back(r);
      }
    };
    emit(rep.point, "point-coverage", nullptr);
    for (const PairedEstimate& pe : rep.segments) emit(pe, "segment-coverage", &ResultRow::s);
    for (const PairedEstimate& pe : rep.crossings) emit(pe, "crossing", &ResultRow::n);
  }
}

void run_voronoi(const ExperimentConfig& c, const RunOptions& o, std::vector<ResultRow>& rows) {
  for (double n : c.n) {
    for (const VoronoiScanRow& v :
         voronoi_threshold_scan(c.mu, c.p, c.a, c.b, n, c.tolerance, o, c.eps0)) {
      const FieldSpec f = FieldSpec::voronoi({v.mu, v.p, c.a, c.b});
      ResultRow g = base_row(c, "lambda-c", &f, Marking::geostatistical);
      ResultRow i = base_row(c, "lambda-c", &f, Marking::iid);
      g.n = i.n = n;
      fill(g, v.geostat, o).extra["ordering"] = v.ordering;
      fill(i, v.iid, o).extra["ordering"] = -v.ordering;
      rows.push_back(g);
      rows.push_back(i);
    }
  }
}

void run_contraction(const ExperimentConfig& c, const RunOptions& o,
                     std::vector<ResultRow>& rows) {
  for (double lambda : c.lambda) {
    for (double n : c.n) {
      const ContractionReport rep = check_contraction(c.model, lambda, n, o, c.eps0);
      const auto row = [&](const char* quantity) {
        ResultRow r = base_row(c, quantity);
        r.lambda = lambda;
        r.n = n;
        return r;
      };
      ResultRow q = row("q-n"), q3 = row("q-3n"), pi = row("pi-lambda-9n"),
                bar = row("field-mixing-9n"), rhs = row("contraction-rhs");
      rows.push_back(fill(q, rep.q_n));
      rows.push_back(fill(q3, rep.q_3n));
      rows.push_back(fill(pi, rep.pi_9n));
      rows.push_back(fill(bar, rep.pibar_9n));
      rhs.value = rhs.ci_low = rhs.ci_high = rep.rhs;
      rhs.reps = o.replications;
      rhs.seed = o.master_seed;
      rhs.leakage_budget = rep.q_3n.leakage_budget_total;
      rhs.extra["slack"] = rep.slack;
      rhs.extra["holds"] = rep.holds;
      rhs.extra["status"] = rep.status;
      rows.push_back(rhs);
    }
  }
}

// Shortest text that reads back to the same double; empty for NaN.
std::string number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

// Labels are plain identifiers, but quote anything CSV would misread.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

ResultRecord run_experiment(const ExperimentConfig& config, unsigned threads) {
  validate(config);
  RunOptions o;
  o.replications = config.replications;
  o.master_seed = config.master_seed;
  o.threads = std::max(1u, threads);

  const auto t0 = std::chrono::steady_clock::now();
  ResultRecord rec;
  rec.config = config;
  const std::string& cmd = config.command;
  if (cmd == "estimate") run_estimate(config, o, rec.rows);
  else if (cmd == "scan-lambda") run_scan(config, o, rec.rows);
  else if (cmd == "lambda-c") run_lambda_c(config, o, rec.rows);
  else if (cmd == "compare") run_compare(config, o, rec.rows);
  else if (cmd == "voronoi-scan") run_voronoi(config, o, rec.rows);
  else run_contraction(config, o, rec.rows);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

void write_csv(const ResultRecord& record, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : record.rows) {
    out << csv_field(r.experiment) << ',' << csv_field(r.field_family) << ','
        << csv_field(r.marking) << ',' << number(r.lambda) << ',' << number(r.n) << ','
        << number(r.s) << ',' << number(r.mu) << ',' << number(r.p) << ',' << number(r.value)
        << ',' << number(r.ci_low) << ',' << number(r.ci_high) << ',' << r.reps << ',' << r.seed
        << ',' << number(r.leakage_budget) << '\n';
  }
}

json to_json(const ResultRecord& record) {
  json results = json::array();
  for (const ResultRow& r : record.rows) {
    json row{{"experiment", r.experiment},
             {"field_family", r.field_family},
             {"marking", r.marking},
             {"lambda", number_or_null(r.lambda)},
             {"n", number_or_null(r.n)},
             {"s", number_or_null(r.s)},
             {"mu", number_or_null(r.mu)},
             {"p", number_or_null(r.p)},
             {"value", r.value},
             {"ci_low", r.ci_low},
             {"ci_high", r.ci_high},
             {"reps", r.reps},
             {"seed", r.seed},
             {"leakage_budget", r.leakage_budget}};
    if (!r.extra.empty()) row["extra"] = r.extra;
    results.push_back(std::move(row));
  }
  return {{"schema_version", kSchemaVersion},
          {"library_version", kLibraryVersion},
          {"config", to_json(record.config)},
          {"results", std::move(results)},
          {"timing", {{"wall_seconds", record.wall_seconds}}}};
}

void write_json(const ResultRecord& record, std::ostream& out) {
  out << to_json(record).dump(2) << '\n';
}

}  // namespace geoperc::cli
