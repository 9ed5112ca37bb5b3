#include "lct/dea.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "lct/csv.hpp"
#include "lct/error.hpp"
#include "lct/format.hpp"

namespace lct::dea {
namespace {

constexpr const char* kModule = "dea";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double geometric_mean(std::span<const double> values) {
  double product = 1.0;
  for (double v : values) product *= v;
  const double n = static_cast<double>(values.size());
  if (std::isnormal(product)) return std::pow(product, 1.0 / n);
  double log_sum = 0.0;
  for (double v : values) log_sum += std::log(v);
  return std::exp(log_sum / n);
}

double arithmetic_mean(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

void require_positive(std::span<const double> v, const std::string& dmu, int period, const char* what) {
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      std::ostringstream os;
      os << what << " of DMU '" << dmu << "' in " << period << " must be finite and > 0 (got " << x << ")";
      fail(ErrorCode::NonPositiveValue, kModule, os.str());
    }
  }
}

}  // namespace

DEAPanel::DEAPanel(std::vector<std::string> dmus, std::vector<int> periods, std::vector<Observation> observations)
    : dmus_(std::move(dmus)), periods_(std::move(periods)), observations_(std::move(observations)) {
  if (dmus_.empty() || periods_.empty()) fail(ErrorCode::EmptyTable, kModule, "panel has no DMUs or periods");
  if (observations_.size() != dmus_.size() * periods_.size()) {
    fail(ErrorCode::DimensionMismatch, kModule, "observation count does not match DMUs x periods");
  }
  for (std::size_t p = 1; p < periods_.size(); ++p)
    if (periods_[p] <= periods_[p - 1]) fail(ErrorCode::InvalidPeriod, kModule, "periods must be strictly increasing");
  const Observation& first = observations_.front();
  if (first.inputs.empty() || first.good_outputs.empty() || first.bad_outputs.empty()) {
    fail(ErrorCode::DimensionMismatch, kModule, "need at least one input, good output and bad output");
  }
  for (std::size_t d = 0; d < dmus_.size(); ++d)
    for (std::size_t p = 0; p < periods_.size(); ++p) {
      const Observation& o = at(d, p);
      if (o.inputs.size() != first.inputs.size() || o.good_outputs.size() != first.good_outputs.size() ||
          o.bad_outputs.size() != first.bad_outputs.size()) {
        fail(ErrorCode::DimensionMismatch, kModule, "inconsistent observation dimensions for DMU '" + dmus_[d] + "'");
      }
      require_positive(o.inputs, dmus_[d], periods_[p], "input");
      require_positive(o.good_outputs, dmus_[d], periods_[p], "good output");
      require_positive(o.bad_outputs, dmus_[d], periods_[p], "bad output");
    }
}

DEAPanel DEAPanel::from_panel(const PanelDataset& panel, std::span<const std::string> inputs,
                              std::span<const std::string> good_outputs, std::span<const std::string> bad_outputs) {
  auto indices = [&](std::span<const std::string> names) {
    std::vector<std::size_t> idx;
    for (const auto& n : names) {
      auto i = panel.find_indicator(n);
      if (!i) fail(ErrorCode::MissingIndicator, kModule, "panel has no indicator '" + n + "'");
      idx.push_back(*i);
    }
    return idx;
  };
  const auto xi = indices(inputs), yi = indices(good_outputs), bi = indices(bad_outputs);
  std::vector<Observation> obs;
  obs.reserve(panel.region_count() * panel.year_count());
  for (std::size_t r = 0; r < panel.region_count(); ++r)
    for (std::size_t y = 0; y < panel.year_count(); ++y) {
      Observation o;
      for (auto i : xi) o.inputs.push_back(panel.at(r, y, i));
      for (auto i : yi) o.good_outputs.push_back(panel.at(r, y, i));
      for (auto i : bi) o.bad_outputs.push_back(panel.at(r, y, i));
      obs.push_back(std::move(o));
    }
  return {panel.regions(), panel.years(), std::move(obs)};
}

std::size_t DEAPanel::dmu_index(std::string_view dmu) const {
  auto it = std::find(dmus_.begin(), dmus_.end(), dmu);
  if (it == dmus_.end()) fail(ErrorCode::UnknownRegion, kModule, "unknown DMU '" + std::string(dmu) + "'");
  return static_cast<std::size_t>(it - dmus_.begin());
}

std::size_t DEAPanel::period_index(int year) const {
  auto it = std::find(periods_.begin(), periods_.end(), year);
  if (it == periods_.end()) fail(ErrorCode::InvalidPeriod, kModule, "period " + std::to_string(year) + " not in panel");
  return static_cast<std::size_t>(it - periods_.begin());
}

DDFResult ddf(const DEAPanel& panel, std::size_t dmu, std::size_t obs_period, std::size_t tech_period,
              const lp::Tolerances& tol, std::ostream* trace) {
  if (dmu >= panel.dmus().size() || obs_period >= panel.periods().size() || tech_period >= panel.periods().size()) {
    fail(ErrorCode::InvalidPeriod, kModule, "DMU or period index out of range");
  }
  const std::size_t k_count = panel.dmus().size();
  const std::size_t beta = k_count;
  const Observation& o = panel.at(dmu, obs_period);

  lp::LinearProgram prog;
  prog.objective.assign(k_count + 1, 0.0);
  prog.objective[beta] = 1.0;
  prog.bounds.assign(k_count + 1, lp::Bounds{});
  prog.bounds[beta].lower = -lp::kInfinity;

  auto add_rows = [&](auto member, lp::Relation rel, double beta_sign) {
    const std::size_t dims = (o.*member).size();
    for (std::size_t m = 0; m < dims; ++m) {
      lp::Constraint c{std::vector<double>(k_count + 1, 0.0), rel, (o.*member)[m]};
      for (std::size_t k = 0; k < k_count; ++k) c.coefficients[k] = (panel.at(k, tech_period).*member)[m];
      c.coefficients[beta] = beta_sign * (o.*member)[m];
      prog.constraints.push_back(std::move(c));
    }
  };
  add_rows(&Observation::good_outputs, lp::Relation::GreaterEqual, -1.0);
  add_rows(&Observation::bad_outputs, lp::Relation::Equal, 1.0);
  add_rows(&Observation::inputs, lp::Relation::LessEqual, 0.0);

  const lp::Solution sol = lp::solve(prog, tol, trace);
  DDFResult out{kNaN, false, panel.dmus()[dmu], panel.periods()[obs_period], panel.periods()[tech_period]};
  switch (sol.status) {
    case lp::Status::Infeasible:
      if (obs_period == tech_period) {
        fail(ErrorCode::LPFailure, kModule, "own-period program reported infeasible for DMU '" + out.dmu + "'");
      }
      return out;
    case lp::Status::Unbounded:
      fail(ErrorCode::LPFailure, kModule, "distance program unbounded for DMU '" + out.dmu + "'");
    case lp::Status::Optimal:
      break;
  }
  out.feasible = true;
  out.beta = sol.values[beta];
  if (obs_period == tech_period) {
    // beta = 0 is always attainable here; anything below is round-off.
    if (out.beta < -tol.feasibility) {
      fail(ErrorCode::LPFailure, kModule, "own-period distance negative for DMU '" + out.dmu + "'");
    }
    out.beta = std::max(out.beta, 0.0);
  }
  return out;
}

MLPIRecord mlpi_transition(const DEAPanel& panel, std::size_t dmu, std::size_t period, const lp::Tolerances& tol) {
  if (period + 1 >= panel.periods().size()) {
    fail(ErrorCode::InvalidPeriod, kModule, "no period follows index " + std::to_string(period));
  }
  const DDFResult tt = ddf(panel, dmu, period, period, tol);
  const DDFResult t1t1 = ddf(panel, dmu, period + 1, period + 1, tol);
  const DDFResult t_t1 = ddf(panel, dmu, period + 1, period, tol);
  const DDFResult t1_t = ddf(panel, dmu, period, period + 1, tol);

  MLPIRecord rec;
  rec.dmu = panel.dmus()[dmu];
  rec.from_period = panel.periods()[period];
  rec.to_period = panel.periods()[period + 1];
  rec.d_tt = tt.beta;
  rec.d_t1t1 = t1t1.beta;
  rec.d_t_t1 = t_t1.beta;
  rec.d_t1_t = t1_t.beta;
  rec.feasible_t_t1 = t_t1.feasible;
  rec.feasible_t1_t = t1_t.feasible;

  for (const DDFResult* r : {&tt, &t1t1, &t_t1, &t1_t}) {
    if (r->feasible && !(1.0 + r->beta > 0.0)) {
      std::ostringstream os;
      os << "distance " << r->beta << " <= -1 for DMU '" << rec.dmu << "' (observation " << r->obs_period
         << ", technology " << r->tech_period << "); productivity index undefined";
      fail(ErrorCode::NumericalBreakdown, kModule, os.str());
    }
  }

  rec.mlte = (1.0 + rec.d_tt) / (1.0 + rec.d_t1t1);
  if (rec.feasible()) {
    rec.mlpi = std::sqrt(((1.0 + rec.d_tt) * (1.0 + rec.d_t1_t)) / ((1.0 + rec.d_t_t1) * (1.0 + rec.d_t1t1)));
    rec.mltc = std::sqrt(((1.0 + rec.d_t1_t) * (1.0 + rec.d_t1t1)) / ((1.0 + rec.d_tt) * (1.0 + rec.d_t_t1)));
  } else {
    rec.mlpi = kNaN;
    rec.mltc = kNaN;
  }
  return rec;
}

MLPIRecord mlpi_transition(const DEAPanel& panel, std::string_view dmu, int from_year, int to_year,
                           const lp::Tolerances& tol) {
  const std::size_t p = panel.period_index(from_year);
  if (p + 1 >= panel.periods().size() || panel.periods()[p + 1] != to_year) {
    fail(ErrorCode::InvalidPeriod, kModule,
         std::to_string(from_year) + " and " + std::to_string(to_year) + " are not adjacent periods");
  }
  return mlpi_transition(panel, panel.dmu_index(dmu), p, tol);
}

std::vector<MLPIRecord> impute_infeasible(std::span<const MLPIRecord> records, std::vector<std::string>* warnings) {
  std::vector<MLPIRecord> out(records.begin(), records.end());
  if (out.empty()) return out;
  std::vector<double> feasible;
  std::size_t infeasible = 0;
  for (const auto& r : out) {
    if (r.from_period != out.front().from_period || r.to_period != out.front().to_period) {
      fail(ErrorCode::InvalidPeriod, kModule, "imputation expects records of a single transition");
    }
    if (r.feasible()) feasible.push_back(r.mlpi);
    else ++infeasible;
  }
  if (infeasible == 0) return out;
  const std::string transition = std::to_string(out.front().from_period) + "~" + std::to_string(out.front().to_period);
  if (feasible.empty()) {
    fail(ErrorCode::AllInfeasible, kModule, "every DMU is infeasible for transition " + transition);
  }
  if (warnings && 2 * infeasible > out.size()) {
    warnings->push_back(std::to_string(infeasible) + " of " + std::to_string(out.size()) +
                        " DMUs infeasible for transition " + transition + "; completed values dominate");
  }
  const double completed = geometric_mean(feasible);
  for (auto& r : out) {
    if (r.feasible()) continue;
    r.mlpi = completed;
    r.mltc = completed / r.mlte;
    r.imputed.mlpi = true;
    r.imputed.mltc = true;
  }
  return out;
}

std::string label(const Transition& t) { return std::to_string(t.from) + "~" + std::to_string(t.to); }

std::string_view to_string(Component c) noexcept {
  switch (c) {
    case Component::MLPI: return "mlpi";
    case Component::MLTE: return "mlte";
    case Component::MLTC: return "mltc";
  }
  return "unknown";
}

const ComponentSummary& MLPIAggregate::component(Component c) const noexcept {
  switch (c) {
    case Component::MLTE: return mlte;
    case Component::MLTC: return mltc;
    case Component::MLPI: break;
  }
  return mlpi;
}

MLPIAggregate aggregate(std::span<const MLPIRecord> records) {
  if (records.empty()) fail(ErrorCode::EmptyTable, kModule, "no records to aggregate");
  MLPIAggregate agg;
  for (const auto& r : records) {
    if (std::find(agg.dmus.begin(), agg.dmus.end(), r.dmu) == agg.dmus.end()) agg.dmus.push_back(r.dmu);
    const Transition t{r.from_period, r.to_period};
    if (std::find(agg.transitions.begin(), agg.transitions.end(), t) == agg.transitions.end())
      agg.transitions.push_back(t);
  }
  std::sort(agg.transitions.begin(), agg.transitions.end(),
            [](const Transition& a, const Transition& b) { return a.from < b.from; });
  const std::size_t nd = agg.dmus.size(), nt = agg.transitions.size();
  if (records.size() != nd * nt) {
    fail(ErrorCode::DimensionMismatch, kModule, "expected one record per DMU and transition");
  }
  Matrix mlpi(nd, nt, kNaN), mlte(nd, nt, kNaN), mltc(nd, nt, kNaN);
  agg.imputed.assign(nd, std::vector<Imputed>(nt));
  std::vector<std::vector<bool>> seen(nd, std::vector<bool>(nt, false));
  for (const auto& r : records) {
    const auto d = static_cast<std::size_t>(std::find(agg.dmus.begin(), agg.dmus.end(), r.dmu) - agg.dmus.begin());
    const auto t = static_cast<std::size_t>(
        std::find(agg.transitions.begin(), agg.transitions.end(), Transition{r.from_period, r.to_period}) -
        agg.transitions.begin());
    if (seen[d][t]) fail(ErrorCode::DuplicateCell, kModule, "duplicate record for DMU '" + r.dmu + "'");
    seen[d][t] = true;
    if (!(r.mlpi > 0.0) || !(r.mlte > 0.0) || !(r.mltc > 0.0)) {
      fail(ErrorCode::NonPositiveValue, kModule,
           "record for DMU '" + r.dmu + "' " + label({r.from_period, r.to_period}) + " is not completed");
    }
    mlpi(d, t) = r.mlpi;
    mlte(d, t) = r.mlte;
    mltc(d, t) = r.mltc;
    agg.imputed[d][t] = r.imputed;
  }
  auto summarize = [&](Matrix values) {
    ComponentSummary s;
    for (std::size_t t = 0; t < nt; ++t) s.basin.push_back(arithmetic_mean(values.column(t)));
    for (std::size_t d = 0; d < nd; ++d) s.dmu_average.push_back(geometric_mean(values.row(d)));
    s.basin_average = arithmetic_mean(s.dmu_average);
    s.values = std::move(values);
    return s;
  };
  agg.mlpi = summarize(std::move(mlpi));
  agg.mlte = summarize(std::move(mlte));
  agg.mltc = summarize(std::move(mltc));
  return agg;
}

MLPITable compute_mlpi(const DEAPanel& panel, const MLPIOptions& options) {
  const std::size_t nd = panel.dmus().size();
  const std::size_t np = panel.periods().size();
  if (np < 2) fail(ErrorCode::InvalidPeriod, kModule, "productivity change needs at least two periods");

  MLPITable table;
  table.dmus = panel.dmus();
  for (std::size_t p = 0; p + 1 < np; ++p) table.transitions.push_back({panel.periods()[p], panel.periods()[p + 1]});

  // One task per transition and DMU; results land in fixed slots.
  const std::size_t tasks = (np - 1) * nd;
  std::vector<MLPIRecord> raw(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      try {
        raw[i] = mlpi_transition(panel, i % nd, i / nd, options.tolerances);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(tasks)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t p = 0; p + 1 < np; ++p) {
    std::span<const MLPIRecord> slice(raw.data() + p * nd, nd);
    auto completed = impute_infeasible(slice, &table.warnings);
    table.records.insert(table.records.end(), completed.begin(), completed.end());
  }
  return table;
}

void write_records_csv(std::ostream& out, std::span<const MLPIRecord> records, bool full_precision) {
  csv::Writer w(out);
  w.row({"region", "from_year", "to_year", "d_tt", "d_t1t1", "d_t_t1", "d_t1_t", "feasible", "mlpi", "mlte", "mltc",
         "imputed"});
  auto num = [&](double v) { return format_number(v, full_precision); };
  for (const auto& r : records) {
    std::string marks;
    if (r.imputed.mlpi) marks += "mlpi*";
    if (r.imputed.mlte) marks += (marks.empty() ? "" : ";") + std::string("mlte*");
    if (r.imputed.mltc) marks += (marks.empty() ? "" : ";") + std::string("mltc*");
    w.row({r.dmu, std::to_string(r.from_period), std::to_string(r.to_period), num(r.d_tt), num(r.d_t1t1),
           r.feasible_t_t1 ? num(r.d_t_t1) : "infeasible", r.feasible_t1_t ? num(r.d_t1_t) : "infeasible",
           r.feasible() ? "true" : "false", num(r.mlpi), num(r.mlte), num(r.mltc), marks});
  }
}

void write_component_csv(std::ostream& out, const MLPIAggregate& agg, Component c, bool full_precision,
                         bool with_component_column) {
  const ComponentSummary& s = agg.component(c);
  csv::Writer w(out);
  auto num = [&](double v) { return format_number(v, full_precision); };
  auto flagged = [&](std::size_t d, std::size_t t) {
    const Imputed& i = agg.imputed[d][t];
    return c == Component::MLPI ? i.mlpi : c == Component::MLTE ? i.mlte : i.mltc;
  };

  std::vector<std::string> header;
  if (with_component_column) header.push_back("component");
  header.push_back("region");
  for (const auto& t : agg.transitions) header.push_back(label(t));
  header.push_back("average");
  header.push_back("imputed");
  w.row(header);

  const std::string name(to_string(c));
  for (std::size_t d = 0; d < agg.dmus.size(); ++d) {
    std::vector<std::string> row;
    if (with_component_column) row.push_back(name);
    row.push_back(agg.dmus[d]);
    std::string marks;
    for (std::size_t t = 0; t < agg.transitions.size(); ++t) {
      row.push_back(num(s.values(d, t)));
      if (flagged(d, t)) marks += (marks.empty() ? "" : ";") + label(agg.transitions[t]) + "*";
    }
    row.push_back(num(s.dmu_average[d]));
    row.push_back(marks);
    w.row(row);
  }
  std::vector<std::string> basin;
  if (with_component_column) basin.push_back(name);
  basin.push_back("basin");
  for (double v : s.basin) basin.push_back(num(v));
  basin.push_back(num(s.basin_average));
  basin.push_back("");
  w.row(basin);
}

}  // namespace lct::dea
