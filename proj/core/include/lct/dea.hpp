#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lct/lp.hpp"
#include "lct/matrix.hpp"
#include "lct/panel.hpp"

namespace lct::dea {

struct Observation {
  std::vector<double> inputs;
  std::vector<double> good_outputs;
  std::vector<double> bad_outputs;
};

/// DMUs x periods of strictly positive inputs, desirable and undesirable outputs.
class DEAPanel {
 public:
  DEAPanel(std::vector<std::string> dmus, std::vector<int> periods, std::vector<Observation> observations);

  static DEAPanel from_panel(const PanelDataset& panel, std::span<const std::string> inputs,
                             std::span<const std::string> good_outputs, std::span<const std::string> bad_outputs);

  const std::vector<std::string>& dmus() const noexcept { return dmus_; }
  const std::vector<int>& periods() const noexcept { return periods_; }
  std::size_t dmu_index(std::string_view dmu) const;
  std::size_t period_index(int year) const;

  const Observation& at(std::size_t dmu, std::size_t period) const noexcept {
    return observations_[dmu * periods_.size() + period];
  }

 private:
  std::vector<std::string> dmus_;
  std::vector<int> periods_;
  std::vector<Observation> observations_;  // dmu-major
};

struct DDFResult {
  double beta = 0.0;
  bool feasible = true;
  std::string dmu;
  int obs_period = 0;
  int tech_period = 0;
};

/// Output-oriented directional distance under constant returns to scale:
///   max beta  s.t.  sum_k l_k y_k >= (1 + beta) y_o
///                   sum_k l_k b_k  = (1 - beta) b_o
///                   sum_k l_k x_k <= x_o,  l >= 0
/// with the reference set k spanning every DMU observed in `tech_period`.
/// Infeasibility is reported through `feasible`, not thrown.
DDFResult ddf(const DEAPanel& panel, std::size_t dmu, std::size_t obs_period, std::size_t tech_period,
              const lp::Tolerances& tol = {}, std::ostream* trace = nullptr);

struct Imputed {
  bool mlpi = false;
  bool mlte = false;
  bool mltc = false;

  bool any() const noexcept { return mlpi || mlte || mltc; }
};

/// Distances are named d_<technology>_<observation>: d_t_t1 is the period-t+1
/// observation against the period-t frontier.
struct MLPIRecord {
  std::string dmu;
  int from_period = 0;
  int to_period = 0;
  double d_tt = 0.0;
  double d_t1t1 = 0.0;
  double d_t_t1 = 0.0;
  double d_t1_t = 0.0;
  bool feasible_t_t1 = true;
  bool feasible_t1_t = true;
  double mlpi = 0.0;
  double mlte = 0.0;
  double mltc = 0.0;
  Imputed imputed;

  bool feasible() const noexcept { return feasible_t_t1 && feasible_t1_t; }
};

/// Four distance solves for one DMU between adjacent periods `period` and
/// `period + 1`. When a cross-period program is infeasible mlpi and mltc are
/// left NaN; mlte only needs own-period distances and is always set.
MLPIRecord mlpi_transition(const DEAPanel& panel, std::size_t dmu, std::size_t period,
                           const lp::Tolerances& tol = {});
/// Year-keyed form; the years must be adjacent entries of the period list.
MLPIRecord mlpi_transition(const DEAPanel& panel, std::string_view dmu, int from_year, int to_year,
                           const lp::Tolerances& tol = {});

/// Records of one transition. Each infeasible DMU gets the geometric mean of
/// the feasible DMUs' mlpi, and mltc := mlpi / mlte. Appends a warning when
/// more than half of the DMUs were infeasible.
std::vector<MLPIRecord> impute_infeasible(std::span<const MLPIRecord> records,
                                          std::vector<std::string>* warnings = nullptr);

struct Transition {
  int from = 0;
  int to = 0;

  bool operator==(const Transition&) const = default;
};

std::string label(const Transition& t);

enum class Component { MLPI, MLTE, MLTC };
std::string_view to_string(Component c) noexcept;

struct ComponentSummary {
  Matrix values;                     // dmus x transitions
  std::vector<double> basin;         // arithmetic mean over DMUs, per transition
  std::vector<double> dmu_average;   // geometric mean over transitions, per DMU
  double basin_average = 0.0;        // arithmetic mean of dmu_average
};

struct MLPIAggregate {
  std::vector<std::string> dmus;
  std::vector<Transition> transitions;
  ComponentSummary mlpi;
  ComponentSummary mlte;
  ComponentSummary mltc;
  std::vector<std::vector<Imputed>> imputed;  // dmus x transitions

  const ComponentSummary& component(Component c) const noexcept;
};

/// `records` must hold exactly one completed record per (DMU, transition).
MLPIAggregate aggregate(std::span<const MLPIRecord> records);

struct MLPIOptions {
  lp::Tolerances tolerances;
  unsigned threads = 1;
};

struct MLPITable {
  std::vector<std::string> dmus;
  std::vector<Transition> transitions;
  std::vector<MLPIRecord> records;  // transition-major, DMUs in panel order
  std::vector<std::string> warnings;
};

/// Every transition for every DMU, with infeasible values completed. The
/// distance solves may run on several threads; results are keyed and reduced
/// in a fixed order so the output does not depend on scheduling.
MLPITable compute_mlpi(const DEAPanel& panel, const MLPIOptions& options = {});

/// region,from_year,to_year,d_tt,d_t1t1,d_t_t1,d_t1_t,feasible,mlpi,mlte,mltc,imputed
void write_records_csv(std::ostream& out, std::span<const MLPIRecord> records, bool full_precision = false);
/// region,<from~to>...,average,imputed with a closing basin row.
void write_component_csv(std::ostream& out, const MLPIAggregate& agg, Component c, bool full_precision = false,
                         bool with_component_column = false);

}  // namespace lct::dea
