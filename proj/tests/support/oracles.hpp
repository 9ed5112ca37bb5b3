#pragma once

// Reference evaluations used by the tests. Everything here is written from
// the formulas directly, with plain loops and no code shared with lct_core.

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// ---- emissions --------------------------------------------------------------

struct Mode {
  double share, passengers, distance_km, factor;
};
double transport_kg(const std::vector<Mode>& modes);
double accommodation_kg(double beds, double occupancy, double energy_mj, double carbon_kg_per_mj);
double activities_kg(double tourists, const std::vector<double>& shares, const std::vector<double>& factors);

// ---- entropy index ----------------------------------------------------------

// columns[j][i]: indicator j in year i.
using Columns = std::vector<std::vector<double>>;

struct IndexResult {
  std::vector<double> weights;
  std::vector<double> entropies;
  std::vector<double> classic;   // sum w_j X'_ij
  std::vector<double> improved;  // sum w_j X''_ij (1 - X'' for negative columns)
};

IndexResult entropy_index(const Columns& columns, const std::vector<bool>& negative, double offset);

// ---- coupling ---------------------------------------------------------------

struct Coupling {
  double c, alpha, beta, t, d;
  int level;
};
Coupling coupling(double u1, double u2);

// ---- linear programs --------------------------------------------------------

enum class Rel { Le, Eq, Ge };

struct Row {
  std::vector<double> a;
  Rel rel;
  double b;
};

// maximize c.x subject to rows and lower <= x <= upper. Infinite bounds are
// allowed, but the feasible region must be pointed and the optimum finite.
struct Program {
  std::vector<double> c;
  std::vector<Row> rows;
  std::vector<double> lower;
  std::vector<double> upper;
};

// Best objective over all basic feasible points, or nullopt when no vertex
// is feasible. Brute force over every n-subset of the constraint set.
std::optional<double> vertex_max(const Program& p, double tol = 1e-9);

// Output-oriented directional distance (constant returns, weak disposability
// of bads) solved by vertex enumeration. obs: [inputs..., goods..., bads...].
struct Activity {
  std::vector<double> x, y, b;
};
std::optional<double> ddf(const std::vector<Activity>& technology, const Activity& observed);

// ---- random helpers ---------------------------------------------------------

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// |a - b| <= tol * max(|a|, |b|), treating two exact zeros as equal.
bool close_relative(double a, double b, double tol);

}  // namespace oracle
