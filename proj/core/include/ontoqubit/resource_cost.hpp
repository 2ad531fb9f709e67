#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ontoqubit/base_model.hpp"
#include "ontoqubit/family_model.hpp"

namespace ontoqubit {

/// Grid allocation for M ontic dimensions under an information budget (nats).
struct AllocationPlan {
  int m = 0;
  std::vector<double> g;
  double information = 0.0;
  std::vector<double> n;
  double delta_e = 0.0;
  double g_bar = 0.0;
};

/// Geometric mean. Throws std::invalid_argument on empty input or g_i <= 0.
double geometric_mean(std::span<const double> g);

/// Round-off error model sqrt(sum (g_i / n_i)^2).
double roundoff_error_model(std::span<const double> g, std::span<const double> n);

/// n_i = g_i exp(I/M) / g_bar, the Lagrange optimum of the error model at fixed
/// sum log n_i = I.
AllocationPlan optimal_allocation(std::span<const double> g, double information);

/// g_bar sqrt(M) exp(-I/M).
double predicted_error(std::span<const double> g, double information);

/// M log(sqrt(M) g_bar / delta_e), the inverse of predicted_error.
/// Throws std::invalid_argument for delta_e <= 0 or g_bar <= 0.
double required_information(double g_bar, int m, double delta_e);

struct IntegerAllocation {
  std::vector<int> n;
  double error = 0.0;
};

/// Exhaustive search over integer n_i in [1, n_max] with prod n_i <= budget
/// minimizing the error model.
IntegerAllocation best_integer_allocation(std::span<const double> g, long long budget, int n_max);

/// Which qubit model a round-off measurement runs on.
struct RoundoffModel {
  enum class Kind { kBase, kFamily } kind = Kind::kBase;
  /// Used for kFamily. s < 1 leaves the region empty, hence the default.
  ModelParams params{1.0, 1.0};

  static RoundoffModel base() { return {}; }
  static RoundoffModel family(const ModelParams& p) { return {Kind::kFamily, p}; }
  std::string name() const;
};

/// Fixed low-discrepancy evaluation set of (v, w) pairs. v lies in the model's
/// region; w covers the whole sphere. Generated from a Halton sequence
/// (bases 3, 5, 7, 11; base 2 would align with power-of-two cell grids), so the
/// set is part of the source and versioned with it.
struct EvaluationPair {
  BlochVector v;
  BlochVector w;
};

inline constexpr int kEvaluationSetVersion = 1;
inline constexpr int kEvaluationSetSize = 256;

std::vector<EvaluationPair> evaluation_set(const RoundoffModel& model, int size = kEvaluationSetSize);

/// Quantizes each branch axis into n cells, replaces every ontic coordinate by its
/// cell center, and returns the RMS deviation of the combined probability from
/// the Born value over the evaluation set. Throws std::invalid_argument for n < 8.
double empirical_roundoff(const RoundoffModel& model, int n);

/// Mean |dP/dx| of a 1-D function over `samples` cell centers of [lo, hi],
/// by central differences.
double mean_gradient(const std::function<double(double)>& p, double lo, double hi, int samples);

/// Mean |dP(w|x, n)/dx| over `samples` cell centers of the branch axis and the
/// events of the evaluation set.
double mean_gradient(const RoundoffModel& model, Branch n, int samples = 128);

/// Axis [lo, hi] that empirical_roundoff quantizes for a branch.
std::pair<double, double> branch_axis(const RoundoffModel& model, Branch n);

struct RoundoffRow {
  std::string model;
  int n = 0;
  double measured_error = 0.0;
  double predicted_error = 0.0;
};

/// One row per n. predicted_error uses M = 1 with g taken as the mean gradient of
/// the azimuthal branch rescaled to a unit axis; the constant factor is ours.
std::vector<RoundoffRow> roundoff_table(const RoundoffModel& model, const std::vector<int>& ns);

/// Least-squares slope of log(error) against log(n).
double loglog_slope(std::span<const int> ns, std::span<const double> errors);

}  // namespace ontoqubit
