#include "ontoqubit/resource_cost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <stdexcept>

#include "ontoqubit/errors.hpp"

#include "ontoqubit/parallel.hpp"

namespace ontoqubit {

namespace {

void check_gradients(std::span<const double> g) {
  if (g.empty()) throw std::invalid_argument("gradient list is empty");
  for (double gi : g) {
    if (!(gi > 0.0) || !std::isfinite(gi)) throw std::invalid_argument("gradients must be positive and finite");
  }
}

double radical_inverse(unsigned i, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * (i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// Model-specific coordinate transform: base uses the cone, family its admissible box.
ModelParams params_of(const RoundoffModel& model) {
  return model.kind == RoundoffModel::Kind::kBase ? ModelParams::base() : model.params;
}

struct Axes {
  std::pair<double, double> x0;
  std::pair<double, double> x1;
};

std::pair<double, double> hull(const AdmissibleSet& set) {
  if (set.empty()) throw ValidityError("positivity region is empty for these parameters");
  return {set.intervals().front().lo, set.intervals().back().hi};
}

Axes axes_of(const RoundoffModel& model) {
  if (model.kind == RoundoffModel::Kind::kBase) return {{0.0, kTwoPi}, {0.0, kConeHalfAngle}};
  const PositivityRegion region = positivity_region(model.params, 8);
  return {hull(region.x0_set), hull(region.x1_set)};
}

double cell_center(double x, double lo, double hi, int n) {
  const double width = (hi - lo) / n;
  const int k = std::clamp(static_cast<int>(std::floor((x - lo) / width)), 0, n - 1);
  return lo + (k + 0.5) * width;
}

std::vector<EvaluationPair> evaluation_set_on(const RoundoffModel& model, const Axes& axes, int size) {
  if (size < 1) throw std::invalid_argument("evaluation_set: size must be positive");
  const ModelParams p = params_of(model);
  std::vector<EvaluationPair> out;
  out.reserve(static_cast<std::size_t>(size));
  for (unsigned i = 1; out.size() < static_cast<std::size_t>(size); ++i) {
    const double u0 = radical_inverse(i, 3);
    const double u1 = radical_inverse(i, 5);
    const double u2 = radical_inverse(i, 7);
    const double u3 = radical_inverse(i, 11);
    BlochVector v = BlochVector::unit_z();
    if (model.kind == RoundoffModel::Kind::kBase) {
      v = from_spherical({u0 * kConeHalfAngle, u1 * kTwoPi});
    } else {
      const CoordPair c{axes.x0.first + u1 * (axes.x0.second - axes.x0.first),
                        axes.x1.first + u0 * (axes.x1.second - axes.x1.first)};
      v = coord_to_bloch(c, p);
    }
    const double wz = 2.0 * u2 - 1.0;
    const double r = std::sqrt(std::max(0.0, 1.0 - wz * wz));
    const double az = kTwoPi * u3;
    out.push_back({v, BlochVector(r * std::cos(az), r * std::sin(az), wz)});
  }
  return out;
}

}  // namespace

double geometric_mean(std::span<const double> g) {
  check_gradients(g);
  double acc = 0.0;
  for (double gi : g) acc += std::log(gi);
  return std::exp(acc / static_cast<double>(g.size()));
}

double roundoff_error_model(std::span<const double> g, std::span<const double> n) {
  if (g.size() != n.size()) throw std::invalid_argument("roundoff_error_model: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) acc += (g[i] / n[i]) * (g[i] / n[i]);
  return std::sqrt(acc);
}

AllocationPlan optimal_allocation(std::span<const double> g, double information) {
  if (!std::isfinite(information)) throw std::invalid_argument("information must be finite");
  AllocationPlan plan;
  plan.m = static_cast<int>(g.size());
  plan.g.assign(g.begin(), g.end());
  plan.information = information;
  plan.g_bar = geometric_mean(g);
  const double scale = std::exp(information / plan.m) / plan.g_bar;
  for (double gi : g) plan.n.push_back(gi * scale);
  plan.delta_e = predicted_error(g, information);
  return plan;
}

double predicted_error(std::span<const double> g, double information) {
  const double m = static_cast<double>(g.size());
  return geometric_mean(g) * std::sqrt(m) * std::exp(-information / m);
}

double required_information(double g_bar, int m, double delta_e) {
  if (!(g_bar > 0.0) || !(delta_e > 0.0) || m < 1) {
    throw std::invalid_argument("required_information: need g_bar > 0, delta_e > 0 and M >= 1");
  }
  return m * std::log(std::sqrt(static_cast<double>(m)) * g_bar / delta_e);
}

IntegerAllocation best_integer_allocation(std::span<const double> g, long long budget, int n_max) {
  check_gradients(g);
  if (budget < 1 || n_max < 1) throw std::invalid_argument("best_integer_allocation: budget and n_max must be >= 1");
  IntegerAllocation best;
  best.error = std::numeric_limits<double>::infinity();
  std::vector<int> n(g.size(), 1);
  std::vector<double> nd(g.size(), 1.0);

  auto recurse = [&](auto&& self, std::size_t i, long long product) -> void {
    if (i == g.size()) {
      const double e = roundoff_error_model(g, nd);
      if (e < best.error) {
        best.error = e;
        best.n = n;
      }
      return;
    }
    for (int k = 1; k <= n_max && product * k <= budget; ++k) {
      n[i] = k;
      nd[i] = k;
      self(self, i + 1, product * k);
    }
  };
  recurse(recurse, 0, 1);
  return best;
}

std::string RoundoffModel::name() const { return kind == Kind::kBase ? "base" : "family"; }

std::vector<EvaluationPair> evaluation_set(const RoundoffModel& model, int size) {
  return evaluation_set_on(model, axes_of(model), size);
}

std::pair<double, double> branch_axis(const RoundoffModel& model, Branch n) {
  const Axes axes = axes_of(model);
  return n == Branch::kAzimuthal ? axes.x0 : axes.x1;
}

double empirical_roundoff(const RoundoffModel& model, int n) {
  if (n < 8) throw std::invalid_argument("empirical_roundoff: n must be >= 8");
  const ModelParams p = params_of(model);
  const Axes axes = axes_of(model);
  const std::vector<EvaluationPair> set = evaluation_set_on(model, axes, kEvaluationSetSize);
  double acc = 0.0;
  for (const EvaluationPair& e : set) {
    const CoordPair c = bloch_to_coord(e.v, p);
    const Weights r = weights(c, p);
    const double q0 = cell_center(c.x0, axes.x0.first, axes.x0.second, n);
    const double q1 = cell_center(c.x1, axes.x1.first, axes.x1.second, n);
    const double value = r.r0 * family_probability(e.w, Branch::kAzimuthal, q0, p) +
                         r.r1 * family_probability(e.w, Branch::kZenithal, q1, p);
    const double diff = value - born_probability(e.w, e.v);
    acc += diff * diff;
  }
  return std::sqrt(acc / static_cast<double>(set.size()));
}

double mean_gradient(const std::function<double(double)>& p, double lo, double hi, int samples) {
  if (samples < 1 || !(hi > lo)) throw std::invalid_argument("mean_gradient: need samples >= 1 and hi > lo");
  const double width = (hi - lo) / samples;
  const double h = 1e-6 * (hi - lo);
  double acc = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double x = lo + (k + 0.5) * width;
    acc += std::abs(p(x + h) - p(x - h)) / (2.0 * h);
  }
  return acc / samples;
}

double mean_gradient(const RoundoffModel& model, Branch n, int samples) {
  const ModelParams p = params_of(model);
  const Axes axes = axes_of(model);
  const auto [lo, hi] = n == Branch::kAzimuthal ? axes.x0 : axes.x1;
  const std::vector<EvaluationPair> set = evaluation_set_on(model, axes, kEvaluationSetSize);
  double acc = 0.0;
  for (const EvaluationPair& e : set) {
    acc += mean_gradient([&](double x) { return family_probability(e.w, n, x, p); }, lo, hi, samples);
  }
  return acc / static_cast<double>(set.size());
}

std::vector<RoundoffRow> roundoff_table(const RoundoffModel& model, const std::vector<int>& ns) {
  const auto [lo, hi] = branch_axis(model, Branch::kAzimuthal);
  const double g_unit = mean_gradient(model, Branch::kAzimuthal) * (hi - lo);
  std::vector<RoundoffRow> rows(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    const double g[] = {g_unit};
    rows[i] = {model.name(), ns[i], empirical_roundoff(model, ns[i]),
               predicted_error(g, std::log(static_cast<double>(ns[i])))};
  });
  return rows;
}

double loglog_slope(std::span<const int> ns, std::span<const double> errors) {
  if (ns.size() != errors.size() || ns.size() < 2) {
    throw std::invalid_argument("loglog_slope: need at least two matching points");
  }
  const auto m = static_cast<double>(ns.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] <= 0 || !(errors[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    const double x = std::log(static_cast<double>(ns[i]));
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace ontoqubit
