#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ontoqubit/geometry.hpp"
#include "ontoqubit_cli/report.hpp"

namespace ontoqubit::cli {

struct BornOptions {
  int grid = 100;
  std::uint64_t seed = 0;
};

struct SampleOptions {
  std::uint64_t seed = 0;
  int pairs = 20;
  long long samples = 1'000'000;
  double sigma = 4.5;
};

struct RegionCliOptions {
  double theta0 = kPi / 2.0;
  double s = 1.0;
  int resolution = 32;
};

struct PatchOptions {
  std::uint64_t seed = 0;
  int pairs = 1000;
  int orthogonal = 100;
};

struct NonMarkovOptions {
  int g0 = 16;
  int g1 = 16;
  std::uint64_t seed = 0;
  int budget = 50000;
  int n_theta = 8;
  int n_phi = 8;
  bool refine = true;
};

struct GroupOptions {
  std::uint64_t seed = 0;
  int states = 100;
  int n = 2;
  int m = 1;
};

struct ResourceOptions {
  std::vector<double> g{1.0, 4.0};
  double information = 0.0;  // nats
  std::string model = "base";
  double theta0 = 1.0;
  double s = 1.0;
  std::vector<int> ns{16, 32, 64, 128, 256, 512, 1024};
  long long budget = 0;  // 0: floor(exp(I))
  int n_max = 0;         // 0: the budget
};

struct FamilyCheckOptions {
  /// (theta0, s) pairs; empty runs the default set.
  std::vector<std::pair<double, double>> params;
  int grid = 32;
  std::uint64_t seed = 0;
};

/// The four parameter pairs checked by default.
std::vector<std::pair<double, double>> default_family_params();

Report verify_born(const BornOptions& o);
Report sample(const SampleOptions& o);
Report region(const RegionCliOptions& o);
Report patches(const PatchOptions& o);
Report nonmarkov(const NonMarkovOptions& o);
Report group(const GroupOptions& o);
Report resource(const ResourceOptions& o);
Report family_check(const FamilyCheckOptions& o);

}  // namespace ontoqubit::cli
