#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ontoqubit/linalg.hpp"

namespace ontoqubit {

struct NamedGenerator {
  std::string name;
  ComplexMatrix matrix;
};

/// Pauli matrix: 0 = identity, 1..3 = sigma_x, sigma_y, sigma_z.
ComplexMatrix pauli(int index);
/// a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// The ten Sp(2) generators on C^2 (x) C^2:
///   s_i(1), s_i(1) s_1(2), s_i(1) s_2(2) for i = 1..3, and s_3(2).
std::vector<NamedGenerator> sp2_generators();

/// All 15 nontrivial two-qubit Pauli products (a basis of su(4)).
std::vector<NamedGenerator> su4_generators();

/// (s_1(1) s_2(2) + s_2(1) s_1(2)) / 2, which couples |up up> and |down down>.
NamedGenerator pair_flip_generator();

inline constexpr double kRankThreshold = 1e-9;

/// Dimension of the real Lie algebra generated by Hermitian matrices under
/// i[A, B]. Matrices are flattened into real vectors and the span is closed by
/// repeated commutation; the dimension is the count of singular values above
/// kRankThreshold (inputs are normalized first).
int lie_closure_dim(std::span<const ComplexMatrix> generators);
int lie_closure_dim(const std::vector<NamedGenerator>& generators);

/// Rank of the real Gram matrix tr(A B) of the inputs.
int gram_rank(const std::vector<NamedGenerator>& generators);

struct OrbitStep {
  std::string generator;
  double angle = 0.0;   // the step applies exp(-i angle G)
};

struct OrbitOptions {
  int max_sweeps = 400;   // coordinate sweeps per start
  int restarts = 8;       // random restarts after the structured start
  double target = 1.0 - 1e-6;
  std::uint64_t seed = 0;
};

struct OrbitResult {
  std::vector<OrbitStep> steps;   // applied in order to psi
  double fidelity = 0.0;          // |<up up| U |psi>|
  bool converged = false;
  double max_unitarity_defect = 0.0;
};

/// Searches the Sp(2) group for U with |<up up|U|psi>| >= target.
///
/// The gate template follows the three-stage reduction: local rotations of the
/// first qubit, then the mixed generators that align the second factor, then
/// s_3(1) and the pair-flip generator that rotate the |up up>, |down down>
/// superposition home. The template is repeated twice and refined coordinate by
/// coordinate, each angle set to the exact 1-D maximizer (dense scan plus
/// golden-section polish). Zero-angle steps are pruned from the result.
OrbitResult orbit_connect(const ComplexVector& psi, const OrbitOptions& opt = {});
/// Same search restricted to an explicit gate template.
OrbitResult orbit_connect(const ComplexVector& psi, const std::vector<NamedGenerator>& gate_template,
                          const OrbitOptions& opt);

/// Product of the step exponentials, first step rightmost.
ComplexMatrix orbit_unitary(const std::vector<OrbitStep>& steps);

enum class ShrinkingVerdict { kContradiction, kConsistent };

struct ShrinkingMargin {
  long long ds_lower_bound = 0;      // N^2 - 1 - M
  long long largest_subgroup_dim = 0; // (N - 1)^2
  ShrinkingVerdict verdict = ShrinkingVerdict::kConsistent;
};

/// Throws std::invalid_argument for N < 2 or M < 0.
ShrinkingMargin shrinking_margin(int n, int m);

std::string to_string(ShrinkingVerdict v);

}  // namespace ontoqubit
