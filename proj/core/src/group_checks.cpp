#include "ontoqubit/group_checks.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ontoqubit/geometry.hpp"
#include "ontoqubit/rng.hpp"

namespace ontoqubit {

namespace {

using cd = std::complex<double>;

NamedGenerator product(int i, int j) {
  return {"s" + std::to_string(i) + std::to_string(j), kron(pauli(i), pauli(j))};
}

Eigen::VectorXd flatten(const ComplexMatrix& m) {
  Eigen::VectorXd out(2 * m.size());
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    out(2 * k) = m.data()[k].real();
    out(2 * k + 1) = m.data()[k].imag();
  }
  return out;
}

// Looks up a generator by name: "sIJ" for Pauli products, or "pair_flip".
ComplexMatrix generator_by_name(const std::string& name) {
  if (name == "pair_flip") return pair_flip_generator().matrix;
  if (name.size() == 3 && name[0] == 's' && name[1] >= '0' && name[1] <= '3' && name[2] >= '0' && name[2] <= '3') {
    return kron(pauli(name[1] - '0'), pauli(name[2] - '0'));
  }
  throw std::invalid_argument("unknown generator: " + name);
}

// exp(-i a G) restricted to a scalar overlap: <l| exp(-i a G) |r> = sum_k lv_k e^{-i a d_k} rv_k.
struct Diagonalized {
  ComplexMatrix vectors;
  Eigen::VectorXd values;
};

Diagonalized diagonalize(const ComplexMatrix& g) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  return {es.eigenvectors(), es.eigenvalues()};
}

ComplexMatrix step_unitary(const Diagonalized& d, double a) {
  Eigen::VectorXcd phases(d.values.size());
  for (Eigen::Index k = 0; k < d.values.size(); ++k) phases(k) = std::exp(cd(0.0, -a * d.values(k)));
  return d.vectors * phases.asDiagonal() * d.vectors.adjoint();
}

// Maximizes |sum_k c_k e^{-i a d_k}| over a in [-pi, pi].
double best_angle(const Eigen::VectorXcd& c, const Eigen::VectorXd& d) {
  auto f = [&](double a) {
    cd s = 0.0;
    for (Eigen::Index k = 0; k < c.size(); ++k) s += c(k) * std::exp(cd(0.0, -a * d(k)));
    return std::abs(s);
  };
  constexpr int kScan = 96;
  const double h = kTwoPi / kScan;
  double best_a = 0.0;
  double best_f = f(0.0);
  for (int i = 0; i < kScan; ++i) {
    const double a = -kPi + i * h;
    const double v = f(a);
    if (v > best_f + 1e-15) {
      best_f = v;
      best_a = a;
    }
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_a - h;
  double hi = best_a + h;
  double p = hi - inv_phi * (hi - lo);
  double q = lo + inv_phi * (hi - lo);
  double fp = f(p);
  double fq = f(q);
  for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
    if (fp > fq) {
      hi = q;
      q = p;
      fq = fp;
      p = hi - inv_phi * (hi - lo);
      fp = f(p);
    } else {
      lo = p;
      p = q;
      fp = fq;
      q = lo + inv_phi * (hi - lo);
      fq = f(q);
    }
  }
  const double polished = 0.5 * (lo + hi);
  if (f(polished) > best_f) best_a = polished;
  // Prefer the identity step when it is as good.
  if (f(0.0) >= f(best_a) - 1e-15) return 0.0;
  return best_a;
}

std::vector<NamedGenerator> default_template() {
  std::vector<NamedGenerator> t;
  for (int i = 1; i <= 3; ++i) t.push_back(product(i, 0));
  for (int j = 1; j <= 2; ++j) {
    for (int i = 1; i <= 3; ++i) t.push_back(product(i, j));
  }
  t.push_back(product(0, 3));
  t.push_back(product(3, 0));
  t.push_back(pair_flip_generator());
  return t;
}

}  // namespace

ComplexMatrix pauli(int index) {
  ComplexMatrix m(2, 2);
  switch (index) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: index must be 0..3");
  }
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::vector<NamedGenerator> sp2_generators() {
  std::vector<NamedGenerator> out;
  for (int i = 1; i <= 3; ++i) {
    out.push_back(product(i, 0));
    out.push_back(product(i, 1));
    out.push_back(product(i, 2));
  }
  out.push_back(product(0, 3));
  return out;
}

std::vector<NamedGenerator> su4_generators() {
  std::vector<NamedGenerator> out;
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= 3; ++j) {
      if (i != 0 || j != 0) out.push_back(product(i, j));
    }
  }
  return out;
}

NamedGenerator pair_flip_generator() {
  return {"pair_flip", 0.5 * (kron(pauli(1), pauli(2)) + kron(pauli(2), pauli(1)))};
}

int lie_closure_dim(std::span<const ComplexMatrix> generators) {
  if (generators.empty()) return 0;
  const Eigen::Index n = generators.front().rows();
  std::vector<ComplexMatrix> basis;
  std::vector<Eigen::VectorXd> ortho;
  const std::size_t cap = static_cast<std::size_t>(n * n);

  // Gram-Schmidt membership test; keeps the normalized matrix when it adds a direction.
  auto try_add = [&](const ComplexMatrix& m) {
    if (m.rows() != n || m.cols() != n) throw std::invalid_argument("lie_closure_dim: size mismatch");
    if (hermiticity_defect(m) > 1e-9 * std::max(1.0, m.norm())) {
      throw std::invalid_argument("lie_closure_dim: generators must be Hermitian");
    }
    const double norm = m.norm();
    if (norm <= kRankThreshold) return false;
    Eigen::VectorXd v = flatten(m / norm);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : ortho) v -= e.dot(v) * e;
    }
    if (v.norm() <= kRankThreshold) return false;
    ortho.push_back(v.normalized());
    basis.push_back(m / norm);
    return true;
  };

  for (const auto& g : generators) try_add(g);
  bool grew = true;
  std::size_t done = 0;
  while (grew && basis.size() < cap) {
    grew = false;
    const std::size_t size = basis.size();
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = std::max(i + 1, done); j < size; ++j) {
        const ComplexMatrix c = cd(0.0, 1.0) * (basis[i] * basis[j] - basis[j] * basis[i]);
        if (try_add(c)) grew = true;
      }
    }
    done = size;
  }

  Eigen::MatrixXd stack(static_cast<Eigen::Index>(2 * n * n), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) stack.col(static_cast<Eigen::Index>(k)) = flatten(basis[k]);
  return numerical_rank(stack, kRankThreshold);
}

int lie_closure_dim(const std::vector<NamedGenerator>& generators) {
  std::vector<ComplexMatrix> m;
  m.reserve(generators.size());
  for (const auto& g : generators) m.push_back(g.matrix);
  return lie_closure_dim(std::span<const ComplexMatrix>(m));
}

int gram_rank(const std::vector<NamedGenerator>& generators) {
  const auto k = static_cast<Eigen::Index>(generators.size());
  Eigen::MatrixXd gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) gram(i, j) = (generators[i].matrix * generators[j].matrix).trace().real();
  }
  return numerical_rank(gram, kRankThreshold);
}

ComplexMatrix orbit_unitary(const std::vector<OrbitStep>& steps) {
  ComplexMatrix u = ComplexMatrix::Identity(4, 4);
  for (const OrbitStep& s : steps) u = unitary_exponential(generator_by_name(s.generator), s.angle) * u;
  return u;
}

OrbitResult orbit_connect(const ComplexVector& psi, const OrbitOptions& opt) {
  return orbit_connect(psi, default_template(), opt);
}

OrbitResult orbit_connect(const ComplexVector& psi, const std::vector<NamedGenerator>& gate_template,
                          const OrbitOptions& opt) {
  if (psi.size() != 4) throw std::invalid_argument("orbit_connect: state must have dimension 4");
  if (!(std::abs(psi.norm() - 1.0) <= kRenormalizeTol)) {
    throw std::invalid_argument("orbit_connect: state is not normalized");
  }
  if (gate_template.empty()) throw std::invalid_argument("orbit_connect: empty gate template");
  const ComplexVector start = psi / psi.norm();

  std::vector<NamedGenerator> gates = gate_template;
  gates.insert(gates.end(), gate_template.begin(), gate_template.end());
  const std::size_t len = gates.size();
  std::vector<Diagonalized> diag;
  for (const auto& g : gates) diag.push_back(diagonalize(g.matrix));

  auto fidelity_of = [&](const std::vector<double>& angles) {
    ComplexVector v = start;
    for (std::size_t l = 0; l < len; ++l) v = step_unitary(diag[l], angles[l]) * v;
    return std::abs(v(0));
  };

  RngStream rng = RngStream(opt.seed).split("orbit_connect");
  std::vector<double> best_angles(len, 0.0);
  double best = fidelity_of(best_angles);

  for (int attempt = 0; attempt <= opt.restarts && best < opt.target; ++attempt) {
    std::vector<double> angles(len, 0.0);
    if (attempt > 0) {
      for (double& a : angles) a = (2.0 * rng.uniform() - 1.0) * kPi;
    }
    double current = fidelity_of(angles);
    // Sweeps continue past the target until progress stalls, leaving margin below it.
    for (int sweep = 0; sweep < opt.max_sweeps && current < 1.0 - 1e-14; ++sweep) {
      // Row vectors <up up| E_{L-1} ... E_{l+1} for every l.
      std::vector<Eigen::RowVectorXcd> suffix(len + 1);
      suffix[len] = Eigen::RowVectorXcd::Zero(4);
      suffix[len](0) = 1.0;
      for (std::size_t l = len; l-- > 0;) suffix[l] = suffix[l + 1] * step_unitary(diag[l], angles[l]);
      ComplexVector prefix = start;
      for (std::size_t l = 0; l < len; ++l) {
        const Eigen::RowVectorXcd left = suffix[l + 1] * diag[l].vectors;
        const Eigen::VectorXcd right = diag[l].vectors.adjoint() * prefix;
        const Eigen::VectorXcd c = left.transpose().cwiseProduct(right);
        angles[l] = best_angle(c, diag[l].values);
        prefix = step_unitary(diag[l], angles[l]) * prefix;
      }
      const double next = std::abs(prefix(0));
      const bool stalled = next - current < 1e-13;
      current = next;
      if (stalled) break;
    }
    if (current > best) {
      best = current;
      best_angles = angles;
    }
  }

  OrbitResult out;
  ComplexMatrix u = ComplexMatrix::Identity(4, 4);
  for (std::size_t l = 0; l < len; ++l) {
    if (best_angles[l] == 0.0) continue;
    out.steps.push_back({gates[l].name, best_angles[l]});
    u = unitary_exponential(gates[l].matrix, best_angles[l]) * u;
  }
  out.fidelity = std::abs((u * start)(0));
  out.converged = out.fidelity >= opt.target;
  out.max_unitarity_defect = unitarity_defect(u);
  return out;
}

ShrinkingMargin shrinking_margin(int n, int m) {
  if (n < 2 || m < 0) throw std::invalid_argument("shrinking_margin: need N >= 2 and M >= 0");
  ShrinkingMargin out;
  const long long nn = n;
  out.ds_lower_bound = nn * nn - 1 - m;
  out.largest_subgroup_dim = (nn - 1) * (nn - 1);
  out.verdict = m < 2 * nn - 2 ? ShrinkingVerdict::kContradiction : ShrinkingVerdict::kConsistent;
  return out;
}

std::string to_string(ShrinkingVerdict v) {
  return v == ShrinkingVerdict::kContradiction ? "contradiction" : "consistent";
}

}  // namespace ontoqubit
