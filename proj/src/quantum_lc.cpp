#include "fluxsim/quantum_lc.hpp"

#include <cmath>
#include <stdexcept>

#include "fluxsim/constants.hpp"

namespace fluxsim {

OperatorMatrix OperatorMatrix::zero(int dim, std::string label) {
  if (dim < 1) throw std::invalid_argument("OperatorMatrix: dimension must be positive");
  OperatorMatrix m;
  m.dim = dim;
  m.data.assign(static_cast<std::size_t>(dim) * dim, {0.0, 0.0});
  m.label = std::move(label);
  return m;
}

bool OperatorMatrix::hermitian(double tol) const {
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j)
      if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
  return true;
}

std::complex<double> OperatorMatrix::trace() const {
  std::complex<double> t{0.0, 0.0};
  for (int i = 0; i < dim; ++i) t += at(i, i);
  return t;
}

OperatorMatrix matmul(const OperatorMatrix& a, const OperatorMatrix& b, ExecPolicy policy) {
  if (a.dim != b.dim) throw std::invalid_argument("matmul: dimension mismatch");
  const int n = a.dim;
  OperatorMatrix c = OperatorMatrix::zero(n, a.label + "*" + b.label);
  // row-parallel: each row of c is owned by one index
  parallel_for(static_cast<std::size_t>(n), policy, [&](std::size_t i) {
    for (int k = 0; k < n; ++k) {
      const std::complex<double> aik = a.at(static_cast<int>(i), k);
      if (aik == std::complex<double>{0.0, 0.0}) continue;
      for (int j = 0; j < n; ++j) c.at(static_cast<int>(i), j) += aik * b.at(k, j);
    }
  });
  return c;
}

LcOperators build_lc_operators(double l_henry, double c_farad, int dim) {
  if (!(l_henry > 0.0)) throw std::invalid_argument("build_lc_operators: L must be positive");
  if (!(c_farad > 0.0)) throw std::invalid_argument("build_lc_operators: C must be positive");
  if (dim < 4 || dim > 256)
    throw std::domain_error("build_lc_operators: dimension must lie in [4, 256]");

  LcOperators ops;
  ops.l_henry = l_henry;
  ops.c_farad = c_farad;
  ops.omega = 1.0 / std::sqrt(l_henry * c_farad);

  // q = cq (a + a+), Phi = i cp (a+ - a) in the number basis; Phi doubles as
  // the canonical momentum p = L dq/dt.
  const double cq = std::sqrt(constants::hbar / (2.0 * l_henry * ops.omega));
  const double cp = std::sqrt(constants::hbar * l_henry * ops.omega / 2.0);
  ops.q = OperatorMatrix::zero(dim, "q");
  ops.phi = OperatorMatrix::zero(dim, "phi");
  ops.u = OperatorMatrix::zero(dim, "U");
  for (int i = 0; i + 1 < dim; ++i) {
    const double lad = std::sqrt(static_cast<double>(i + 1));
    ops.q.at(i, i + 1) = cq * lad;
    ops.q.at(i + 1, i) = cq * lad;
    ops.phi.at(i, i + 1) = std::complex<double>{0.0, -cp * lad};
    ops.phi.at(i + 1, i) = std::complex<double>{0.0, cp * lad};
  }
  for (std::size_t k = 0; k < ops.q.data.size(); ++k) ops.u.data[k] = ops.q.data[k] / c_farad;
  return ops;
}

CommutatorReport verify_commutators(const OperatorMatrix& q, const OperatorMatrix& phi,
                                    const OperatorMatrix& u, ExecPolicy policy) {
  if (q.dim != phi.dim || q.dim != u.dim)
    throw std::invalid_argument("verify_commutators: dimension mismatch");
  const int n = q.dim;

  auto commutator = [&](const OperatorMatrix& a, const OperatorMatrix& b) {
    OperatorMatrix ab = matmul(a, b, policy);
    const OperatorMatrix ba = matmul(b, a, policy);
    for (std::size_t k = 0; k < ab.data.size(); ++k) ab.data[k] -= ba.data[k];
    return ab;
  };

  const OperatorMatrix comm_q_phi = commutator(q, phi);
  const OperatorMatrix comm_u_phi = commutator(u, phi);

  // Recover C from the operators themselves: U = q / C entrywise.
  const double c_farad = q.at(0, 1).real() / u.at(0, 1).real();

  CommutatorReport rep;
  rep.dim = n;
  rep.corner_expected = 1.0 - n;

  const std::complex<double> inv_ihbar{0.0, -1.0 / constants::hbar}; // 1/(i hbar)
  double retained = 0.0;
  double cu_diff = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::complex<double> normd = inv_ihbar * comm_q_phi.at(i, j);
      if (i == n - 1 && j == n - 1) {
        rep.corner_value = normd.real();
      } else {
        const double expected = (i == j) ? 1.0 : 0.0;
        retained = std::max(retained, std::abs(normd - std::complex<double>{expected, 0.0}));
      }
      cu_diff = std::max(cu_diff, std::abs(c_farad * comm_u_phi.at(i, j) - comm_q_phi.at(i, j)));
    }
  rep.retained_max_deviation = retained;
  rep.cu_phi_max_diff = cu_diff;
  return rep;
}

} // namespace fluxsim
