#pragma once

#include <complex>
#include <string>
#include <vector>

#include "fluxsim/parallel.hpp"

// Finite-dimensional check of the lossless LC circuit's canonical pairs:
// [q, p] = i hbar with p = Phi = L dq/dt, and C [U, Phi] = i hbar. Operators
// are truncated to the lowest N number states of the oscillator, where the
// truncation error is exactly one corner entry.

namespace fluxsim {

struct OperatorMatrix {
  int dim = 0;
  std::vector<std::complex<double>> data; // row-major, dim x dim
  std::string label;

  static OperatorMatrix zero(int dim, std::string label);

  std::complex<double>& at(int i, int j) { return data[static_cast<std::size_t>(i) * dim + j]; }
  const std::complex<double>& at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * dim + j];
  }

  bool hermitian(double tol) const;
  std::complex<double> trace() const;
};

OperatorMatrix matmul(const OperatorMatrix& a, const OperatorMatrix& b,
                      ExecPolicy policy = default_policy());

struct LcOperators {
  OperatorMatrix q;   // charge
  OperatorMatrix phi; // flux = conjugate momentum
  OperatorMatrix u;   // voltage = q / C
  double l_henry = 0.0;
  double c_farad = 0.0;
  double omega = 0.0; // 1/sqrt(LC)
};

// q = sqrt(hbar/(2 L omega)) (a + a+), Phi = i sqrt(hbar L omega / 2) (a+ - a),
// U = q / C, all truncated to dim x dim. dim in [4, 256].
LcOperators build_lc_operators(double l_henry, double c_farad, int dim);

struct CommutatorReport {
  int dim = 0;
  double retained_max_deviation = 0.0; // max |(1/i hbar)[q,phi] - I| off the top state
  double corner_value = 0.0;           // Re of the (N-1,N-1) entry of (1/i hbar)[q,phi]
  double corner_expected = 0.0;        // 1 - N, the exact truncation artifact
  double cu_phi_max_diff = 0.0;        // max |C[U,phi] - [q,phi]| entrywise
};

// C is recovered from the operators themselves (first off-diagonal ratio of
// q to U), so the report checks exactly what was built.
CommutatorReport verify_commutators(const OperatorMatrix& q, const OperatorMatrix& phi,
                                    const OperatorMatrix& u, ExecPolicy policy = default_policy());

} // namespace fluxsim
