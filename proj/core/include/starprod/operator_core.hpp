#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "starprod/errors.hpp"

namespace starprod {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct FockSpace {
  int dim = 2;
  // admissible weight lost beyond the top level for states, and the bound
  // used by the displacement self-check
  double tail_tolerance = 1e-6;

  FockSpace() = default;
  explicit FockSpace(int dim, double tail_tolerance = 1e-6);

  bool operator==(const FockSpace& o) const { return dim == o.dim; }
};

class Operator {
 public:
  Operator() = default;
  Operator(FockSpace space, Matrix entries);

  static Operator zero(const FockSpace& space);
  static Operator identity(const FockSpace& space);

  const FockSpace& space() const { return space_; }
  const Matrix& matrix() const { return m_; }
  Matrix& matrix() { return m_; }
  int dim() const { return space_.dim; }

  cplx operator()(int i, int j) const { return m_(i, j); }

  Operator adjoint() const;
  cplx trace() const { return m_.trace(); }
  double frobenius_norm() const { return m_.norm(); }

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(cplx c);

 private:
  FockSpace space_;
  Matrix m_;
};

Operator operator+(Operator a, const Operator& b);
Operator operator-(Operator a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(cplx c, Operator a);
Operator operator*(Operator a, cplx c);

void require_same_space(const Operator& a, const Operator& b);

struct Ladder {
  Operator a;
  Operator a_dagger;
  Operator q;
  Operator p;
  Operator identity;
};

Ladder build_ladder(const FockSpace& space);

Operator commutator(const Operator& a, const Operator& b);

// exp(alpha a^dag - conj(alpha) a) by scaling-and-squaring of the truncated
// generator; throws TruncationError when the vacuum overlap drifts from
// exp(-|alpha|^2/2) by more than space.tail_tolerance
Operator displacement(const FockSpace& space, cplx alpha);

// matrix elements <m|D(alpha)|n> of the untruncated displacement (Laguerre form)
Operator displacement_exact(const FockSpace& space, cplx alpha);

// exp(alpha a^dag - beta a) with independent alpha and beta
Operator deformed_displacement(const FockSpace& space, cplx alpha, cplx beta);

// diag(base^n); base = -1 gives parity
Operator number_power(const FockSpace& space, double base);
Operator parity(const FockSpace& space);

// exact matrix elements of D(alpha) base^{a^dag a} D(-alpha)
Operator displaced_number_power(const FockSpace& space, cplx alpha, double base);
Matrix displaced_number_power_matrix(int dim, cplx alpha, double base);
Matrix displacement_exact_matrix(int dim, cplx alpha);

// a^dag a
Operator number_operator(const FockSpace& space);

struct StateSpec {
  enum class Kind { Fock, Coherent, Thermal };
  Kind kind = Kind::Fock;
  int n = 0;
  cplx alpha = 0.0;
  double nbar = 0.0;

  static StateSpec fock(int n);
  static StateSpec coherent(cplx alpha);
  static StateSpec thermal(double nbar);
};

// normalized coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!) truncated to dim
Vector coherent_vector(int dim, cplx alpha);

Operator make_state(const FockSpace& space, const StateSpec& spec);

// Tr[op_1 ... op_k], accumulated left to right
cplx trace_product(const std::vector<Operator>& ops);
cplx trace_of_product(const Matrix& a, const Matrix& b);

bool is_hermitian(const Operator& a, double tol = 1e-12);

// Analytic continuation of Tr[X D(alpha) z^{a^dag a} D(-alpha)].
// The diagonal series b_n z^n with b = diag(D(-alpha) X D(alpha)) is summed
// by a Pade approximant built from the levels that are insensitive to the
// truncation edge.  Reduces to the ordinary trace when the series converges.
struct ContinuedTraceInfo {
  int levels_used = 0;
  double edge_sensitivity = 0.0;
  cplx partial_sum = 0.0;
};

cplx continued_trace(const Matrix& x, cplx alpha, double z, ContinuedTraceInfo* info = nullptr);

// Tr[z^N g_1 z^N g_2 ... z^N g_m] continued in z, N = a^dag a.  The factors must
// carry exact matrix elements on every level kept.
cplx continued_product_trace(const std::vector<Matrix>& g, double z, ContinuedTraceInfo* info = nullptr);

// sum of a power series sum_n c_n evaluated through its diagonal Pade approximant
cplx pade_resum(const std::vector<cplx>& c);

}  // namespace starprod
