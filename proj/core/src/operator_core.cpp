#include "starprod/operator_core.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

namespace starprod {

FockSpace::FockSpace(int d, double tol) : dim(d), tail_tolerance(tol) {
  if (d < 2) throw DomainError("FockSpace: dim must be >= 2, got " + std::to_string(d));
  if (!(tol >= 0.0 && tol < 1.0)) throw DomainError("FockSpace: tail_tolerance must lie in [0,1)");
}

Operator::Operator(FockSpace space, Matrix entries) : space_(space), m_(std::move(entries)) {
  if (m_.rows() != space_.dim || m_.cols() != space_.dim)
    throw DimensionMismatch("Operator: entries are " + std::to_string(m_.rows()) + "x" +
                            std::to_string(m_.cols()) + ", space dim " + std::to_string(space_.dim));
}

Operator Operator::zero(const FockSpace& space) { return {space, Matrix::Zero(space.dim, space.dim)}; }

Operator Operator::identity(const FockSpace& space) {
  return {space, Matrix::Identity(space.dim, space.dim)};
}

Operator Operator::adjoint() const { return {space_, m_.adjoint()}; }

void require_same_space(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("operators live on spaces of dim " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
}

Operator& Operator::operator+=(const Operator& o) {
  require_same_space(*this, o);
  m_ += o.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  require_same_space(*this, o);
  m_ -= o.m_;
  return *this;
}

Operator& Operator::operator*=(cplx c) {
  m_ *= c;
  return *this;
}

Operator operator+(Operator a, const Operator& b) { return a += b; }
Operator operator-(Operator a, const Operator& b) { return a -= b; }

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a, b);
  return {a.space(), a.matrix() * b.matrix()};
}

Operator operator*(cplx c, Operator a) { return a *= c; }
Operator operator*(Operator a, cplx c) { return a *= c; }

Ladder build_ladder(const FockSpace& space) {
  const int n = space.dim;
  Matrix a = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  Matrix ad = a.adjoint();
  const double r2 = std::sqrt(2.0);
  Matrix q = (a + ad) / r2;
  Matrix p = (a - ad) / cplx(0.0, r2);
  return {Operator(space, a), Operator(space, ad), Operator(space, q), Operator(space, p),
          Operator::identity(space)};
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator number_operator(const FockSpace& space) {
  Matrix m = Matrix::Zero(space.dim, space.dim);
  for (int k = 0; k < space.dim; ++k) m(k, k) = static_cast<double>(k);
  return {space, m};
}

Operator displacement(const FockSpace& space, cplx alpha) {
  Ladder l = build_ladder(space);
  Matrix g = alpha * l.a_dagger.matrix() - std::conj(alpha) * l.a.matrix();
  Matrix d = g.exp();
  const double expected = std::exp(-0.5 * std::norm(alpha));
  const double dev = std::abs(d(0, 0) - expected);
  if (dev > space.tail_tolerance) {
    throw TruncationError("displacement: |D00 - exp(-|a|^2/2)| = " + std::to_string(dev) +
                          " exceeds tolerance at dim " + std::to_string(space.dim) +
                          ", |alpha| = " + std::to_string(std::abs(alpha)));
  }
  return {space, d};
}

Operator deformed_displacement(const FockSpace& space, cplx alpha, cplx beta) {
  Ladder l = build_ladder(space);
  Matrix g = alpha * l.a_dagger.matrix() - beta * l.a.matrix();
  return {space, g.exp()};
}

Operator number_power(const FockSpace& space, double base) {
  if (base == 0.0) throw DomainError("number_power: base 0 is not admissible");
  Matrix m = Matrix::Zero(space.dim, space.dim);
  double v = 1.0;
  for (int k = 0; k < space.dim; ++k) {
    m(k, k) = v;
    v *= base;
  }
  return {space, m};
}

Operator parity(const FockSpace& space) { return number_power(space, -1.0); }

namespace {

// Entries of an operator whose lower triangle is
//   scale * sqrt(l!/k!) * w^l * c^{k-l} * L_l^{(k-l)}(x),  k >= l,
// filled column-diagonal by column-diagonal through the three-term recurrence.
// hermitian: upper entry is conj(lower); otherwise upper = (-1)^{k-l} conj(lower).
Matrix laguerre_fill(int n, double log_scale, double w, cplx c, double x, bool hermitian) {
  Matrix out = Matrix::Zero(n, n);
  const double ac = std::abs(c);
  const double lw = std::log(std::abs(w));
  const bool neg_w = w < 0.0;
  const cplx ph = ac > 0.0 ? c / ac : cplx(1.0);
  const double lac = ac > 0.0 ? std::log(ac) : 0.0;
  for (int d = 0; d < n; ++d) {
    if (d > 0 && ac == 0.0) break;
    const cplx phd = d > 0 ? std::pow(ph, d) : cplx(1.0);
    double lm1 = 0.0, lm2 = 0.0;
    for (int l = 0; l + d < n; ++l) {
      double ll;
      if (l == 0) {
        ll = 1.0;
      } else if (l == 1) {
        ll = 1.0 + d - x;
      } else {
        ll = ((2.0 * (l - 1) + 1.0 + d - x) * lm1 - (l - 1.0 + d) * lm2) / l;
      }
      lm2 = lm1;
      lm1 = ll;
      const int k = l + d;
      const double lg = 0.5 * (std::lgamma(l + 1.0) - std::lgamma(k + 1.0)) + log_scale +
                        d * lac + l * lw;
      const double sgn = (neg_w && (l % 2)) ? -1.0 : 1.0;
      const cplx v = sgn * std::exp(lg) * ll * phd;
      out(k, l) = v;
      if (d > 0) out(l, k) = hermitian ? std::conj(v) : ((d % 2) ? -std::conj(v) : std::conj(v));
    }
  }
  return out;
}

}  // namespace

Matrix displaced_number_power_matrix(int dim, cplx alpha, double base) {
  if (base == 0.0) throw DomainError("displaced_number_power: base 0 is not admissible");
  // D(a) r^n D(-a) = e^{(r-1)|a|^2} e^{(1-r) a a^dag} r^n e^{(1-r) conj(a) a}, which in the
  // Fock basis collapses to a generalized Laguerre polynomial per entry
  const double r = base;
  const double a2 = std::norm(alpha);
  const double c = 1.0 - r;
  const double x = -c * c * a2 / r;
  return laguerre_fill(dim, (r - 1.0) * a2, r, c * alpha, x, true);
}

Operator displaced_number_power(const FockSpace& space, cplx alpha, double base) {
  return {space, displaced_number_power_matrix(space.dim, alpha, base)};
}

Matrix displacement_exact_matrix(int dim, cplx alpha) {
  const double a2 = std::norm(alpha);
  return laguerre_fill(dim, -0.5 * a2, 1.0, alpha, a2, false);
}

Operator displacement_exact(const FockSpace& space, cplx alpha) {
  return {space, displacement_exact_matrix(space.dim, alpha)};
}

StateSpec StateSpec::fock(int n) {
  StateSpec s;
  s.kind = Kind::Fock;
  s.n = n;
  return s;
}

StateSpec StateSpec::coherent(cplx alpha) {
  StateSpec s;
  s.kind = Kind::Coherent;
  s.alpha = alpha;
  return s;
}

StateSpec StateSpec::thermal(double nbar) {
  StateSpec s;
  s.kind = Kind::Thermal;
  s.nbar = nbar;
  return s;
}

Vector coherent_vector(int dim, cplx alpha) {
  Vector v(dim);
  cplx c = std::exp(-0.5 * std::norm(alpha));
  for (int k = 0; k < dim; ++k) {
    v(k) = c;
    c *= alpha / std::sqrt(static_cast<double>(k + 1));
  }
  return v;
}

Operator make_state(const FockSpace& space, const StateSpec& spec) {
  const int n = space.dim;
  Matrix rho = Matrix::Zero(n, n);
  switch (spec.kind) {
    case StateSpec::Kind::Fock:
      if (spec.n < 0 || spec.n >= n)
        throw DomainError("make_state: fock level " + std::to_string(spec.n) + " outside dim " +
                          std::to_string(n));
      rho(spec.n, spec.n) = 1.0;
      break;
    case StateSpec::Kind::Coherent: {
      Vector v = coherent_vector(n, spec.alpha);
      const double lost = 1.0 - v.squaredNorm();
      if (lost > space.tail_tolerance)
        throw TruncationError("make_state: coherent state loses " + std::to_string(lost) +
                              " of its norm beyond dim " + std::to_string(n));
      rho = v * v.adjoint();
      break;
    }
    case StateSpec::Kind::Thermal: {
      if (spec.nbar < 0.0) throw DomainError("make_state: thermal nbar must be >= 0");
      const double t = spec.nbar / (1.0 + spec.nbar);
      const double lost = std::pow(t, n);
      if (lost > space.tail_tolerance)
        throw TruncationError("make_state: thermal state loses " + std::to_string(lost) +
                              " of its trace beyond dim " + std::to_string(n));
      double pk = 1.0 / (1.0 + spec.nbar);
      for (int k = 0; k < n; ++k) {
        rho(k, k) = pk;
        pk *= t;
      }
      break;
    }
  }
  return {space, rho};
}

cplx trace_of_product(const Matrix& a, const Matrix& b) {
  // sum_ij a_ij b_ji without forming a*b
  return (a.array() * b.transpose().array()).sum();
}

cplx trace_product(const std::vector<Operator>& ops) {
  if (ops.empty()) throw DomainError("trace_product: empty operator list");
  for (const auto& o : ops) require_same_space(ops.front(), o);
  if (ops.size() == 1) return ops.front().trace();
  Matrix acc = ops.front().matrix();
  for (size_t i = 1; i + 1 < ops.size(); ++i) acc = acc * ops[i].matrix();
  return trace_of_product(acc, ops.back().matrix());
}

bool is_hermitian(const Operator& a, double tol) {
  return (a.matrix() - a.matrix().adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.matrix().cwiseAbs().maxCoeff());
}

}  // namespace starprod
