#include <cmath>
#include <limits>

#include "starprod/operator_core.hpp"

namespace starprod {

cplx pade_resum(const std::vector<cplx>& c) {
  const int k = static_cast<int>(c.size());
  if (k == 0) return 0.0;
  const int m = k / 2;
  const int l = k - 1 - m;
  if (m == 0) return c[0];
  // denominator 1 + q_1 t + ... + q_m t^m with sum_j q_j c_{i-j} = 0 for i = l+1..l+m
  Matrix a(m, m);
  Vector rhs(m);
  for (int i = 0; i < m; ++i) {
    const int row = l + 1 + i;
    for (int j = 1; j <= m; ++j) a(i, j - 1) = row - j >= 0 ? c[row - j] : cplx(0.0);
    rhs(i) = -c[row];
  }
  Vector qv = a.completeOrthogonalDecomposition().solve(rhs);
  std::vector<cplx> q(m + 1);
  q[0] = 1.0;
  for (int j = 1; j <= m; ++j) q[j] = qv(j - 1);
  cplx num = 0.0, den = 0.0;
  for (int i = 0; i <= l; ++i) {
    cplx pi = 0.0;
    for (int j = 0; j <= std::min(i, m); ++j) pi += q[j] * c[i - j];
    num += pi;
  }
  for (int j = 0; j <= m; ++j) den += q[j];
  return num / den;
}

namespace {
// Pade estimates on growing prefixes of c; keep the one sitting on the
// flattest stretch.  Late coefficients are either contaminated by the
// truncation edge or carry large cancelling powers, and the estimates wander
// once they enter.
cplx flattest_pade(const std::vector<cplx>& c, ContinuedTraceInfo* info) {
  const int n = static_cast<int>(c.size());
  const int kmin = std::min(n, 6);
  std::vector<cplx> est;
  std::vector<int> lens;
  for (int k = kmin; k <= n; k += 2) {
    est.push_back(pade_resum(std::vector<cplx>(c.begin(), c.begin() + k)));
    lens.push_back(k);
  }
  size_t best = est.size() - 1;
  double best_var = std::numeric_limits<double>::infinity();
  if (est.size() >= 3) {
    for (size_t i = 1; i + 1 < est.size(); ++i) {
      const double v = std::abs(est[i] - est[i - 1]) + std::abs(est[i + 1] - est[i]);
      if (v <= best_var) {
        best_var = v;
        best = i;
      }
    }
  } else {
    best_var = est.size() == 2 ? std::abs(est[1] - est[0]) : 0.0;
  }
  if (info) {
    info->levels_used = lens[best];
    info->edge_sensitivity = best_var;
    cplx partial = 0.0;
    for (const auto& v : c) partial += v;
    info->partial_sum = partial;
  }
  return est[best];
}
}  // namespace

cplx continued_trace(const Matrix& x, cplx alpha, double z, ContinuedTraceInfo* info) {
  const int n = static_cast<int>(x.rows());
  Matrix d = displacement_exact_matrix(n, alpha);
  Matrix b = d.adjoint() * x * d;
  // levels near the truncation edge are not exact here, so the continuation
  // is left to the edge-aware Pade selection
  std::vector<cplx> c(n);
  double zp = 1.0;
  for (int k = 0; k < n; ++k, zp *= z) c[k] = b(k, k) * zp;
  return flattest_pade(c, info);
}

namespace {
constexpr double kPi = 3.14159265358979323846;

// [l/m] Pade approximant of the series c, evaluated at z
cplx pade_at(const std::vector<cplx>& c, int l, int m, cplx z) {
  Matrix a(m, m);
  Vector rhs(m);
  for (int i = 0; i < m; ++i) {
    const int row = l + 1 + i;
    for (int j = 1; j <= m; ++j) a(i, j - 1) = row - j >= 0 ? c[row - j] : cplx(0.0);
    rhs(i) = -c[row];
  }
  const Vector qv = a.completeOrthogonalDecomposition().solve(rhs);
  std::vector<cplx> q(m + 1);
  q[0] = 1.0;
  for (int j = 1; j <= m; ++j) q[j] = qv(j - 1);
  cplx num = 0.0, den = 0.0, zp = 1.0;
  for (int i = 0; i <= l; ++i, zp *= z) {
    cplx pi = 0.0;
    for (int j = 0; j <= std::min(i, m); ++j) pi += q[j] * c[i - j];
    num += pi * zp;
  }
  zp = 1.0;
  for (int j = 0; j <= m; ++j, zp *= z) den += q[j] * zp;
  return num / den;
}

// int_0^z R over a half circle with diameter [0, z]; side = +1 or -1 picks the half plane
cplx integrate_arc(const std::vector<cplx>& r, int m, double z, int side) {
  const int steps = 1024;  // Simpson
  const cplx c = 0.5 * z;
  const cplx rot(0.0, -static_cast<double>(side));
  cplx acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double th = kPi * i / steps;
    const cplx e = std::exp(rot * th);
    const cplx pt = c - c * e;
    const cplx dz = -c * rot * e * (kPi / steps);
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * pade_at(r, m, m, pt) * dz;
  }
  return acc / 3.0;
}

// Continue T(z) = sum_k c_k z^k past its radius of convergence assuming the
// logarithmic derivative T'/T is rational (true for Gaussian-type traces:
// rational prefactor times the exponential of a rational form).  The Pade of
// T'/T is integrated from 0 along two half circles, which also steps around
// poles on the real axis; agreement of degrees and of both paths is demanded.
bool log_continue(const std::vector<cplx>& c, double z, cplx* out, double* spread) {
  const int n = static_cast<int>(c.size());
  if (n < 12 || std::abs(c[0]) == 0.0) return false;
  std::vector<cplx> l(n, 0.0);
  l[0] = std::log(c[0]);
  for (int k = 1; k < n; ++k) {
    cplx s = static_cast<double>(k) * c[k];
    for (int j = 1; j < k; ++j) s -= static_cast<double>(j) * l[j] * c[k - j];
    l[k] = s / (static_cast<double>(k) * c[0]);
  }
  std::vector<cplx> r(n - 1);
  for (int k = 0; k + 1 < n; ++k) r[k] = static_cast<double>(k + 1) * l[k + 1];
  const int mmax = std::min(24, (n - 3) / 2);
  std::vector<cplx> est;
  std::vector<double> gap;
  for (int m = 2; m <= mmax; ++m) {
    const cplx up = integrate_arc(r, m, z, 1), down = integrate_arc(r, m, z, -1);
    const cplx vu = std::exp(l[0] + up), vd = std::exp(l[0] + down);
    est.push_back(0.5 * (vu + vd));
    gap.push_back(std::abs(vu - vd));
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t pick = 0;
  for (std::size_t i = 1; i + 1 < est.size(); ++i) {
    const double v = std::abs(est[i] - est[i - 1]) + std::abs(est[i + 1] - est[i]) + gap[i];
    if (v < best) {
      best = v;
      pick = i;
    }
  }
  if (!std::isfinite(best)) return false;
  *out = est[pick];
  *spread = best;
  return std::abs(est[pick]) == 0.0 || best <= 1e-6 * std::abs(est[pick]);
}

// sum_k t_k z^k: plain partial sum inside the unit disc, else continued
cplx continue_series(const std::vector<cplx>& t, double z, ContinuedTraceInfo* info) {
  const int n = static_cast<int>(t.size());
  if (std::abs(z) <= 1.0) {
    // inside the disc of convergence the partial sum is already the answer
    cplx sum = 0.0;
    double zp = 1.0;
    for (int k = 0; k < n; ++k, zp *= z) sum += t[k] * zp;
    if (info) *info = {n, 0.0, sum};
    return sum;
  }
  cplx v;
  double spread = 0.0;
  if (log_continue(t, z, &v, &spread)) {
    if (info) *info = {n, spread, 0.0};
    return v;
  }
  std::vector<cplx> c(n);
  double zp = 1.0;
  for (int k = 0; k < n; ++k, zp *= z) c[k] = t[k] * zp;
  return flattest_pade(c, info);
}
}  // namespace

cplx continued_product_trace(const std::vector<Matrix>& g, double z, ContinuedTraceInfo* info) {
  if (g.empty()) throw DomainError("continued_product_trace: no factors");
  const int n = static_cast<int>(g[0].rows());
  for (const auto& m : g)
    if (m.rows() != n || m.cols() != n) throw DimensionMismatch("continued_product_trace: factor shapes differ");
  // coefficient matrices of prod_i z^N g_i in powers of z; degree k < n is
  // exact because every part of a composition of k is then a valid level
  std::vector<Matrix> p(n, Matrix::Zero(n, n));
  std::vector<bool> live(n, false);
  p[0] = Matrix::Identity(n, n);
  live[0] = true;
  for (const auto& gi : g) {
    std::vector<Matrix> q(n, Matrix::Zero(n, n));
    std::vector<bool> qlive(n, false);
    for (int j = 0; j < n; ++j) {
      if (!live[j]) continue;
      for (int r = 0; j + r < n; ++r) {
        q[j + r].noalias() += p[j].col(r) * gi.row(r);
        qlive[j + r] = true;
      }
    }
    p.swap(q);
    live.swap(qlive);
  }
  std::vector<cplx> t(n);
  for (int k = 0; k < n; ++k) t[k] = p[k].trace();
  return continue_series(t, z, info);
}

}  // namespace starprod
