#include <cmath>

#include "starprod/parallel.hpp"
#include "starprod/phase_space.hpp"

namespace starprod {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

// integer offset of b's lattice relative to a's, if the two share a spacing
bool lattice_shift(const Axis& a, const Axis& b, long* shift) {
  if (!close(a.spacing(), b.spacing())) return false;
  const double s = (b.lo - a.lo) / a.spacing();
  const long r = std::lround(s);
  if (std::abs(s - static_cast<double>(r)) > 1e-7) return false;
  *shift = r;
  return true;
}

SymbolField direct_sum(const BilinearKernel3& k, const SymbolField& fa, const SymbolField& fb,
                       const LabelGrid& out) {
  auto al = [&](const Point& p) { return k.kappa * cplx(p[0], p[1]); };
  Kernel2 kern = [&](const Point& a, const Point& b, const Point& x) {
    const cplx v[3] = {al(a), al(b), al(x)};
    cplx e = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) e += k.c(i, j) * v[i] * std::conj(v[j]);
    return k.pref * std::exp(e);
  };
  return star_via_kernel(fa, fb, kern, out);
}

}  // namespace

SymbolField bilinear_kernel_star(const BilinearKernel3& k, const SymbolField& fa, const SymbolField& fb,
                                 const LabelGrid& out) {
  if (fa.size() != fb.size()) throw DimensionMismatch("kernel star: input fields differ in length");
  const auto& c = k.c;
  const bool separable = std::abs(c(2, 1) + c(0, 1)) < 1e-12 && std::abs(c(1, 2) + c(1, 0)) < 1e-12;
  const LabelGrid& in = fa.grid;
  long s1 = 0, s2 = 0;
  const bool lattice = separable && in.is_rectangular() && out.is_rectangular() &&
                       in.axes().size() == 2 && out.axes().size() == 2 &&
                       fb.grid.is_rectangular() && fb.grid.size() == in.size() &&
                       lattice_shift(in.axes()[0], out.axes()[0], &s1) &&
                       lattice_shift(in.axes()[1], out.axes()[1], &s2);
  if (!lattice) return direct_sum(k, fa, fb, out);

  const Axis& ax1 = in.axes()[0];
  const Axis& ax2 = in.axes()[1];
  const int n1 = ax1.count, n2 = ax2.count;
  const int m1 = out.axes()[0].count, m2 = out.axes()[1].count;
  const double h1 = ax1.spacing(), h2 = ax2.spacing();
  const std::vector<double> b1 = ax1.nodes(), b2 = ax2.nodes();
  const double kap = k.kappa;

  // second-input weights with its own |b|^2 factor folded in
  Eigen::MatrixXcd g(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n2 + j;
      const double r2 = kap * kap * (b1[i] * b1[i] + b2[j] * b2[j]);
      g(i, j) = fb.grid.weight(idx) * fb.values[idx] * std::exp(c(1, 1) * r2);
    }

  // d = a - x = (p1 h1, p2 h2) with p in [lo, hi]
  const long lo1 = -(m1 - 1) - s1, hi1 = (n1 - 1) - s1;
  const long lo2 = -(m2 - 1) - s2, hi2 = (n2 - 1) - s2;
  const long c1 = hi1 - lo1 + 1, c2 = hi2 - lo2 + 1;
  std::vector<cplx> ghat(static_cast<std::size_t>(c1 * c2));
  parallel_for(static_cast<std::size_t>(c1), [&](std::size_t r) {
    Eigen::VectorXcd e2(n2);
    for (long t = 0; t < c2; ++t) {
      const cplx ad = kap * cplx((lo1 + static_cast<long>(r)) * h1, (lo2 + t) * h2);
      const cplx p = kap * (c(0, 1) * ad + c(1, 0) * std::conj(ad));
      const cplx q = kap * cplx(0.0, 1.0) * (c(1, 0) * std::conj(ad) - c(0, 1) * ad);
      for (int j = 0; j < n2; ++j) e2(j) = std::exp(b2[j] * q);
      Eigen::VectorXcd rows = g * e2;
      cplx acc = 0.0;
      for (int i = 0; i < n1; ++i) acc += std::exp(b1[i] * p) * rows(i);
      ghat[r * c2 + t] = acc;
    }
  });

  std::vector<cplx> res(out.size());
  parallel_for(out.size(), [&](std::size_t o) {
    const long k1 = static_cast<long>(o) / m2, k2 = static_cast<long>(o) % m2;
    const Point& x = out.point(o);
    const cplx ax = kap * cplx(x[0], x[1]);
    const cplx base = c(2, 2) * std::norm(ax);
    cplx acc = 0.0;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * n2 + j;
        const cplx f = fa.grid.weight(idx) * fa.values[idx];
        if (f == cplx(0.0)) continue;
        const cplx aa = kap * cplx(b1[i], b2[j]);
        const cplx e = base + c(0, 0) * std::norm(aa) + c(0, 2) * aa * std::conj(ax) +
                       c(2, 0) * ax * std::conj(aa);
        const long p1 = i - k1 - s1 - lo1, p2 = j - k2 - s2 - lo2;
        acc += f * std::exp(e) * ghat[p1 * c2 + p2];
      }
    res[o] = k.pref * acc;
  });
  return {out, std::move(res)};
}

}  // namespace starprod
