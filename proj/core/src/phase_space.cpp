#include "starprod/phase_space.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace starprod {

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

double ipow(double q, int k) {
  // integer power of a possibly negative base
  double r = 1.0;
  double b = k >= 0 ? q : 1.0 / q;
  for (int i = 0; i < std::abs(k); ++i) r *= b;
  return r;
}

bool degenerate(double q, int n) { return std::abs(1.0 - ipow(q, 2 - n)) < 1e-12; }
}  // namespace

SOrder::SOrder(double s_) : s(s_) {
  if (!(s_ > -1.0 && s_ < 1.0))
    throw DomainError("SOrder: s must lie in the open interval (-1, 1), got " + std::to_string(s_));
  q = (s_ + 1.0) / (s_ - 1.0);
}

PhasePoint PhasePoint::from_weyl(double q, double p) { return {q / kSqrt2, p / kSqrt2}; }

Point PhasePoint::as_weyl() const { return {x1 * kSqrt2, x2 * kSqrt2}; }

SKernel::SKernel(const SOrder& order, int n) : n_(n) {
  if (n < 3) throw DegenerateError("SKernel: need N >= 3 (inputs plus output), got " + std::to_string(n));
  const double q = order.q;
  const double qt = ipow(q, 2 - n);
  if (std::abs(1.0 - qt) < 1e-12)
    throw DegenerateError("SKernel: q^(2-N) = 1 at q = " + std::to_string(q) + ", N = " +
                          std::to_string(n));
  const double iq = 1.0 / q;
  pref_ = (1.0 - q) / (1.0 - qt) * std::pow(1.0 - iq, n - 1) / std::pow(kPi, n - 1);
  const double cc = (q - 1.0) * (1.0 - iq) / (1.0 - qt);
  const double cp = (1.0 - q) * (1.0 - iq) / (1.0 - qt);
  const double t = (qt + 1.0) / (1.0 - qt) * (1.0 - q) * (1.0 - iq);
  c_ = Eigen::MatrixXcd::Zero(n, n);
  // 1-based i, j as in the displayed kernel; c_(i-1, j-1) multiplies a_i conj(a_j)
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      c_(i - 1, j - 1) += cc * ipow(q, j - i + 2 - n);
      c_(j - 1, i - 1) += cc * ipow(q, i - j);
    }
  for (int i = 1; i < n; ++i) {
    c_(i - 1, n - 1) += cp * ipow(q, 1 - i);
    c_(n - 1, i - 1) += cp * ipow(q, i + 1 - n);
  }
  // the |a_i|^2 coefficient applies to every input index
  const double g = 0.5 * (iq - q - t);
  for (int i = 0; i + 1 < n; ++i) c_(i, i) += g;
  c_(n - 1, n - 1) += 0.5 * (q - iq - t);
}

cplx SKernel::operator()(const std::vector<cplx>& a) const {
  if (static_cast<int>(a.size()) != n_)
    throw DimensionMismatch("SKernel: expected " + std::to_string(n_) + " arguments, got " +
                            std::to_string(a.size()));
  cplx e = 0.0;
  for (int i = 0; i < n_; ++i) {
    if (a[i] == cplx(0.0)) continue;
    for (int j = 0; j < n_; ++j)
      if (a[j] != cplx(0.0)) e += c_(i, j) * a[i] * std::conj(a[j]);
  }
  return pref_ * std::exp(e);
}

SKernelCache::SKernelCache(const SOrder& order) : k_(kMaxKernel + 1) {
  for (int n = 3; n <= kMaxKernel; ++n)
    if (!degenerate(order.q, n)) k_[n].emplace(order, n);
}

bool SKernelCache::has(int n) const { return n >= 3 && n <= kMaxKernel && k_[n].has_value(); }

const SKernel& SKernelCache::get(int n) const {
  if (!has(n)) throw DegenerateError("no regular Gaussian kernel with " + std::to_string(n) + " arguments");
  return *k_[n];
}

cplx s_kernel(const SOrder& order, const std::vector<cplx>& alphas) {
  return SKernel(order, static_cast<int>(alphas.size()))(alphas);
}

cplx z_trace(const SOrder& order, cplx alpha, cplx alpha_tilde_conj) {
  const double q = order.q;
  return 1.0 / (1.0 - q) * std::exp(-(q / (1.0 - q) + 0.5) * alpha * alpha_tilde_conj);
}

cplx purity_kernel(const SOrder& order, const std::vector<cplx>& alphas) {
  const int n = static_cast<int>(alphas.size());
  if (n < 2) throw DomainError("purity_kernel: need N >= 2");
  std::vector<cplx> full(alphas);
  full.push_back(0.0);
  full.push_back(0.0);
  const double q = order.q;
  return kPi / ((1.0 - q) * (1.0 - 1.0 / q)) * s_kernel(order, full);
}

cplx moyal_kernel(const Point& xpp, const Point& xp, const Point& x) {
  auto w = [](const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; };
  const double ph = 2.0 * (w(xpp, xp) + w(xp, x) + w(x, xpp));
  return std::polar(1.0 / (kPi * kPi), ph);
}

WeylPair::WeylPair(FockSpace space, double grid_radius, int grid_points)
    : space_(space), radius_(grid_radius), points_(grid_points), kernels_(SOrder(0.0)) {
  if (!(grid_radius > 0.0) || grid_points < 1) throw DomainError("WeylPair: invalid default grid");
}

cplx WeylPair::alpha_of(const Point& x) { return cplx(x.at(0), x.at(1)) / kSqrt2; }

Operator WeylPair::u_at(const Point& x) const {
  return 2.0 * displaced_number_power(space_, alpha_of(x), -1.0);
}

Operator WeylPair::d_at(const Point& x) const {
  return (1.0 / kPi) * displaced_number_power(space_, alpha_of(x), -1.0);
}

LabelGrid WeylPair::default_grid() const { return LabelGrid::square(radius_, points_); }

std::optional<DisplacedForm> WeylPair::u_form(const Point& x) const {
  return DisplacedForm{2.0, alpha_of(x), -1.0};
}

std::optional<DisplacedForm> WeylPair::d_form(const Point& x) const {
  return DisplacedForm{1.0 / kPi, alpha_of(x), -1.0};
}

cplx WeylPair::closed_kernel(const std::vector<Point>& inputs, const Point& out) const {
  if (inputs.size() == 2) return moyal_kernel(inputs[0], inputs[1], out);
  // D_w(y) is half the s = 0 dequantizer at y/sqrt(2)
  std::vector<cplx> a;
  for (const auto& p : inputs) a.push_back(alpha_of(p));
  a.push_back(alpha_of(out));
  const int n = static_cast<int>(a.size());
  const cplx k = kernels_.has(n) ? kernels_.get(n)(a) : s_kernel(SOrder(0.0), a);
  return std::pow(0.5, static_cast<double>(inputs.size())) * k;
}

std::optional<cplx> WeylPair::product_trace_closed(const std::vector<Point>& pts) const {
  const int m = static_cast<int>(pts.size());
  // even products of displaced parities are translations, whose trace is a delta
  if (m < 3 || degenerate(-1.0, m)) return std::nullopt;
  std::vector<Point> in(pts.begin(), pts.end() - 1);
  return closed_kernel(in, pts.back()) / (2.0 * kPi);
}

SymbolField WeylPair::kernel_star(const SymbolField& fa, const SymbolField& fb,
                                  const LabelGrid& out) const {
  SKernel k(SOrder(0.0), 3);
  BilinearKernel3 b;
  b.pref = 0.25 * k.prefactor();
  b.c = k.coefficients();
  b.kappa = 1.0 / kSqrt2;
  return bilinear_kernel_star(b, fa, fb, out);
}

SOrderedPair::SOrderedPair(FockSpace space, SOrder order, double weyl_radius, int grid_points)
    : space_(space), order_(order), radius_(weyl_radius), points_(grid_points), kernels_(order) {
  if (!(weyl_radius > 0.0) || grid_points < 1) throw DomainError("SOrderedPair: invalid default grid");
}

std::string SOrderedPair::name() const {
  std::ostringstream os;
  os << "sordered:" << order_.s;
  return os.str();
}

Operator SOrderedPair::u_at(const Point& x) const {
  return (2.0 / (1.0 - order_.s)) * displaced_number_power(space_, cplx(x.at(0), x.at(1)), order_.q);
}

Operator SOrderedPair::d_at(const Point& x) const {
  return (2.0 / (kPi * (1.0 + order_.s))) *
         displaced_number_power(space_, cplx(x.at(0), x.at(1)), 1.0 / order_.q);
}

LabelGrid SOrderedPair::default_grid() const { return LabelGrid::square(radius_ / kSqrt2, points_); }

std::optional<DisplacedForm> SOrderedPair::u_form(const Point& x) const {
  return DisplacedForm{2.0 / (1.0 - order_.s), cplx(x.at(0), x.at(1)), order_.q};
}

std::optional<DisplacedForm> SOrderedPair::d_form(const Point& x) const {
  return DisplacedForm{2.0 / (kPi * (1.0 + order_.s)), cplx(x.at(0), x.at(1)), 1.0 / order_.q};
}

cplx SOrderedPair::closed_kernel(const std::vector<Point>& inputs, const Point& out) const {
  std::vector<cplx> a;
  for (const auto& p : inputs) a.emplace_back(p.at(0), p.at(1));
  a.emplace_back(out.at(0), out.at(1));
  const int n = static_cast<int>(a.size());
  return kernels_.has(n) ? kernels_.get(n)(a) : s_kernel(order_, a);
}

std::optional<cplx> SOrderedPair::product_trace_closed(const std::vector<Point>& pts) const {
  const int m = static_cast<int>(pts.size());
  if (m < 2 || degenerate(order_.q, m + 2)) return std::nullopt;
  std::vector<cplx> a;
  for (const auto& p : pts) a.emplace_back(p.at(0), p.at(1));
  if (!kernels_.has(m + 2)) return purity_kernel(order_, a);
  a.push_back(0.0);
  a.push_back(0.0);
  const double q = order_.q;
  return kPi / ((1.0 - q) * (1.0 - 1.0 / q)) * kernels_.get(m + 2)(a);
}

SymbolField SOrderedPair::kernel_star(const SymbolField& fa, const SymbolField& fb,
                                      const LabelGrid& out) const {
  SKernel k(order_, 3);
  BilinearKernel3 b;
  b.pref = k.prefactor();
  b.c = k.coefficients();
  b.kappa = 1.0;
  return bilinear_kernel_star(b, fa, fb, out);
}

SymbolField wigner(const Operator& rho, const LabelGrid& grid, TraceMode mode) {
  return symbol_field(rho, WeylPair(rho.space()), grid, mode);
}

}  // namespace starprod
