#pragma once

#include <Eigen/Dense>

#include "starprod/map_framework.hpp"

namespace starprod {

// s in (-1, 1); q = (s+1)/(s-1) is negative, and q = -1 exactly at s = 0
struct SOrder {
  double s = 0.0;
  double q = -1.0;

  SOrder() = default;
  explicit SOrder(double s);
  SOrder negated() const { return SOrder(-s); }
};

// alpha = x1 + i x2.  Weyl coordinates are (q, p) = sqrt(2) (x1, x2).
struct PhasePoint {
  double x1 = 0.0;
  double x2 = 0.0;

  cplx alpha() const { return {x1, x2}; }
  static PhasePoint from_weyl(double q, double p);
  Point as_weyl() const;
  Point as_label() const { return {x1, x2}; }
};

// Gaussian kernel Tr[D(a_1)...D(a_{N-1}) U(a_N)] of the s-ordered pair written as
// pref * exp(sum_ij c_ij a_i conj(a_j)).  Needs N >= 3; throws DegenerateError
// when q^{2-N} = 1.
class SKernel {
 public:
  SKernel(const SOrder& order, int n);

  int size() const { return n_; }
  cplx prefactor() const { return pref_; }
  const Eigen::MatrixXcd& coefficients() const { return c_; }
  cplx operator()(const std::vector<cplx>& alphas) const;

 private:
  int n_;
  cplx pref_;
  Eigen::MatrixXcd c_;
};

// SKernel for N = 3..kMaxKernel, built once; empty where degenerate
class SKernelCache {
 public:
  static constexpr int kMaxKernel = 12;
  explicit SKernelCache(const SOrder& order);
  // throws DegenerateError if the requested size is degenerate or out of range
  const SKernel& get(int n) const;
  bool has(int n) const;

 private:
  std::vector<std::optional<SKernel>> k_;
};

// Labels (q, p); U(q,p) = 2 D(a) (-1)^{a^dag a} D(-a) with a = (q + ip)/sqrt(2),
// D = U/(2 pi), measure dq dp.
class WeylPair : public QuantizerPair {
 public:
  explicit WeylPair(FockSpace space, double grid_radius = 6.0, int grid_points = 64);

  std::string name() const override { return "weyl"; }
  int label_dim() const override { return 2; }
  const FockSpace& space() const override { return space_; }
  Operator u_at(const Point& x) const override;
  Operator d_at(const Point& x) const override;
  LabelGrid default_grid() const override;
  bool normalized() const override { return true; }
  std::optional<DisplacedForm> u_form(const Point& x) const override;
  std::optional<DisplacedForm> d_form(const Point& x) const override;
  bool has_closed_kernel() const override { return true; }
  cplx closed_kernel(const std::vector<Point>& inputs, const Point& out) const override;
  std::optional<cplx> product_trace_closed(const std::vector<Point>& pts) const override;
  SymbolField kernel_star(const SymbolField& fa, const SymbolField& fb,
                          const LabelGrid& out) const override;

  static cplx alpha_of(const Point& x);

 private:
  FockSpace space_;
  double radius_;
  int points_;
  SKernelCache kernels_;
};

// Labels (x1, x2); U = (2/(1-s)) D(a) q^{a^dag a} D(-a),
// D = (2/(pi(1+s))) D(a) q^{-a^dag a} D(-a) = U(x, -s)/pi, measure dx1 dx2.
class SOrderedPair : public QuantizerPair {
 public:
  // the default grid radius is given in Weyl units and converted to x
  SOrderedPair(FockSpace space, SOrder order, double weyl_radius = 6.0, int grid_points = 64);

  std::string name() const override;
  int label_dim() const override { return 2; }
  const FockSpace& space() const override { return space_; }
  const SOrder& order() const { return order_; }
  Operator u_at(const Point& x) const override;
  Operator d_at(const Point& x) const override;
  LabelGrid default_grid() const override;
  bool normalized() const override { return true; }
  std::optional<DisplacedForm> u_form(const Point& x) const override;
  std::optional<DisplacedForm> d_form(const Point& x) const override;
  bool has_closed_kernel() const override { return true; }
  cplx closed_kernel(const std::vector<Point>& inputs, const Point& out) const override;
  std::optional<cplx> product_trace_closed(const std::vector<Point>& pts) const override;
  SymbolField kernel_star(const SymbolField& fa, const SymbolField& fb,
                          const LabelGrid& out) const override;

 private:
  FockSpace space_;
  SOrder order_;
  double radius_;
  int points_;
  SKernelCache kernels_;
};

// Tr[D(xpp) D(xp) U(x)] for the Weyl pair, points in (q, p):
// pi^{-2} exp{2i[w(xpp,xp) + w(xp,x) + w(x,xpp)]}, w(a,b) = a1 b2 - a2 b1
cplx moyal_kernel(const Point& xpp, const Point& xp, const Point& x);

cplx s_kernel(const SOrder& order, const std::vector<cplx>& alphas);

// 1/(1-q) exp[-(q/(1-q) + 1/2) alpha alpha~*] = Tr[exp(alpha a^dag - alpha~* a) q^{a^dag a}]
cplx z_trace(const SOrder& order, cplx alpha, cplx alpha_tilde_conj);

// Tr[D(a_1) ... D(a_N)] of the s-ordered pair, via the kernel with two trailing
// zero arguments; DegenerateError when q^{-N} = 1 (s = 0 with N even)
cplx purity_kernel(const SOrder& order, const std::vector<cplx>& alphas);

SymbolField wigner(const Operator& rho, const LabelGrid& grid, TraceMode mode = TraceMode::Auto);

// Kernel pref * exp(sum c_ij a_i conj(a_j)) over (first input, second input,
// output) with a = kappa (x1 + i x2).  When the second input enters only
// through a_first - a_out the double sum is split in two passes on a
// rectangular lattice; otherwise falls back to direct summation.
struct BilinearKernel3 {
  cplx pref = 1.0;
  Eigen::Matrix3cd c = Eigen::Matrix3cd::Zero();
  double kappa = 1.0;
};

SymbolField bilinear_kernel_star(const BilinearKernel3& k, const SymbolField& fa, const SymbolField& fb,
                                 const LabelGrid& out);

}  // namespace starprod
