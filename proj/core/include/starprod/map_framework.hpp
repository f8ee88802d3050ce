#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "starprod/operator_core.hpp"

namespace starprod {

using Point = std::vector<double>;

// midpoint-rule axis: count cells of equal width on [lo, hi]
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int count = 1;

  double spacing() const { return (hi - lo) / count; }
  std::vector<double> nodes() const;
};

class LabelGrid {
 public:
  LabelGrid() = default;
  LabelGrid(int label_dim, std::vector<Point> points, std::vector<double> weights);

  // tensor-product midpoint grid, last axis varies fastest
  static LabelGrid rectangular(const std::vector<Axis>& axes);
  // square grid [-radius, radius]^2 with n points per axis
  static LabelGrid square(double radius, int n);

  int label_dim() const { return label_dim_; }
  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

  bool is_rectangular() const { return !axes_.empty(); }
  const std::vector<Axis>& axes() const { return axes_; }

 private:
  int label_dim_ = 0;
  std::vector<Point> points_;
  std::vector<double> weights_;
  std::vector<Axis> axes_;
};

struct SymbolField {
  LabelGrid grid;
  std::vector<cplx> values;

  SymbolField() = default;
  SymbolField(LabelGrid g, std::vector<cplx> v);

  std::size_t size() const { return values.size(); }
  // sum_i w_i f_i
  cplx integral() const;
  double sup_norm() const;
  double max_imag() const;
};

SymbolField operator-(const SymbolField& a, const SymbolField& b);
SymbolField operator+(const SymbolField& a, const SymbolField& b);
double sup_distance(const SymbolField& a, const SymbolField& b);

// How Tr[X U(x)] is evaluated.
//   Truncated: plain trace in the truncated space.
//   Continued: analytic continuation of the Fock-diagonal series (needs a pair
//     whose quantizer is a displaced number power).
//   Auto: Continued for displaced forms with |base| >= 1, else Truncated.
enum class TraceMode { Truncated, Continued, Auto };

// coef * D(alpha) base^{a^dag a} D(-alpha)
struct DisplacedForm {
  double coef = 1.0;
  cplx alpha = 0.0;
  double base = 1.0;
};

class QuantizerPair {
 public:
  virtual ~QuantizerPair() = default;

  virtual std::string name() const = 0;
  virtual int label_dim() const = 0;
  virtual const FockSpace& space() const = 0;
  virtual Operator u_at(const Point& x) const = 0;
  virtual Operator d_at(const Point& x) const = 0;
  virtual LabelGrid default_grid() const = 0;

  // symbols of the identity equal 1
  virtual bool normalized() const { return false; }
  // Tr[U(x') D(x)] reproduces a delta
  virtual bool delta_complete() const { return true; }

  virtual std::optional<DisplacedForm> u_form(const Point&) const { return std::nullopt; }
  virtual std::optional<DisplacedForm> d_form(const Point&) const { return std::nullopt; }

  // closed-form N-symbol kernel Tr[D(x_1)...D(x_N) U(x)] if the pair has one
  virtual bool has_closed_kernel() const { return false; }
  virtual cplx closed_kernel(const std::vector<Point>& inputs, const Point& out) const;

  // Tr[X U(p)]
  virtual cplx trace_at(const Matrix& x, const Point& p, TraceMode mode) const;
  // Tr[X U(x_i)] for every grid point
  virtual std::vector<cplx> quantizer_traces(const Matrix& x, const LabelGrid& grid,
                                             TraceMode mode) const;
  // sum_i c_i D(x_i), summed in a fixed order
  virtual Matrix dequantizer_sum(const LabelGrid& grid, const std::vector<cplx>& coeffs) const;
  // closed form of Tr[D(x_1)...D(x_N)] when one exists for this N
  virtual std::optional<cplx> product_trace_closed(const std::vector<Point>&) const {
    return std::nullopt;
  }

  // double quadrature with the closed-form kernel; pairs may override with a
  // faster but equivalent evaluation
  virtual SymbolField kernel_star(const SymbolField& fa, const SymbolField& fb,
                                  const LabelGrid& out) const;
};

cplx quantizer_trace(const QuantizerPair& pair, const Matrix& x, const Point& at, TraceMode mode);

SymbolField symbol_field(const Operator& a, const QuantizerPair& pair, const LabelGrid& grid,
                         TraceMode mode = TraceMode::Auto);

Operator reconstruct(const SymbolField& f, const QuantizerPair& pair);

cplx pairing_kernel(const QuantizerPair& pair, const Point& x_prime, const Point& x);

SymbolField star_via_operators(const Operator& a, const Operator& b, const QuantizerPair& pair,
                               const LabelGrid& grid, TraceMode mode = TraceMode::Auto);

// Tr[D(x_1) ... D(x_N) U(out)].  When every D is a displaced number power with
// |base| > 1 (unbounded, so the truncated trace diverges) and U is bounded, Auto
// and Continued sum the trace as a series in the base and continue it.
cplx star_kernel(const QuantizerPair& pair, const std::vector<Point>& inputs, const Point& out,
                 TraceMode mode = TraceMode::Auto);

using Kernel2 = std::function<cplx(const Point& xpp, const Point& xp, const Point& x)>;

SymbolField star_via_kernel(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                            const LabelGrid& out_grid);
SymbolField star_via_kernel(const SymbolField& fa, const SymbolField& fb, const Kernel2& kernel,
                            const LabelGrid& out_grid);

// fa * fb - fb * fa by the kernel route
SymbolField poisson_bracket(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                            const LabelGrid& out_grid);
// same bracket by the operator route, Tr[(AB - BA) U(x)]
SymbolField poisson_bracket(const Operator& a, const Operator& b, const QuantizerPair& pair,
                            const LabelGrid& grid, TraceMode mode = TraceMode::Auto);

struct TracePowerOptions {
  enum class Method { Auto, Direct, Factorized, MonteCarlo };
  Method method = Method::Auto;
  // largest grid^N tuple count enumerated directly
  double budget = 2.0e7;
  std::size_t samples = 1000000;
  std::uint64_t seed = 12345;
  TraceMode mode = TraceMode::Truncated;
};

struct TracePowerResult {
  cplx value = 0.0;
  std::string method;
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;
  double std_error = 0.0;  // Monte-Carlo only
};

// N-fold quadrature of prod W(x_i) Tr[D(x_1)...D(x_N)]
TracePowerResult trace_power(const Operator& rho, const QuantizerPair& pair, int n,
                             const LabelGrid& grid, const TracePowerOptions& opts = {});
TracePowerResult trace_power_fields(const std::vector<SymbolField>& fields, const QuantizerPair& pair,
                                    const TracePowerOptions& opts = {});
TracePowerResult fidelity(const Operator& rho1, const Operator& rho2, const QuantizerPair& pair,
                          const LabelGrid& grid, const TracePowerOptions& opts = {});

struct EvolutionOptions {
  int record_every = 0;  // 0: only initial and final
  double growth_limit = 10.0;
  TraceMode mode = TraceMode::Auto;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<SymbolField> fields;
  std::vector<SymbolField> exact_fields;
  double max_deviation = 0.0;
};

// d f_A/dt = i {f_H, f_A}.  The bracket is taken through operators, so the RK4
// stages run on the operator itself and the field is read off at recorded
// steps.  Exact series from exp(iHt) A exp(-iHt).
EvolutionResult heisenberg_evolve(const Operator& a0, const Operator& h, const QuantizerPair& pair,
                                  const LabelGrid& grid, double t_final, double dt,
                                  const EvolutionOptions& opts = {});

struct IntertwineResult {
  SymbolField field;
  // sup |f_source - symbol(reconstruct(f_source))| over the source grid
  double reconstruction_residual = 0.0;
};

// phi(y) = sum_x w_x f(x) Tr[D_source(x) U_target(y)]
IntertwineResult intertwine(const SymbolField& f_source, const QuantizerPair& source,
                            const QuantizerPair& target, const LabelGrid& target_grid,
                            TraceMode mode = TraceMode::Auto);
cplx intertwining_kernel(const QuantizerPair& source, const QuantizerPair& target, const Point& x,
                         const Point& y, TraceMode mode = TraceMode::Auto);

// U(i,k) = |k><i|, D(i,k) = |i><k|; label points are (i, k) with unit weights
class MatrixMechanicsPair : public QuantizerPair {
 public:
  explicit MatrixMechanicsPair(FockSpace space);

  std::string name() const override { return "matrix"; }
  int label_dim() const override { return 2; }
  const FockSpace& space() const override { return space_; }
  Operator u_at(const Point& x) const override;
  Operator d_at(const Point& x) const override;
  LabelGrid default_grid() const override;
  bool has_closed_kernel() const override { return true; }
  cplx closed_kernel(const std::vector<Point>& inputs, const Point& out) const override;
  cplx trace_at(const Matrix& x, const Point& p, TraceMode mode) const override;
  SymbolField kernel_star(const SymbolField& fa, const SymbolField& fb,
                          const LabelGrid& out) const override;

 private:
  FockSpace space_;
};

// sum_n <psi1|A|phi_n><phi_n|B|psi2>; basis columns phi_n (identity = Fock basis)
cplx ehrenfest_star(const Operator& a, const Operator& b, const Vector& psi1, const Vector& psi2,
                    const Matrix& basis);
cplx ehrenfest_star(const Operator& a, const Operator& b, const Vector& psi1, const Vector& psi2);

}  // namespace starprod
