#include "starprod/map_framework.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "starprod/parallel.hpp"

namespace starprod {

std::vector<double> Axis::nodes() const {
  std::vector<double> out(count);
  const double h = spacing();
  for (int i = 0; i < count; ++i) out[i] = lo + (i + 0.5) * h;
  return out;
}

LabelGrid::LabelGrid(int label_dim, std::vector<Point> points, std::vector<double> weights)
    : label_dim_(label_dim), points_(std::move(points)), weights_(std::move(weights)) {
  if (label_dim_ < 1) throw DomainError("LabelGrid: label_dim must be positive");
  if (points_.empty()) throw DomainError("LabelGrid: no points");
  if (points_.size() != weights_.size())
    throw DimensionMismatch("LabelGrid: " + std::to_string(points_.size()) + " points but " +
                            std::to_string(weights_.size()) + " weights");
  for (const auto& p : points_)
    if (static_cast<int>(p.size()) != label_dim_)
      throw DimensionMismatch("LabelGrid: point of length " + std::to_string(p.size()) +
                              ", expected " + std::to_string(label_dim_));
  for (double w : weights_)
    if (!(w > 0.0)) throw DomainError("LabelGrid: weights must be positive");
}

LabelGrid LabelGrid::rectangular(const std::vector<Axis>& axes) {
  if (axes.empty()) throw DomainError("LabelGrid::rectangular: no axes");
  std::size_t total = 1;
  double w = 1.0;
  for (const auto& a : axes) {
    if (a.count < 1) throw DomainError("LabelGrid::rectangular: axis count must be >= 1");
    if (!(a.hi > a.lo)) throw DomainError("LabelGrid::rectangular: axis needs hi > lo");
    total *= static_cast<std::size_t>(a.count);
    w *= a.spacing();
  }
  const int d = static_cast<int>(axes.size());
  std::vector<std::vector<double>> nodes;
  for (const auto& a : axes) nodes.push_back(a.nodes());
  std::vector<Point> pts(total, Point(d));
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t r = i;
    for (int k = d - 1; k >= 0; --k) {
      pts[i][k] = nodes[k][r % axes[k].count];
      r /= axes[k].count;
    }
  }
  LabelGrid g(d, std::move(pts), std::vector<double>(total, w));
  g.axes_ = axes;
  return g;
}

LabelGrid LabelGrid::square(double radius, int n) {
  return rectangular({Axis{-radius, radius, n}, Axis{-radius, radius, n}});
}

SymbolField::SymbolField(LabelGrid g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
  if (grid.size() != values.size())
    throw DimensionMismatch("SymbolField: " + std::to_string(values.size()) + " values on a grid of " +
                            std::to_string(grid.size()));
}

cplx SymbolField::integral() const {
  cplx s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += grid.weight(i) * values[i];
  return s;
}

double SymbolField::sup_norm() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

double SymbolField::max_imag() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

namespace {
void require_same_length(const SymbolField& a, const SymbolField& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("symbol fields of length " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
}
}  // namespace

SymbolField operator-(const SymbolField& a, const SymbolField& b) {
  require_same_length(a, b);
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] - b.values[i];
  return {a.grid, std::move(v)};
}

SymbolField operator+(const SymbolField& a, const SymbolField& b) {
  require_same_length(a, b);
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] + b.values[i];
  return {a.grid, std::move(v)};
}

double sup_distance(const SymbolField& a, const SymbolField& b) { return (a - b).sup_norm(); }

cplx QuantizerPair::closed_kernel(const std::vector<Point>&, const Point&) const {
  throw DomainError("pair '" + name() + "' has no closed-form star kernel");
}

cplx QuantizerPair::trace_at(const Matrix& x, const Point& p, TraceMode mode) const {
  const auto form = u_form(p);
  if (!form) {
    if (mode == TraceMode::Continued)
      throw DomainError("pair '" + name() + "' has no displaced form; continued trace unavailable");
    return trace_of_product(x, u_at(p).matrix());
  }
  // for |base| < 1 the Fock series converges and the plain trace is its exact
  // partial sum; resummation there only adds noise in the far tails
  if (mode == TraceMode::Truncated || (mode == TraceMode::Auto && std::abs(form->base) < 1.0))
    return form->coef * trace_of_product(x, displaced_number_power_matrix(static_cast<int>(x.rows()),
                                                                          form->alpha, form->base));
  return form->coef * continued_trace(x, form->alpha, form->base);
}

std::vector<cplx> QuantizerPair::quantizer_traces(const Matrix& x, const LabelGrid& grid,
                                                  TraceMode mode) const {
  std::vector<cplx> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = trace_at(x, grid.point(i), mode); });
  return out;
}

Matrix QuantizerPair::dequantizer_sum(const LabelGrid& grid, const std::vector<cplx>& coeffs) const {
  const int n = space().dim;
  const std::size_t total = grid.size();
  constexpr std::size_t chunk = 64;
  const std::size_t nchunks = (total + chunk - 1) / chunk;
  std::vector<Matrix> partial(nchunks, Matrix::Zero(n, n));
  parallel_for(nchunks, [&](std::size_t c) {
    const std::size_t end = std::min(total, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      if (coeffs[i] == cplx(0.0)) continue;
      partial[c] += coeffs[i] * d_at(grid.point(i)).matrix();
    }
  });
  Matrix acc = Matrix::Zero(n, n);
  for (const auto& p : partial) acc += p;
  return acc;
}

SymbolField QuantizerPair::kernel_star(const SymbolField& fa, const SymbolField& fb,
                                       const LabelGrid& out) const {
  if (!has_closed_kernel()) throw DomainError("pair '" + name() + "' has no closed-form star kernel");
  Kernel2 k = [this](const Point& xpp, const Point& xp, const Point& x) {
    return closed_kernel({xpp, xp}, x);
  };
  return star_via_kernel(fa, fb, k, out);
}

namespace {
void require_pair_space(const Operator& a, const QuantizerPair& pair) {
  if (a.dim() != pair.space().dim)
    throw DimensionMismatch("operator dim " + std::to_string(a.dim()) + " vs pair '" + pair.name() +
                            "' dim " + std::to_string(pair.space().dim));
}
}  // namespace

cplx quantizer_trace(const QuantizerPair& pair, const Matrix& x, const Point& at, TraceMode mode) {
  return pair.trace_at(x, at, mode);
}

SymbolField symbol_field(const Operator& a, const QuantizerPair& pair, const LabelGrid& grid,
                         TraceMode mode) {
  require_pair_space(a, pair);
  if (grid.label_dim() != pair.label_dim())
    throw DimensionMismatch("grid label_dim " + std::to_string(grid.label_dim()) + " vs pair " +
                            std::to_string(pair.label_dim()));
  return {grid, pair.quantizer_traces(a.matrix(), grid, mode)};
}

Operator reconstruct(const SymbolField& f, const QuantizerPair& pair) {
  std::vector<cplx> c(f.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.grid.weight(i) * f.values[i];
  return {pair.space(), pair.dequantizer_sum(f.grid, c)};
}

cplx pairing_kernel(const QuantizerPair& pair, const Point& x_prime, const Point& x) {
  return trace_of_product(pair.u_at(x_prime).matrix(), pair.d_at(x).matrix());
}

SymbolField star_via_operators(const Operator& a, const Operator& b, const QuantizerPair& pair,
                               const LabelGrid& grid, TraceMode mode) {
  return symbol_field(a * b, pair, grid, mode);
}

cplx star_kernel(const QuantizerPair& pair, const std::vector<Point>& inputs, const Point& out,
                 TraceMode mode) {
  if (inputs.size() < 2) throw DomainError("star_kernel: need at least two inputs");
  if (mode != TraceMode::Truncated) {
    std::vector<DisplacedForm> d;
    for (const auto& x : inputs)
      if (auto f = pair.d_form(x)) d.push_back(*f);
    const auto u = pair.u_form(out);
    bool ok = d.size() == inputs.size() && u && std::abs(u->base) <= 1.0;
    for (const auto& f : d) ok = ok && f.base == d[0].base;
    if (ok && (mode == TraceMode::Continued || std::abs(d[0].base) > 1.0)) {
      const int n = pair.space().dim;
      const int big = 3 * n;  // products are formed here, then cut to n levels
      const std::size_t m = d.size();
      std::vector<Matrix> g(m);
      cplx coef = u->coef;
      for (std::size_t i = 0; i < m; ++i) {
        coef *= d[i].coef;
        Matrix gi;
        if (i + 1 < m) {
          gi = displacement_exact_matrix(big, -d[i].alpha) * displacement_exact_matrix(big, d[i + 1].alpha);
        } else {
          gi = displacement_exact_matrix(big, -d[i].alpha) *
               displaced_number_power_matrix(big, u->alpha, u->base) *
               displacement_exact_matrix(big, d[0].alpha);
        }
        g[i] = gi.topLeftCorner(n, n);
      }
      return coef * continued_product_trace(g, d[0].base);
    }
  }
  Matrix acc = pair.d_at(inputs[0]).matrix();
  for (std::size_t i = 1; i < inputs.size(); ++i) acc = acc * pair.d_at(inputs[i]).matrix();
  return pair.trace_at(acc, out, mode);
}

SymbolField star_via_kernel(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                            const LabelGrid& out_grid) {
  require_same_length(fa, fb);
  return pair.kernel_star(fa, fb, out_grid);
}

SymbolField star_via_kernel(const SymbolField& fa, const SymbolField& fb, const Kernel2& kernel,
                            const LabelGrid& out_grid) {
  require_same_length(fa, fb);
  const std::size_t n = fa.size();
  std::vector<cplx> out(out_grid.size());
  parallel_for(out_grid.size(), [&](std::size_t o) {
    const Point& x = out_grid.point(o);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx a = fa.grid.weight(i) * fa.values[i];
      if (a == cplx(0.0)) continue;
      cplx inner = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const cplx b = fb.grid.weight(j) * fb.values[j];
        if (b == cplx(0.0)) continue;
        inner += b * kernel(fa.grid.point(i), fb.grid.point(j), x);
      }
      acc += a * inner;
    }
    out[o] = acc;
  });
  return {out_grid, std::move(out)};
}

SymbolField poisson_bracket(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                            const LabelGrid& out_grid) {
  return star_via_kernel(fa, fb, pair, out_grid) - star_via_kernel(fb, fa, pair, out_grid);
}

SymbolField poisson_bracket(const Operator& a, const Operator& b, const QuantizerPair& pair,
                            const LabelGrid& grid, TraceMode mode) {
  return symbol_field(commutator(a, b), pair, grid, mode);
}

cplx intertwining_kernel(const QuantizerPair& source, const QuantizerPair& target, const Point& x,
                         const Point& y, TraceMode mode) {
  if (source.space().dim != target.space().dim)
    throw DimensionMismatch("intertwining_kernel: pairs live on different spaces");
  return target.trace_at(source.d_at(x).matrix(), y, mode);
}

IntertwineResult intertwine(const SymbolField& f_source, const QuantizerPair& source,
                            const QuantizerPair& target, const LabelGrid& target_grid,
                            TraceMode mode) {
  if (source.space().dim != target.space().dim)
    throw DimensionMismatch("intertwine: pairs live on different spaces");
  // sum_x f(x) Tr[D(x) U1(y)] = Tr[(sum_x f(x) D(x)) U1(y)], so the kernel is
  // applied through the reconstructed operator
  Operator a = reconstruct(f_source, source);
  IntertwineResult r;
  SymbolField back = symbol_field(a, source, f_source.grid, mode);
  r.reconstruction_residual = sup_distance(back, f_source);
  r.field = symbol_field(a, target, target_grid, mode);
  return r;
}

MatrixMechanicsPair::MatrixMechanicsPair(FockSpace space) : space_(space) {}

namespace {
int index_of(double v, int dim) {
  const long r = std::lround(v);
  if (std::abs(v - static_cast<double>(r)) > 1e-9 || r < 0 || r >= dim)
    throw DomainError("matrix pair: label " + std::to_string(v) + " is not an index below " +
                      std::to_string(dim));
  return static_cast<int>(r);
}
}  // namespace

Operator MatrixMechanicsPair::u_at(const Point& x) const {
  const int i = index_of(x.at(0), space_.dim), k = index_of(x.at(1), space_.dim);
  Matrix m = Matrix::Zero(space_.dim, space_.dim);
  m(k, i) = 1.0;
  return {space_, m};
}

Operator MatrixMechanicsPair::d_at(const Point& x) const {
  const int i = index_of(x.at(0), space_.dim), k = index_of(x.at(1), space_.dim);
  Matrix m = Matrix::Zero(space_.dim, space_.dim);
  m(i, k) = 1.0;
  return {space_, m};
}

LabelGrid MatrixMechanicsPair::default_grid() const {
  const int n = space_.dim;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) pts.push_back({static_cast<double>(i), static_cast<double>(k)});
  return {2, pts, std::vector<double>(pts.size(), 1.0)};
}

cplx MatrixMechanicsPair::closed_kernel(const std::vector<Point>& inputs, const Point& out) const {
  // Tr[|i1><k1| |i2><k2| ... |k_out><i_out|]
  if (inputs.empty()) throw DomainError("matrix pair kernel: no inputs");
  const int n = space_.dim;
  for (std::size_t j = 0; j + 1 < inputs.size(); ++j)
    if (index_of(inputs[j][1], n) != index_of(inputs[j + 1][0], n)) return 0.0;
  if (index_of(inputs.back()[1], n) != index_of(out[1], n)) return 0.0;
  if (index_of(out[0], n) != index_of(inputs.front()[0], n)) return 0.0;
  return 1.0;
}

cplx MatrixMechanicsPair::trace_at(const Matrix& x, const Point& p, TraceMode) const {
  return x(index_of(p.at(0), space_.dim), index_of(p.at(1), space_.dim));
}

SymbolField MatrixMechanicsPair::kernel_star(const SymbolField& fa, const SymbolField& fb,
                                             const LabelGrid& out) const {
  // the kernel is a product of Kroneckers; summing them out leaves sum_k a_ik b_kj
  const int n = space_.dim;
  auto dense = [&](const SymbolField& f) {
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Point& p = f.grid.point(i);
      m(index_of(p[0], n), index_of(p[1], n)) += f.grid.weight(i) * f.values[i];
    }
    return m;
  };
  Matrix a = dense(fa), b = dense(fb);
  std::vector<cplx> v(out.size());
  for (std::size_t o = 0; o < out.size(); ++o) {
    const int i = index_of(out.point(o)[0], n), j = index_of(out.point(o)[1], n);
    cplx s = 0.0;
    for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
    v[o] = s;
  }
  return {out, std::move(v)};
}

cplx ehrenfest_star(const Operator& a, const Operator& b, const Vector& psi1, const Vector& psi2,
                    const Matrix& basis) {
  require_same_space(a, b);
  const int n = a.dim();
  if (psi1.size() != n || psi2.size() != n || basis.rows() != n)
    throw DimensionMismatch("ehrenfest_star: vector or basis size does not match the space");
  Vector left = a.matrix().adjoint() * psi1;  // A^dag psi1, so <psi1|A|phi> = left^dag phi
  Vector right = b.matrix() * psi2;
  cplx s = 0.0;
  for (int k = 0; k < basis.cols(); ++k) s += left.dot(basis.col(k)) * basis.col(k).dot(right);
  return s;
}

cplx ehrenfest_star(const Operator& a, const Operator& b, const Vector& psi1, const Vector& psi2) {
  return ehrenfest_star(a, b, psi1, psi2, Matrix::Identity(a.dim(), a.dim()));
}

}  // namespace starprod
