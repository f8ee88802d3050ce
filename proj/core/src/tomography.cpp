#include "starprod/tomography.hpp"

#include <cmath>
#include <map>
#include <string>

#include "starprod/parallel.hpp"

namespace starprod {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::string frame_str(double mu, double nu) {
  return "(mu, nu) = (" + std::to_string(mu) + ", " + std::to_string(nu) + ")";
}

// distinct (mu, nu) frames of a grid and the frame index of every point
struct FrameIndex {
  std::vector<std::pair<double, double>> frames;
  std::vector<std::size_t> of_point;
};

FrameIndex index_frames(const LabelGrid& grid) {
  FrameIndex fi;
  std::map<std::pair<double, double>, std::size_t> seen;
  fi.of_point.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto key = std::make_pair(grid.point(i)[1], grid.point(i)[2]);
    auto it = seen.find(key);
    if (it == seen.end()) {
      it = seen.emplace(key, fi.frames.size()).first;
      fi.frames.push_back(key);
    }
    fi.of_point[i] = it->second;
  }
  return fi;
}

void check_output_frame(double mu, double nu) {
  if (mu == 0.0 || nu == 0.0)
    throw DegenerateFrame("tomographic kernel is singular on the axes, " + frame_str(mu, nu));
  if (4.0 * mu * mu * nu * nu > 1.0)
    throw BranchError("tomographic kernel needs 4 mu^2 nu^2 <= 1, " + frame_str(mu, nu));
}

// cubic Lagrange interpolation on a uniform node set; zero outside the node span
cplx interp(const std::vector<cplx>& f, double lo, double h, double x) {
  const int n = static_cast<int>(f.size());
  const double t = (x - lo) / h - 0.5;  // fractional node index
  if (t < -0.5 || t > n - 0.5) return 0.0;
  if (n < 4) {
    const int i = std::max(0, std::min(n - 1, static_cast<int>(std::lround(t))));
    return f[i];
  }
  int i0 = static_cast<int>(std::floor(t)) - 1;
  i0 = std::max(0, std::min(n - 4, i0));
  const double u = t - i0;
  cplx s = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) l *= (u - b) / static_cast<double>(a - b);
    s += l * f[i0 + a];
  }
  return s;
}
}  // namespace

TomoFrame make_frame(const FockSpace& space, double mu, double nu) {
  if (mu == 0.0 && nu == 0.0) throw DegenerateFrame("tomographic frame " + frame_str(mu, nu));
  Ladder l = build_ladder(space);
  Matrix h = mu * l.q.matrix() + nu * l.p.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  TomoFrame f;
  f.mu = mu;
  f.nu = nu;
  f.eigenvalues = es.eigenvalues();
  f.eigenvectors = es.eigenvectors();
  return f;
}

TomographicPair::TomographicPair(FockSpace space, double delta_width) : space_(space), width_(delta_width) {
  if (!(delta_width > 0.0)) throw DomainError("TomographicPair: delta_width must be positive");
}

double TomographicPair::smear(double x) const {
  return std::exp(-0.5 * x * x / (width_ * width_)) / (width_ * std::sqrt(2.0 * kPi));
}

cplx TomographicPair::xi_of(double mu, double nu) { return cplx(nu, -mu) / std::sqrt(2.0); }

Operator TomographicPair::u_at(const Point& x) const {
  TomoFrame f = make_frame(space_, x.at(1), x.at(2));
  Eigen::VectorXd g(space_.dim);
  for (int k = 0; k < space_.dim; ++k) g(k) = smear(x[0] - f.eigenvalues(k));
  return {space_, f.eigenvectors * g.asDiagonal() * f.eigenvectors.adjoint()};
}

Operator TomographicPair::d_at(const Point& x) const {
  if (x.at(1) == 0.0 && x.at(2) == 0.0) throw DegenerateFrame("tomographic frame (0, 0)");
  const cplx c = std::polar(1.0 / (2.0 * kPi), x[0]);
  return {space_, c * displacement_exact_matrix(space_.dim, xi_of(x[1], x[2]))};
}

LabelGrid TomographicPair::default_grid() const {
  return LabelGrid::rectangular({Axis{-24.0, 24.0, 240}, Axis{-5.0, 5.0, 20}, Axis{-5.0, 5.0, 20}});
}

cplx TomographicPair::trace_at(const Matrix& x, const Point& p, TraceMode) const {
  TomoFrame f = make_frame(space_, p.at(1), p.at(2));
  cplx s = 0.0;
  for (int k = 0; k < space_.dim; ++k) {
    const auto v = f.eigenvectors.col(k);
    s += smear(p[0] - f.eigenvalues(k)) * v.dot(x * v);
  }
  return s;
}

std::vector<cplx> TomographicPair::quantizer_traces(const Matrix& x, const LabelGrid& grid,
                                                    TraceMode) const {
  FrameIndex fi = index_frames(grid);
  const int n = space_.dim;
  std::vector<Eigen::VectorXd> lam(fi.frames.size());
  std::vector<Vector> diag(fi.frames.size());
  parallel_for(fi.frames.size(), [&](std::size_t f) {
    TomoFrame fr = make_frame(space_, fi.frames[f].first, fi.frames[f].second);
    lam[f] = fr.eigenvalues;
    Vector d(n);
    for (int k = 0; k < n; ++k) d(k) = fr.eigenvectors.col(k).dot(x * fr.eigenvectors.col(k));
    diag[f] = d;
  });
  std::vector<cplx> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const std::size_t f = fi.of_point[i];
    const double X = grid.point(i)[0];
    cplx s = 0.0;
    for (int k = 0; k < n; ++k) s += smear(X - lam[f](k)) * diag[f](k);
    out[i] = s;
  });
  return out;
}

Matrix TomographicPair::dequantizer_sum(const LabelGrid& grid, const std::vector<cplx>& coeffs) const {
  FrameIndex fi = index_frames(grid);
  std::vector<cplx> per_frame(fi.frames.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i)
    per_frame[fi.of_point[i]] += coeffs[i] * std::polar(1.0, grid.point(i)[0]);
  const int n = space_.dim;
  std::vector<Matrix> terms(fi.frames.size());
  parallel_for(fi.frames.size(), [&](std::size_t f) {
    const auto [mu, nu] = fi.frames[f];
    if (mu == 0.0 && nu == 0.0) throw DegenerateFrame("tomographic frame (0, 0)");
    terms[f] = (per_frame[f] / (2.0 * kPi)) * displacement_exact_matrix(n, xi_of(mu, nu));
  });
  Matrix acc = Matrix::Zero(n, n);
  for (const auto& t : terms) acc += t;
  return acc;
}

SymbolField Tomogram::as_field() const {
  std::vector<cplx> v(values.begin(), values.end());
  return {grid, std::move(v)};
}

Tomogram tomogram_of_state(const Operator& rho, const TomographicPair& pair, const LabelGrid& grid) {
  if (!is_hermitian(rho, 1e-10)) throw DomainError("tomogram_of_state: operator is not Hermitian");
  SymbolField f = symbol_field(rho, pair, grid);
  Tomogram t;
  t.grid = grid;
  t.dim = rho.dim();
  t.delta_width = pair.delta_width();
  t.values.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) t.values[i] = f.values[i].real();
  t.max_imag_residue = f.max_imag();
  return t;
}

TomoKernelValue tomo_kernel(const std::vector<TomoPoint>& inputs, const TomoPoint& out) {
  if (inputs.empty()) throw DomainError("tomo_kernel: no inputs");
  check_output_frame(out.mu, out.nu);
  const int n = static_cast<int>(inputs.size());
  TomoKernelValue v;
  v.mu = out.mu;
  v.nu = out.nu;
  double anti = 0.0, sx = 0.0;
  for (int j = 0; j < n; ++j) {
    v.sum_mu += inputs[j].mu;
    v.sum_nu += inputs[j].nu;
    sx += inputs[j].X;
    for (int k = 0; k < j; ++k) anti += inputs[k].nu * inputs[j].mu - inputs[j].nu * inputs[k].mu;
  }
  const double r = std::sqrt(1.0 - 4.0 * out.mu * out.mu * out.nu * out.nu);
  const double lin = (1.0 - r) / out.nu * v.sum_nu + (1.0 + r) / out.mu * v.sum_mu;
  const double phase = 0.5 * (anti + 2.0 * sx - lin * out.X);
  v.amplitude = std::polar(std::pow(2.0 * kPi, -n), phase);
  return v;
}

std::vector<cplx> tomo_star_kernel(const std::vector<SymbolField>& inputs, const TomographicPair& pair,
                                   const std::vector<TomoPoint>& out, int mu_refine) {
  const int n = static_cast<int>(inputs.size());
  if (n < 2) throw DomainError("tomo_star_kernel: need at least two inputs");
  // X axes may differ between inputs; the (mu, nu) lattice must be shared
  for (const auto& f : inputs)
    if (!f.grid.is_rectangular() || f.grid.axes().size() != 3 || f.values.size() != f.grid.size())
      throw DomainError("tomo_star_kernel: inputs need a rectangular (X, mu, nu) grid");
  const Axis &am = inputs[0].grid.axes()[1], &an = inputs[0].grid.axes()[2];
  for (const auto& f : inputs) {
    const Axis &bm = f.grid.axes()[1], &bn = f.grid.axes()[2];
    if (bm.count != am.count || bn.count != an.count || bm.lo != am.lo || bm.hi != am.hi ||
        bn.lo != an.lo || bn.hi != an.hi)
      throw DimensionMismatch("tomo_star_kernel: inputs use different (mu, nu) lattices");
  }
  const int nm = am.count, nn = an.count;
  const std::vector<double> ms = am.nodes(), ns = an.nodes();
  const double hm = am.spacing(), hn = an.spacing();

  // chi_j(a, b) = sum_X w_j(X, mu_a, nu_b) e^{iX} dX, stored per mu row
  std::vector<std::vector<std::vector<cplx>>> chi(n, std::vector<std::vector<cplx>>(nm, std::vector<cplx>(nn)));
  for (int j = 0; j < n; ++j) {
    const Axis& ax = inputs[j].grid.axes()[0];
    const std::vector<double> xs = ax.nodes();
    for (int a = 0; a < nm; ++a)
      for (int b = 0; b < nn; ++b) {
        cplx s = 0.0;
        for (int x = 0; x < ax.count; ++x) {
          const std::size_t idx = (static_cast<std::size_t>(x) * nm + a) * nn + b;
          s += inputs[j].values[idx] * std::polar(1.0, xs[x]);
        }
        chi[j][a][b] = s * ax.spacing();
      }
  }

  const double w = pair.delta_width();
  const double pref = std::pow(2.0 * kPi, -n);
  // the last input's mu runs on a refined lattice, interpolated along mu;
  // the coarse lattice aliases the X dependence when |mu_out| is small
  const int r = std::max(1, mu_refine);
  const int nml = nm * r;
  const double hml = hm / r;
  std::vector<double> msl(nml);
  std::vector<std::vector<cplx>> last(nml, std::vector<cplx>(nn));
  {
    std::vector<cplx> col(nm);
    for (int i = 0; i < nml; ++i) msl[i] = am.lo + (i + 0.5) * hml;
    for (int b = 0; b < nn; ++b) {
      for (int a = 0; a < nm; ++a) col[a] = chi[n - 1][a][b];
      for (int i = 0; i < nml; ++i) last[i][b] = r == 1 ? col[i] : interp(col, am.lo, hm, msl[i]);
    }
  }
  const double meas = std::pow(hm * hn, n - 1) * hml;

  // outputs sharing a frame share every term; only e^{-i kappa X} differs
  std::map<std::pair<double, double>, std::vector<std::size_t>> groups;
  for (std::size_t o = 0; o < out.size(); ++o) {
    // on the constraint the square root cancels, so only mu = 0 is excluded here
    if (out[o].mu == 0.0) throw DegenerateFrame("tomographic star product at mu = 0");
    groups[{out[o].mu, out[o].nu}].push_back(o);
  }
  std::vector<const std::vector<std::size_t>*> glist;
  for (const auto& kv : groups) glist.push_back(&kv.second);

  std::vector<cplx> res(out.size());
  parallel_for(glist.size(), [&](std::size_t gi) {
    const std::vector<std::size_t>& idx = *glist[gi];
    const double mu = out[idx[0]].mu, nu = out[idx[0]].nu;
    std::vector<double> X(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) X[k] = out[idx[k]].X;
    bool uniform = X.size() > 2;
    for (std::size_t k = 2; uniform && k < X.size(); ++k)
      uniform = std::abs((X[k] - X[k - 1]) - (X[1] - X[0])) < 1e-12 * std::max(1.0, std::abs(X[1] - X[0]));
    std::vector<cplx> total(idx.size(), 0.0);
    auto add = [&](cplx coef, double kap) {
      if (uniform) {
        cplx z = coef * std::polar(1.0, -kap * X[0]);
        const cplx step = std::polar(1.0, -kap * (X[1] - X[0]));
        for (std::size_t k = 0; k < X.size(); ++k, z *= step) total[k] += z;
      } else {
        for (std::size_t k = 0; k < X.size(); ++k) total[k] += coef * std::polar(1.0, -kap * X[k]);
      }
    };
    // frames of inputs 1..n-1 enumerated on the grid, mu of the last on the grid
    std::vector<int> fa(n - 1, 0), fb(n - 1, 0);
    for (;;) {
      cplx c = 1.0;
      double smu = 0.0, snu = 0.0, anti = 0.0;
      for (int j = 0; j < n - 1; ++j) {
        const double mj = ms[fa[j]], nj = ns[fb[j]];
        for (int k = 0; k < j; ++k) anti += ns[fb[k]] * mj - nj * ms[fa[k]];
        smu += mj;
        snu += nj;
        c *= chi[j][fa[j]][fb[j]];
      }
      if (c != cplx(0.0)) {
        for (int a = 0; a < nml; ++a) {
          const double ml = msl[a];
          const double m_tot = smu + ml;
          const double nl = nu * m_tot / mu - snu;  // solves the delta
          const cplx cl = interp(last[a], an.lo, hn, nl);
          if (cl == cplx(0.0)) continue;
          double ph = anti;
          for (int k = 0; k < n - 1; ++k) ph += ns[fb[k]] * ml - nl * ms[fa[k]];
          const double kap = m_tot / mu;
          add(c * cl * std::polar(std::exp(-0.5 * w * w * kap * kap), 0.5 * ph), kap);
        }
      }
      int j = n - 2;
      while (j >= 0) {
        if (++fb[j] < nn) break;
        fb[j] = 0;
        if (++fa[j] < nm) break;
        fa[j] = 0;
        --j;
      }
      if (j < 0) break;
    }
    for (std::size_t k = 0; k < idx.size(); ++k) res[idx[k]] = pref * meas * total[k] / std::abs(mu);
  });
  return res;
}

Operator tomo_conjugate_momentum(const FockSpace& space, double mu, double nu) {
  check_output_frame(mu, nu);
  const double r = std::sqrt(1.0 - 4.0 * mu * mu * nu * nu);
  Ladder l = build_ladder(space);
  return (1.0 + r) / (2.0 * mu) * l.p - (1.0 - r) / (2.0 * nu) * l.q;
}

}  // namespace starprod
