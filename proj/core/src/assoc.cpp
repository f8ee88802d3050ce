#include "starprod/assoc.hpp"

#include <cmath>
#include <random>

#include "starprod/parallel.hpp"
#include "starprod/phase_space.hpp"

namespace starprod {

StructureTensor::StructureTensor(int n) : n_(n) {
  if (n < 1) throw DomainError("StructureTensor: n must be positive");
  e_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
}

Vector tensor_product(const Vector& a, const Vector& b, const StructureTensor& m) {
  const int n = m.n();
  if (a.size() != n || b.size() != n)
    throw DimensionMismatch("tensor_product: vectors must have length " + std::to_string(n));
  Vector c = Vector::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < n; ++s) c(k) += a(i) * m.at(k, i, s) * b(s);
  return c;
}

CheckResult assoc_check(const StructureTensor& m, double tol) {
  const int n = m.n();
  std::vector<double> row(n, 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t nn) {
    const int a = static_cast<int>(nn);
    double worst = 0.0;
    for (int s = 0; s < n; ++s)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx lhs = 0.0, rhs = 0.0;
          for (int j = 0; j < n; ++j) {
            lhs += m.at(l, a, j) * m.at(j, s, k);
            rhs += m.at(j, a, s) * m.at(l, j, k);
          }
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    row[nn] = worst;
  });
  CheckResult r;
  for (double v : row) r.max_residual = std::max(r.max_residual, v);
  r.pass = r.max_residual < tol;
  return r;
}

LieCheckResult lie_jacobi_check(const StructureTensor& c, double tol) {
  const int n = c.n();
  LieCheckResult r;
  for (int m = 0; m < n; ++m)
    for (int s = 0; s < n; ++s)
      for (int k = 0; k < n; ++k)
        r.antisymmetry_residual = std::max(r.antisymmetry_residual, std::abs(c.at(m, s, k) + c.at(m, k, s)));
  r.antisymmetric = r.antisymmetry_residual < tol;
  for (int s = 0; s < n; ++s)
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        for (int l = 0; l < n; ++l) {
          cplx sum = 0.0;
          for (int m = 0; m < n; ++m)
            sum += c.at(m, s, k) * c.at(l, a, m) + c.at(m, k, a) * c.at(l, s, m) + c.at(m, a, s) * c.at(l, k, m);
          r.max_residual = std::max(r.max_residual, std::abs(sum));
        }
  r.pass = r.max_residual < tol;
  return r;
}

StructureTensor commutator_constants(const StructureTensor& m) {
  const int n = m.n();
  StructureTensor c(n);
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int s = 0; s < n; ++s) c.at(k, a, s) = m.at(k, a, s) - m.at(k, s, a);
  return c;
}

Vector vectorize(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("vectorize: matrix must be square");
  const int d = static_cast<int>(a.rows());
  Vector v(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(i * d + j) = a(i, j);
  return v;
}

Matrix unvectorize(const Vector& v) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw DimensionMismatch("unvectorize: length is not a square");
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = v(i * d + j);
  return a;
}

StructureTensor matrix_mult_tensor(int d) {
  StructureTensor m(d * d);
  // (ab)_{ij} = sum_r a_{ir} b_{rj}
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < d; ++r) m.at(i * d + j, i * d + r, r * d + j) = 1.0;
  return m;
}

StructureTensor appendix_family1() {
  StructureTensor m(4);
  // entered as printed, M_k rows n, columns s, 1-based
  auto set = [&](int k, int n, int s) { m.at(k - 1, n - 1, s - 1) = 1.0; };
  set(1, 1, 1);
  set(2, 2, 2);
  set(3, 3, 3);
  set(4, 1, 4);
  set(4, 4, 3);
  return m;
}

StructureTensor akb_tensor(const Matrix& k) {
  if (k.rows() != 2 || k.cols() != 2) throw DimensionMismatch("akb_tensor: k must be 2x2");
  StructureTensor m(4);
  // printed 4x4 blocks, 1-based (k, row, column)
  auto put = [&](int kk, int n, int s, cplx v) { m.at(kk - 1, n - 1, s - 1) = v; };
  const cplx k11 = k(0, 0), k12 = k(0, 1), k21 = k(1, 0), k22 = k(1, 1);
  put(1, 1, 1, k11); put(1, 1, 3, k12); put(1, 2, 1, k21); put(1, 2, 3, k22);
  put(2, 1, 2, k11); put(2, 1, 4, k12); put(2, 2, 2, k21); put(2, 2, 4, k22);
  put(3, 3, 1, k11); put(3, 3, 3, k12); put(3, 4, 1, k21); put(3, 4, 3, k22);
  put(4, 3, 2, k11); put(4, 3, 4, k12); put(4, 4, 2, k21); put(4, 4, 4, k22);
  return m;
}

StructureTensor su2_constants() {
  StructureTensor c(3);
  // [e_s, e_k] = eps_{skm} e_m
  for (int s = 0; s < 3; ++s)
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m) {
        const int e = (s - k) * (k - m) * (m - s) / 2;
        c.at(m, s, k) = static_cast<double>(e);
      }
  return c;
}

StructureTensor builtin_tensor(const std::string& spec, const Matrix& k_for_akb) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  if (name == "matrix-mult") {
    int d = 2;
    if (colon != std::string::npos) {
      try {
        d = std::stoi(spec.substr(colon + 1));
      } catch (const std::exception&) {
        throw ValidationError("matrix-mult: bad dimension in '" + spec + "'");
      }
    }
    if (d < 1 || d > 16) throw ValidationError("matrix-mult: dimension must be in 1..16");
    return matrix_mult_tensor(d);
  }
  if (name == "appendix1-family1") return appendix_family1();
  if (name == "akb") return akb_tensor(k_for_akb);
  if (name == "su2") return su2_constants();
  throw ValidationError("unknown built-in tensor '" + spec + "'");
}

KernelCheckResult kernel_assoc_check(const KernelSample& k, const KernelCheckOptions& opts) {
  const std::size_t g = k.size();
  if (k.values.size() != g * g * g) throw DimensionMismatch("kernel_assoc_check: values must have G^3 entries");
  double kmax = 0.0, wsum = 0.0;
  for (const auto& v : k.values) kmax = std::max(kmax, std::abs(v));
  for (double w : k.weights) wsum += std::abs(w);

  KernelCheckResult r;
  r.scale = std::max(1.0, kmax * kmax * wsum);
  r.seed = opts.seed;
  auto residual = [&](std::size_t x, std::size_t y, std::size_t l, std::size_t t) {
    cplx lhs = 0.0, rhs = 0.0;
    for (std::size_t z = 0; z < g; ++z) {
      lhs += k.weights[z] * k(x, y, z) * k(z, l, t);
      rhs += k.weights[z] * k(x, z, t) * k(z, y, l);
    }
    return std::abs(lhs - rhs);
  };

  const double work = std::pow(static_cast<double>(g), 5);
  if (work <= opts.budget) {
    std::vector<double> worst(g, 0.0);
    parallel_for(g, [&](std::size_t x) {
      double w = 0.0;
      for (std::size_t y = 0; y < g; ++y)
        for (std::size_t l = 0; l < g; ++l)
          for (std::size_t t = 0; t < g; ++t) w = std::max(w, residual(x, y, l, t));
      worst[x] = w;
    });
    for (double v : worst) r.max_residual = std::max(r.max_residual, v);
    r.tuples = g * g * g * g;
  } else {
    if (!opts.subsample)
      throw ResourceError("kernel_assoc_check: G^5 = " + std::to_string(work) + " exceeds budget " +
                          std::to_string(opts.budget) + "; enable subsampling");
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, g - 1);
    for (std::size_t i = 0; i < opts.samples; ++i) {
      const std::size_t x = pick(rng), y = pick(rng), l = pick(rng), t = pick(rng);
      r.max_residual = std::max(r.max_residual, residual(x, y, l, t));
    }
    r.subsampled = true;
    r.tuples = opts.samples;
  }
  r.pass = r.max_residual < opts.tol * r.scale;
  return r;
}

KernelSample kronecker_kernel(const std::vector<double>& weights) {
  KernelSample k;
  k.weights = weights;
  const std::size_t g = weights.size();
  k.values.assign(g * g * g, 0.0);
  for (std::size_t x = 0; x < g; ++x) {
    if (weights[x] == 0.0) throw DomainError("kronecker_kernel: zero weight");
    k.values[(x * g + x) * g + x] = 1.0 / (weights[x] * weights[x]);
  }
  return k;
}

KernelSample matrix_kernel(int d) {
  if (d < 1) throw DomainError("matrix_kernel: d must be positive");
  const std::size_t g = static_cast<std::size_t>(d) * d;
  KernelSample k;
  k.weights.assign(g, 1.0);
  k.values.assign(g * g * g, 0.0);
  // (ab)_{ij} = sum_r a_{ir} b_{rj}
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < d; ++r) {
        const std::size_t x = i * d + j, y = i * d + r, z = r * d + j;
        k.values[(x * g + y) * g + z] = 1.0;
      }
  return k;
}

double moyal_weak_assoc_residual(double radius, int n) {
  WeylPair pair(FockSpace(2));
  LabelGrid grid = LabelGrid::square(radius, n);
  auto gauss = [&](double cq, double cp, double width) {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double dq = grid.point(i)[0] - cq, dp = grid.point(i)[1] - cp;
      v[i] = std::exp(-(dq * dq + dp * dp) / (2.0 * width * width));
    }
    return SymbolField{grid, std::move(v)};
  };
  const SymbolField g1 = gauss(0.3, -0.2, 1.0), g2 = gauss(-0.4, 0.1, 0.9), g3 = gauss(0.1, 0.5, 1.1);
  const SymbolField left = pair.kernel_star(pair.kernel_star(g1, g2, grid), g3, grid);
  const SymbolField right = pair.kernel_star(g1, pair.kernel_star(g2, g3, grid), grid);
  return sup_distance(left, right);
}

}  // namespace starprod
