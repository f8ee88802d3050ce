#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "starprod/map_framework.hpp"

namespace starprod {

// M[k][n][s] = M^{ns}_k, product C_k = sum_{n,s} A_n M^{ns}_k B_s
class StructureTensor {
 public:
  StructureTensor() = default;
  explicit StructureTensor(int n);

  int n() const { return n_; }
  cplx& at(int k, int n, int s) { return e_[index(k, n, s)]; }
  cplx at(int k, int n, int s) const { return e_[index(k, n, s)]; }
  const std::vector<cplx>& entries() const { return e_; }

 private:
  std::size_t index(int k, int n, int s) const {
    return (static_cast<std::size_t>(k) * n_ + n) * n_ + s;
  }
  int n_ = 0;
  std::vector<cplx> e_;
};

Vector tensor_product(const Vector& a, const Vector& b, const StructureTensor& m);

struct CheckResult {
  bool pass = false;
  double max_residual = 0.0;
};

// sum_m M^{nm}_l M^{sk}_m - sum_m M^{ns}_m M^{mk}_l over all index tuples
CheckResult assoc_check(const StructureTensor& m, double tol = 1e-12);

struct LieCheckResult {
  bool pass = false;
  double max_residual = 0.0;
  bool antisymmetric = false;
  double antisymmetry_residual = 0.0;
};

// C[m][s][k] = C_{sk}^{(m)}; cyclic Jacobi sum
LieCheckResult lie_jacobi_check(const StructureTensor& c, double tol = 1e-12);

// C[k][n][s] = M[k][n][s] - M[k][s][n]
StructureTensor commutator_constants(const StructureTensor& m);

// Row-major vectorization of a square matrix, entry (i, j) -> i * d + j
Vector vectorize(const Matrix& a);
Matrix unvectorize(const Vector& v);

// Built-ins: "matrix-mult[:d]", "appendix1-family1", "akb" (with k), "su2"
StructureTensor matrix_mult_tensor(int d = 2);
StructureTensor appendix_family1();
StructureTensor akb_tensor(const Matrix& k);
StructureTensor su2_constants();
// name[:arg]; akb takes its k from k_for_akb
StructureTensor builtin_tensor(const std::string& name, const Matrix& k_for_akb = Matrix::Identity(2, 2));

// Discretized kernel K(x, y, z) over a weighted grid; x is the output label.
// The product is (f1 * f2)(x) = sum_{y,z} w_y w_z f1(y) f2(z) K(x, y, z).
struct KernelSample {
  std::vector<double> weights;
  std::vector<cplx> values;  // (x * G + y) * G + z

  std::size_t size() const { return weights.size(); }
  cplx operator()(std::size_t x, std::size_t y, std::size_t z) const {
    const std::size_t g = weights.size();
    return values[(x * g + y) * g + z];
  }
};

struct KernelCheckOptions {
  double tol = 1e-12;        // relative to max|K|^2 sum_z w_z
  double budget = 1e8;       // G^5 multiply-adds
  bool subsample = false;    // on budget overflow, sample tuples instead of throwing
  std::size_t samples = 100000;
  std::uint64_t seed = 2024;
};

struct KernelCheckResult {
  bool pass = false;
  double max_residual = 0.0;
  double scale = 0.0;
  bool subsampled = false;
  std::size_t tuples = 0;
  std::uint64_t seed = 0;
};

// sum_z w_z K(x,y,z) K(z,l,t) = sum_z w_z K(x,z,t) K(z,y,l) for all (x,y,l,t)
KernelCheckResult kernel_assoc_check(const KernelSample& k, const KernelCheckOptions& opts = {});

// K(x,y,z) = delta_xy delta_xz / w_x^2 reproduces the pointwise product
KernelSample kronecker_kernel(const std::vector<double>& weights);
// labels (i, j) of d x d matrices flattened as i * d + j, unit weights
KernelSample matrix_kernel(int d);

// sup |(g1 * g2) * g3 - g1 * (g2 * g3)| for Gaussian symbols under the Moyal
// kernel on an n x n square grid of half-width radius (Weyl units)
double moyal_weak_assoc_residual(double radius, int n);

}  // namespace starprod
