#include <gtest/gtest.h>

#include "starprod/assoc.hpp"
#include "support.hpp"

using namespace starprod;
using oracle::cplx;

namespace {

Vector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

// c_k = sum_{n,s} a_n M[k][n][s] b_s by explicit loops
Vector apply(const StructureTensor& m, const Vector& a, const Vector& b) {
  Vector c = Vector::Zero(m.n());
  for (int k = 0; k < m.n(); ++k)
    for (int n = 0; n < m.n(); ++n)
      for (int s = 0; s < m.n(); ++s) c(k) += a(n) * m.at(k, n, s) * b(s);
  return c;
}

// worst |(ab)c - a(bc)| over random triples
double triple_defect(const StructureTensor& m, std::mt19937_64& rng, int trials = 10) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Vector a = random_vector(m.n(), rng), b = random_vector(m.n(), rng), c = random_vector(m.n(), rng);
    worst = std::max(worst, (apply(m, apply(m, a, b), c) - apply(m, a, apply(m, b, c))).cwiseAbs().maxCoeff());
  }
  return worst;
}

Matrix random_k(std::mt19937_64& rng) { return oracle::random_matrix(2, rng); }

}  // namespace

TEST(StructureTensor, ProductMatchesLoops) {
  std::mt19937_64 rng(40);
  StructureTensor m(3);
  for (int k = 0; k < 3; ++k)
    for (int n = 0; n < 3; ++n)
      for (int s = 0; s < 3; ++s) m.at(k, n, s) = cplx(k - n, s);
  const Vector a = random_vector(3, rng), b = random_vector(3, rng);
  EXPECT_LT((tensor_product(a, b, m) - apply(m, a, b)).norm(), 1e-13);
  EXPECT_THROW(tensor_product(Vector::Zero(2), b, m), DimensionMismatch);
}

TEST(StructureTensor, Vectorization) {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  const Vector v = vectorize(a);
  EXPECT_EQ(v(1), cplx(2.0));
  EXPECT_EQ(v(2), cplx(3.0));
  EXPECT_EQ((unvectorize(v) - a).norm(), 0.0);
  EXPECT_THROW(unvectorize(Vector::Zero(3)), DimensionMismatch);
}

TEST(StructureTensor, MatrixMultIsMatrixProduct) {
  std::mt19937_64 rng(41);
  for (int d : {2, 3}) {
    const Matrix a = oracle::random_matrix(d, rng), b = oracle::random_matrix(d, rng);
    EXPECT_LT((unvectorize(tensor_product(vectorize(a), vectorize(b), matrix_mult_tensor(d))) - a * b).norm(), 1e-13);
    const CheckResult r = assoc_check(matrix_mult_tensor(d));
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.max_residual, 0.0);
  }
}

TEST(AppendixFamily, PrintedRule) {
  // a.b = [[a11 b11, a12 b12], [a21 b21, a11 b22 + a22 b21]]
  std::mt19937_64 rng(42);
  const StructureTensor m = appendix_family1();
  for (int t = 0; t < 5; ++t) {
    const Matrix a = oracle::random_matrix(2, rng), b = oracle::random_matrix(2, rng);
    Matrix expect(2, 2);
    expect << a(0, 0) * b(0, 0), a(0, 1) * b(0, 1), a(1, 0) * b(1, 0), a(0, 0) * b(1, 1) + a(1, 1) * b(1, 0);
    EXPECT_LT((unvectorize(tensor_product(vectorize(a), vectorize(b), m)) - expect).norm(), 1e-14);
  }
  const Matrix id = Matrix::Identity(2, 2);
  EXPECT_LT((unvectorize(tensor_product(vectorize(id), vectorize(id), m)) - id).norm(), 0.0 + 1e-300);
}

TEST(AppendixFamily, Associative) {
  std::mt19937_64 rng(43);
  const CheckResult r = assoc_check(appendix_family1());
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_residual, 1e-12);
  EXPECT_LT(triple_defect(appendix_family1(), rng), 1e-12);
}

TEST(AkbFamily, IdentityGivesMatrixProduct) {
  std::mt19937_64 rng(44);
  const StructureTensor m = akb_tensor(Matrix::Identity(2, 2));
  const Matrix a = oracle::random_matrix(2, rng), b = oracle::random_matrix(2, rng);
  EXPECT_LT((unvectorize(tensor_product(vectorize(a), vectorize(b), m)) - a * b).norm(), 1e-14);
}

TEST(AkbFamily, InsertsK) {
  // the product is a k b
  std::mt19937_64 rng(45);
  const Matrix k = random_k(rng);
  const Matrix a = oracle::random_matrix(2, rng), b = oracle::random_matrix(2, rng);
  EXPECT_LT((unvectorize(tensor_product(vectorize(a), vectorize(b), akb_tensor(k))) - a * k * b).norm(), 1e-13);
}

TEST(AkbFamily, RandomKAssociative) {
  std::mt19937_64 rng(46);
  for (int t = 0; t < 10; ++t) {
    const StructureTensor m = akb_tensor(random_k(rng));
    const CheckResult r = assoc_check(m);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.max_residual, 1e-12);
    EXPECT_LT(triple_defect(m, rng), 1e-12);
  }
  EXPECT_THROW(akb_tensor(Matrix::Identity(3, 3)), DimensionMismatch);
}

TEST(AkbFamily, PerturbedFails) {
  std::mt19937_64 rng(47);
  StructureTensor m = akb_tensor(random_k(rng));
  m.at(1, 2, 3) += 0.1;
  const CheckResult r = assoc_check(m);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_residual, 1e-3);
  EXPECT_GT(triple_defect(m, rng), 1e-3);
}

TEST(LieCheck, Su2Passes) {
  const LieCheckResult r = lie_jacobi_check(su2_constants());
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.antisymmetric);
  EXPECT_EQ(r.max_residual, 0.0);
  const StructureTensor c = su2_constants();
  EXPECT_EQ(c.at(2, 0, 1), cplx(1.0));
  EXPECT_EQ(c.at(2, 1, 0), cplx(-1.0));
  EXPECT_EQ(c.at(0, 0, 0), cplx(0.0));
}

TEST(LieCheck, CommutatorOfAssociativeIsLie) {
  std::mt19937_64 rng(48);
  for (int t = 0; t < 5; ++t) {
    const LieCheckResult r = lie_jacobi_check(commutator_constants(akb_tensor(random_k(rng))));
    EXPECT_TRUE(r.pass) << r.max_residual;
    EXPECT_TRUE(r.antisymmetric);
  }
  const LieCheckResult f = lie_jacobi_check(commutator_constants(appendix_family1()));
  EXPECT_TRUE(f.pass);
}

TEST(LieCheck, NonAntisymmetricFlagged) {
  StructureTensor c = su2_constants();
  c.at(0, 1, 1) = 0.5;
  const LieCheckResult r = lie_jacobi_check(c);
  EXPECT_FALSE(r.antisymmetric);
  EXPECT_GT(r.antisymmetry_residual, 0.1);
}

TEST(Commutative, SymmetricTensorCommutes) {
  std::mt19937_64 rng(49);
  StructureTensor m(3);
  std::normal_distribution<double> g;
  for (int k = 0; k < 3; ++k)
    for (int n = 0; n < 3; ++n)
      for (int s = 0; s <= n; ++s) m.at(k, n, s) = m.at(k, s, n) = g(rng);
  const Vector a = random_vector(3, rng), b = random_vector(3, rng);
  EXPECT_LT((tensor_product(a, b, m) - tensor_product(b, a, m)).norm(), 1e-13);
  const StructureTensor c = commutator_constants(m);
  for (cplx v : c.entries()) EXPECT_EQ(v, cplx(0.0));
}

TEST(Builtins, ByName) {
  EXPECT_EQ(builtin_tensor("matrix-mult:3").n(), 9);
  EXPECT_EQ(builtin_tensor("appendix1-family1").entries(), appendix_family1().entries());
  EXPECT_EQ(builtin_tensor("su2").n(), 3);
  EXPECT_EQ(builtin_tensor("akb").entries(), akb_tensor(Matrix::Identity(2, 2)).entries());
  EXPECT_THROW(builtin_tensor("nope"), ValidationError);
  EXPECT_THROW(builtin_tensor("matrix-mult:x"), ValidationError);
  EXPECT_THROW(builtin_tensor("matrix-mult:0"), ValidationError);
}

TEST(KernelAssoc, KroneckerExact) {
  std::vector<double> w;
  for (int i = 0; i < 12; ++i) w.push_back(0.1 + 0.05 * i);
  const KernelCheckResult r = kernel_assoc_check(kronecker_kernel(w));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_residual, 0.0);
  EXPECT_EQ(r.tuples, 12u * 12 * 12 * 12);
  EXPECT_THROW(kronecker_kernel({1.0, 0.0}), DomainError);
}

TEST(KernelAssoc, KroneckerReproducesPointwise) {
  const std::vector<double> w{0.5, 0.25, 2.0};
  const KernelSample k = kronecker_kernel(w);
  const std::vector<cplx> f1{1.0, 2.0, cplx(0, 1)}, f2{3.0, -1.0, 4.0};
  for (std::size_t x = 0; x < 3; ++x) {
    cplx v = 0.0;
    for (std::size_t y = 0; y < 3; ++y)
      for (std::size_t z = 0; z < 3; ++z) v += w[y] * w[z] * f1[y] * f2[z] * k(x, y, z);
    EXPECT_NEAR(std::abs(v - f1[x] * f2[x]), 0.0, 1e-14);
  }
}

TEST(KernelAssoc, MatrixKernelExact) {
  const KernelCheckResult r = kernel_assoc_check(matrix_kernel(3));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_residual, 0.0);
}

TEST(KernelAssoc, NonAssociativeKernelFails) {
  KernelSample k = matrix_kernel(2);
  k.values[5] += 0.3;
  const KernelCheckResult r = kernel_assoc_check(k);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_residual, 0.01);
}

TEST(KernelAssoc, BudgetAndSubsample) {
  const KernelSample k = kronecker_kernel(std::vector<double>(30, 0.2));
  KernelCheckOptions o;
  o.budget = 1e6;
  EXPECT_THROW(kernel_assoc_check(k, o), ResourceError);
  o.subsample = true;
  o.samples = 5000;
  const KernelCheckResult r = kernel_assoc_check(k, o);
  EXPECT_TRUE(r.subsampled);
  EXPECT_EQ(r.tuples, 5000u);
  EXPECT_EQ(r.seed, o.seed);
  EXPECT_TRUE(r.pass);
  KernelSample bad = k;
  bad.values.pop_back();
  EXPECT_THROW(kernel_assoc_check(bad), DimensionMismatch);
}

TEST(KernelAssoc, MoyalWeakFormConverges) {
  // coarse grids alias; the residual falls to roundoff once the Gaussians are resolved
  const double coarse = moyal_weak_assoc_residual(6.0, 32);
  const double fine = moyal_weak_assoc_residual(6.0, 48);
  EXPECT_LT(fine, 1e-3);
  EXPECT_LT(fine, coarse);
}
