#include <gtest/gtest.h>

#include "starprod/deformed.hpp"
#include "starprod/phase_space.hpp"
#include "support.hpp"

using namespace starprod;
using oracle::cplx;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// e^{lambda K} by its Taylor series
Matrix exp_series(const Matrix& k, double lambda) {
  Matrix term = Matrix::Identity(k.rows(), k.cols()), sum = term;
  for (int n = 1; n < 80; ++n) {
    term = term * k * (lambda / n);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST(Deformation, ExponentMatchesSeries) {
  std::mt19937_64 rng(30);
  const Matrix k = oracle::random_hermitian(5, rng);
  const DeformationContext ctx(oracle::op(k), 0.3);
  EXPECT_LT(max_abs(ctx.e_lambda_k().matrix() - exp_series(k, 0.3)), 1e-12);
  EXPECT_THROW(DeformationContext(oracle::op(k), std::nan("")), DomainError);
}

TEST(Deformation, LambdaZeroIsPlainProduct) {
  std::mt19937_64 rng(31);
  const Operator a = oracle::op(oracle::random_matrix(6, rng));
  const Operator b = oracle::op(oracle::random_matrix(6, rng));
  const DeformationContext ctx(oracle::op(oracle::random_hermitian(6, rng)), 0.0);
  EXPECT_EQ((k_product(a, b, ctx).matrix() - (a * b).matrix()).norm(), 0.0);
  EXPECT_EQ((k_commutator(a, b, ctx).matrix() - commutator(a, b).matrix()).norm(), 0.0);
}

TEST(Deformation, IdentityGeneratorScales) {
  // k = 1 gives e^lambda A B
  std::mt19937_64 rng(32);
  const Operator a = oracle::op(oracle::random_matrix(5, rng));
  const Operator b = oracle::op(oracle::random_matrix(5, rng));
  const DeformationContext ctx(Operator::identity(FockSpace(5)), 0.7);
  EXPECT_LT(max_abs(k_product(a, b, ctx).matrix() - std::exp(0.7) * (a * b).matrix()), 1e-12);
}

TEST(Deformation, KProductAssociative) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 20; ++t) {
    const Operator a = oracle::op(oracle::random_matrix(6, rng));
    const Operator b = oracle::op(oracle::random_matrix(6, rng));
    const Operator c = oracle::op(oracle::random_matrix(6, rng));
    const DeformationContext ctx(oracle::op(0.3 * oracle::random_hermitian(6, rng)), 0.5);
    const Matrix l = k_product(k_product(a, b, ctx), c, ctx).matrix();
    const Matrix r = k_product(a, k_product(b, c, ctx), ctx).matrix();
    EXPECT_LT(max_abs(l - r), 1e-11 * std::max(1.0, max_abs(l)));
  }
}

TEST(Deformation, DeformedJacobi) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 10; ++t) {
    const Operator a = oracle::op(oracle::random_hermitian(6, rng));
    const Operator b = oracle::op(oracle::random_hermitian(6, rng));
    const Operator c = oracle::op(oracle::random_hermitian(6, rng));
    const DeformationContext ctx(oracle::op(0.3 * oracle::random_hermitian(6, rng)), 0.4);
    auto br = [&](const Operator& x, const Operator& y) { return k_commutator(x, y, ctx); };
    const Matrix j = (br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).matrix();
    EXPECT_LT(max_abs(j), 1e-9);
  }
}

TEST(Deformation, KStarMatchesKProduct) {
  // with the matrix pair symbols are matrix entries
  std::mt19937_64 rng(35);
  const FockSpace s(5);
  const MatrixMechanicsPair mp{s};
  const Operator a = oracle::op(oracle::random_matrix(5, rng));
  const Operator b = oracle::op(oracle::random_matrix(5, rng));
  const DeformationContext ctx(oracle::op(oracle::random_hermitian(5, rng)), 0.3);
  const LabelGrid g = mp.default_grid();
  const SymbolField f = k_star(a, b, mp, ctx, g);
  const Matrix expect = a.matrix() * exp_series(ctx.k_op().matrix(), 0.3) * b.matrix();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int r = static_cast<int>(g.point(i)[0]), c = static_cast<int>(g.point(i)[1]);
    EXPECT_NEAR(std::abs(f.values[i] - expect(r, c)), 0.0, 1e-11);
  }
}

TEST(Deformation, FactorizesThroughPlainStar) {
  std::mt19937_64 rng(36);
  const FockSpace s(6);
  const MatrixMechanicsPair mp{s};
  const LabelGrid g = mp.default_grid();
  const DeformationContext ctx(oracle::op(oracle::random_hermitian(6, rng)), -0.4);
  const SymbolField fa = symbol_field(oracle::op(oracle::random_matrix(6, rng)), mp, g);
  const SymbolField fb = symbol_field(oracle::op(oracle::random_matrix(6, rng)), mp, g);
  const SymbolField direct = k_star(fa, fb, mp, ctx);
  EXPECT_LT(sup_distance(direct, k_star_factorized(fa, fb, mp, ctx, false)), 1e-10);
  EXPECT_LT(sup_distance(direct, k_star_factorized(fa, fb, mp, ctx, true)), 1e-10);
}

TEST(Deformation, FactorizesOnWeylSymbols) {
  // operator route on a Weyl grid; reconstruction error cancels between the routes
  const FockSpace s(12);
  const WeylPair weyl(s);
  const Ladder l = build_ladder(s);
  const DeformationContext ctx(number_operator(s), 0.2);
  const LabelGrid g = LabelGrid::square(2.0, 6);
  const Operator a = l.q, b = l.a;
  const SymbolField direct = k_star(a, b, weyl, ctx, g, TraceMode::Truncated);
  const SymbolField via = symbol_field(a * ctx.e_lambda_k() * b, weyl, g, TraceMode::Truncated);
  EXPECT_LT(sup_distance(direct, via), 1e-12);
}

TEST(Deformation, SmallLambdaSlope) {
  // d/dlambda Tr[A e^{lambda K} B U] at 0 is Tr[A K B U]
  std::mt19937_64 rng(37);
  const FockSpace s(5);
  const MatrixMechanicsPair mp{s};
  const LabelGrid g = mp.default_grid();
  const Operator a = oracle::op(oracle::random_matrix(5, rng));
  const Operator b = oracle::op(oracle::random_matrix(5, rng));
  const Operator k = oracle::op(oracle::random_hermitian(5, rng));
  const double h = 1e-5;
  const SymbolField up = k_star(a, b, mp, DeformationContext(k, h), g);
  const SymbolField dn = k_star(a, b, mp, DeformationContext(k, -h), g);
  const SymbolField slope = symbol_field(a * k * b, mp, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_NEAR(std::abs((up.values[i] - dn.values[i]) / (2 * h) - slope.values[i]), 0.0, 1e-7);
}

TEST(Deformation, PoissonAntisymmetric) {
  std::mt19937_64 rng(38);
  const FockSpace s(5);
  const MatrixMechanicsPair mp{s};
  const LabelGrid g = mp.default_grid();
  const Operator a = oracle::op(oracle::random_matrix(5, rng));
  const Operator b = oracle::op(oracle::random_matrix(5, rng));
  const DeformationContext ctx(oracle::op(oracle::random_hermitian(5, rng)), 0.3);
  EXPECT_LT(sup_distance(k_poisson(a, b, mp, ctx, g) + k_poisson(b, a, mp, ctx, g),
                         SymbolField(g, std::vector<cplx>(g.size(), 0.0))), 1e-13);
  const SymbolField fa = symbol_field(a, mp, g), fb = symbol_field(b, mp, g);
  EXPECT_LT(sup_distance(k_poisson(fa, fb, mp, ctx), k_poisson(a, b, mp, ctx, g)), 1e-12);
}

TEST(Deformation, EvolutionCommutingGenerator) {
  // k = H = N: each matrix element rotates at its own deformed frequency
  const FockSpace s(10);
  const Ladder l = build_ladder(s);
  const Operator n = number_operator(s);
  const DeformationContext ctx(n, 0.1);
  const MatrixMechanicsPair mp{s};
  const LabelGrid g = mp.default_grid();
  const EvolutionResult r = k_evolve(l.q, n, ctx, mp, g, 1.0, 1e-3);
  ASSERT_EQ(r.exact_fields.size(), r.fields.size());
  EXPECT_LT(r.max_deviation, 1e-9);
  // <m|q(t)|m+1> = <m|q|m+1> exp(i t (m e^{0.1 m} - (m+1) e^{0.1 (m+1)}))
  Matrix qt = Matrix::Zero(10, 10);
  for (std::size_t i = 0; i < g.size(); ++i)
    qt(static_cast<int>(g.point(i)[0]), static_cast<int>(g.point(i)[1])) = r.fields.back().values[i];
  for (int m = 0; m + 1 < 10; ++m) {
    const double w = m * std::exp(0.1 * m) - (m + 1) * std::exp(0.1 * (m + 1));
    EXPECT_NEAR(std::abs(qt(m, m + 1) - l.q(m, m + 1) * std::polar(1.0, w)), 0.0, 1e-9);
  }
}

TEST(Deformation, EvolutionNonCommutingHasNoExact) {
  const FockSpace s(6);
  const Ladder l = build_ladder(s);
  const DeformationContext ctx(l.q, 0.1);
  const MatrixMechanicsPair mp{s};
  const EvolutionResult r = k_evolve(l.p, number_operator(s), ctx, mp, mp.default_grid(), 0.1, 1e-2);
  EXPECT_TRUE(r.exact_fields.empty());
  EXPECT_EQ(r.fields.size(), 2u);
  EXPECT_THROW(k_evolve(l.p, number_operator(s), ctx, mp, mp.default_grid(), 0.1, 0.0), DomainError);
}
