#include <gtest/gtest.h>

#include "starprod/map_framework.hpp"
#include "starprod/phase_space.hpp"
#include "starprod/tomography.hpp"
#include "support.hpp"

using namespace starprod;
using oracle::cplx;
using oracle::kPi;

namespace {

// Wigner function of |a0><a0| with U = 2 D(a) P D(-a): 2 exp(-(q-q0)^2 - (p-p0)^2)
double coherent_wigner(double q, double p, double q0, double p0) {
  return 2.0 * std::exp(-(q - q0) * (q - q0) - (p - p0) * (p - p0));
}

Operator coherent(int dim, cplx a) { return make_state(FockSpace(dim), StateSpec::coherent(a)); }

}  // namespace

TEST(LabelGrid, Invariants) {
  EXPECT_THROW(LabelGrid(2, {{0.0, 0.0}}, {}), DimensionMismatch);
  EXPECT_THROW(LabelGrid(2, {{0.0, 0.0}}, {-1.0}), DomainError);
  EXPECT_THROW(LabelGrid(2, {}, {}), DomainError);
  const LabelGrid g = LabelGrid::square(2.0, 8);
  EXPECT_EQ(g.size(), 64u);
  double w = 0.0;
  for (double x : g.weights()) w += x;
  EXPECT_NEAR(w, 16.0, 1e-12);
  EXPECT_TRUE(g.is_rectangular());
}

TEST(SymbolField, LengthMustMatch) {
  EXPECT_THROW(SymbolField(LabelGrid::square(1.0, 2), std::vector<cplx>(3)), DimensionMismatch);
}

TEST(Symbols, IdentityIsOneForNormalizedPairs) {
  // the default grid reaches |alpha| ~ 4 (Weyl radius 6), so the space must hold n ~ 60
  const FockSpace s(96);
  WeylPair weyl(s, 6.0, 16);
  SOrderedPair sord(s, SOrder(-0.4), 6.0, 16);
  SOrderedPair spos(s, SOrder(0.3), 6.0, 16);
  for (const QuantizerPair* p : {static_cast<const QuantizerPair*>(&weyl), static_cast<const QuantizerPair*>(&sord),
                                 static_cast<const QuantizerPair*>(&spos)}) {
    ASSERT_TRUE(p->normalized());
    const SymbolField f = symbol_field(Operator::identity(s), *p, p->default_grid());
    for (const cplx v : f.values) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-8) << p->name();
  }
}

TEST(Symbols, WeylSymbolOfPositionIsCoordinate) {
  const FockSpace s(48);
  WeylPair weyl(s);
  const LabelGrid g = LabelGrid::square(2.5, 9);
  const Ladder l = build_ladder(s);
  const SymbolField fq = symbol_field(l.q, weyl, g);
  const SymbolField fp = symbol_field(l.p, weyl, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(std::abs(fq.values[i] - g.point(i)[0]), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(fp.values[i] - g.point(i)[1]), 0.0, 1e-6);
  }
  const SymbolField z = symbol_field(Operator::zero(s), weyl, g);
  EXPECT_EQ(z.sup_norm(), 0.0);
}

TEST(Symbols, SpaceMismatchRejected) {
  WeylPair weyl(FockSpace(8));
  EXPECT_THROW(symbol_field(Operator::identity(FockSpace(9)), weyl, LabelGrid::square(1.0, 2)), DimensionMismatch);
}

TEST(Reconstruct, ConstantOneGivesIdentity) {
  const FockSpace s(12);
  WeylPair weyl(s);
  const LabelGrid g = LabelGrid::square(8.0, 96);
  const SymbolField one(g, std::vector<cplx>(g.size(), 1.0));
  const Matrix id = reconstruct(one, weyl).matrix();
  EXPECT_LT((id - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff(), 2e-2);
  const SymbolField zero(g, std::vector<cplx>(g.size(), 0.0));
  EXPECT_EQ(reconstruct(zero, weyl).matrix().norm(), 0.0);
}

TEST(Reconstruct, RoundTripCoherent) {
  const FockSpace s(24);
  WeylPair weyl(s);
  const Operator rho = coherent(24, 0.5);
  const LabelGrid g = LabelGrid::square(6.0, 64);
  const Operator back = reconstruct(symbol_field(rho, weyl, g), weyl);
  EXPECT_LT((back.matrix() - rho.matrix()).norm(), 1e-3);
}

TEST(PairingKernel, WeylReproducesGaussian) {
  const FockSpace s(32);
  WeylPair weyl(s);
  const LabelGrid g = LabelGrid::square(6.0, 48);
  const double q0 = 0.4, p0 = -0.3;
  for (const Point& xp : {Point{0.0, 0.0}, Point{0.7, -0.2}, Point{-1.1, 0.5}}) {
    cplx got = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      got += g.weight(i) * coherent_wigner(g.point(i)[0], g.point(i)[1], q0, p0) * pairing_kernel(weyl, xp, g.point(i));
    EXPECT_NEAR(std::abs(got - coherent_wigner(xp[0], xp[1], q0, p0)), 0.0, 1e-3);
  }
}

TEST(PairingKernel, WeylPointValueIsTraceOfProduct) {
  const FockSpace s(16);
  WeylPair weyl(s);
  const Point a{0.3, -0.2}, b{-0.5, 0.4};
  const cplx direct = trace_of_product(weyl.u_at(a).matrix(), weyl.d_at(b).matrix());
  EXPECT_NEAR(std::abs(pairing_kernel(weyl, a, b) - direct), 0.0, 1e-13);
}

TEST(PairingKernel, MatrixPairIsKronecker) {
  MatrixMechanicsPair mp(FockSpace(4));
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int i2 = 0; i2 < 4; ++i2)
        for (int k2 = 0; k2 < 4; ++k2) {
          const cplx v = pairing_kernel(mp, {double(i), double(k)}, {double(i2), double(k2)});
          EXPECT_EQ(v, cplx((i == i2 && k == k2) ? 1.0 : 0.0));
        }
  EXPECT_TRUE(mp.delta_complete());
}

TEST(PairingKernel, TomographicFlaggedIncomplete) {
  TomographicPair tp(FockSpace(8), 0.3);
  EXPECT_FALSE(tp.delta_complete());
}

TEST(MatrixPair, SymbolsAreEntries) {
  std::mt19937_64 rng(5);
  const int d = 5;
  MatrixMechanicsPair mp{FockSpace(d)};
  const Operator a = oracle::op(oracle::random_matrix(d, rng));
  const Operator b = oracle::op(oracle::random_matrix(d, rng));
  const LabelGrid g = mp.default_grid();
  const SymbolField fa = symbol_field(a, mp, g), fb = symbol_field(b, mp, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int r = static_cast<int>(g.point(i)[0]), c = static_cast<int>(g.point(i)[1]);
    EXPECT_EQ(fa.values[i], a(r, c));
  }
  const Matrix ab = a.matrix() * b.matrix();
  const SymbolField prod = mp.kernel_star(fa, fb, g);
  const SymbolField prod2 = star_via_kernel(fa, fb, mp, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int r = static_cast<int>(g.point(i)[0]), c = static_cast<int>(g.point(i)[1]);
    EXPECT_LT(std::abs(prod.values[i] - ab(r, c)), 1e-12);
    EXPECT_LT(std::abs(prod2.values[i] - ab(r, c)), 1e-12);
  }
}

TEST(MatrixPair, KernelIsMatrixMultiplication) {
  MatrixMechanicsPair mp(FockSpace(3));
  EXPECT_EQ(star_kernel(mp, {{0, 1}, {1, 2}}, {0, 2}), cplx(1.0));
  EXPECT_EQ(star_kernel(mp, {{0, 1}, {2, 2}}, {0, 2}), cplx(0.0));
  EXPECT_EQ(mp.closed_kernel({{0, 1}, {1, 2}}, {0, 2}), cplx(1.0));
  EXPECT_EQ(mp.closed_kernel({{0, 1}, {0, 2}}, {0, 2}), cplx(0.0));
}

TEST(MatrixPair, EhrenfestWithIdentity) {
  std::mt19937_64 rng(6);
  const int d = 6;
  const Operator a = oracle::op(oracle::random_matrix(d, rng));
  const Vector p1 = oracle::random_matrix(d, rng).col(0), p2 = oracle::random_matrix(d, rng).col(1);
  const cplx direct = p1.dot(a.matrix() * p2);
  EXPECT_NEAR(std::abs(ehrenfest_star(a, Operator::identity(FockSpace(d)), p1, p2) - direct), 0.0, 1e-12);
  // any orthonormal basis gives the same composition
  const Operator b = oracle::op(oracle::random_matrix(d, rng));
  Eigen::HouseholderQR<Matrix> qr(oracle::random_matrix(d, rng));
  const Matrix basis = qr.householderQ();
  EXPECT_NEAR(std::abs(ehrenfest_star(a, b, p1, p2, basis) - p1.dot(a.matrix() * b.matrix() * p2)), 0.0, 1e-11);
}

TEST(StarOperators, IdentityElementAndPurity) {
  const FockSpace s(24);
  WeylPair weyl(s);
  const LabelGrid g = LabelGrid::square(6.0, 48);
  const Operator rho = coherent(24, cplx(0.3, 0.1));
  const SymbolField f = symbol_field(rho, weyl, g);
  const SymbolField f1 = star_via_operators(rho, Operator::identity(s), weyl, g);
  EXPECT_EQ(sup_distance(f, f1), 0.0);

  const Operator vac = make_state(s, StateSpec::fock(0));
  const SymbolField sq = star_via_operators(vac, vac, weyl, g);
  EXPECT_NEAR(std::abs(sq.integral() / (2.0 * kPi) - 1.0), 0.0, 1e-3);
}

TEST(StarOperators, Associative) {
  std::mt19937_64 rng(7);
  const FockSpace s(12);
  WeylPair weyl(s);
  const LabelGrid g = LabelGrid::square(2.0, 5);
  for (int t = 0; t < 10; ++t) {
    const Operator a = oracle::op(oracle::random_low_hermitian(12, 4, rng));
    const Operator b = oracle::op(oracle::random_low_hermitian(12, 4, rng));
    const Operator c = oracle::op(oracle::random_low_hermitian(12, 4, rng));
    const SymbolField left = star_via_operators(a * b, c, weyl, g);
    const SymbolField right = star_via_operators(a, b * c, weyl, g);
    EXPECT_LT(sup_distance(left, right), 1e-10);
  }
}

TEST(StarKernel, WeylOriginIsInversePiSquared) {
  WeylPair weyl(FockSpace(48));
  const cplx k = star_kernel(weyl, {{0, 0}, {0, 0}}, {0, 0});
  EXPECT_NEAR(std::abs(k - 1.0 / (kPi * kPi)), 0.0, 1e-6);
}

TEST(StarKernel, WeylMatchesMoyalOracle) {
  WeylPair weyl(FockSpace(48));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, x{u(rng), u(rng)};
    EXPECT_NEAR(std::abs(star_kernel(weyl, {a, b}, x) - oracle::moyal(a, b, x)), 0.0, 1e-6);
  }
}

TEST(StarKernel, TripleProductAgainstOperators) {
  // N = 3 kernel integrated against three Gaussian symbols, s-ordered pair
  const int dim = 24;
  const FockSpace s(dim);
  SOrderedPair pair(s, SOrder(0.3));
  const LabelGrid g = LabelGrid::square(2.0, 16);
  const Operator r1 = make_state(s, StateSpec::fock(0));
  const Operator r2 = coherent(dim, cplx(0.2, 0.0));
  const Operator r3 = coherent(dim, cplx(-0.1, 0.15));
  const SymbolField f1 = symbol_field(r1, pair, g), f2 = symbol_field(r2, pair, g), f3 = symbol_field(r3, pair, g);
  const Matrix prod = r1.matrix() * r2.matrix() * r3.matrix();
  for (const Point& x : {Point{0.0, 0.0}, Point{0.25, -0.1}}) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        const cplx c12 = g.weight(i) * f1.values[i] * g.weight(j) * f2.values[j];
        for (std::size_t k = 0; k < g.size(); ++k)
          acc += c12 * g.weight(k) * f3.values[k] * pair.closed_kernel({g.point(i), g.point(j), g.point(k)}, x);
      }
    const cplx op = pair.trace_at(prod, x, TraceMode::Auto);
    EXPECT_NEAR(std::abs(acc - op), 0.0, 1e-3);
  }
}

TEST(StarKernelRoute, MatchesOperatorRouteWeyl) {
  const FockSpace s(24);
  WeylPair weyl(s);
  const LabelGrid g = LabelGrid::square(6.0, 48);
  const Operator rho = coherent(24, 0.3);
  const SymbolField f = symbol_field(rho, weyl, g);
  const SymbolField kr = star_via_kernel(f, f, weyl, g);
  const SymbolField op = star_via_operators(rho, rho, weyl, g);
  EXPECT_LT(sup_distance(kr, op), 1e-3);
  // the generic quadrature with the closed kernel gives the same numbers
  const LabelGrid small = LabelGrid::square(6.0, 16);
  const SymbolField fs = symbol_field(rho, weyl, small);
  const Kernel2 k = [&](const Point& a, const Point& b, const Point& x) { return weyl.closed_kernel({a, b}, x); };
  EXPECT_LT(sup_distance(star_via_kernel(fs, fs, k, small), weyl.kernel_star(fs, fs, small)), 1e-12);
}

TEST(StarKernelRoute, IdentityElementInCentre) {
  // the symbol 1 does not decay, so only the centre of the output grid is compared
  const FockSpace s(24);
  WeylPair weyl(s);
  const LabelGrid g = LabelGrid::square(6.0, 48);
  const Operator rho = coherent(24, 0.3);
  const SymbolField f = symbol_field(rho, weyl, g);
  const SymbolField one(g, std::vector<cplx>(g.size(), 1.0));
  const SymbolField kr = star_via_kernel(f, one, weyl, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::hypot(g.point(i)[0], g.point(i)[1]) < 2.0) worst = std::max(worst, std::abs(kr.values[i] - f.values[i]));
  EXPECT_LT(worst, 1e-3);
}

TEST(Poisson, Antisymmetry) {
  const FockSpace s(10);
  WeylPair weyl(s);
  std::mt19937_64 rng(8);
  const Operator a = oracle::op(oracle::random_low_hermitian(10, 4, rng));
  const Operator b = oracle::op(oracle::random_low_hermitian(10, 4, rng));
  const LabelGrid g = LabelGrid::square(2.0, 6);
  EXPECT_EQ(poisson_bracket(a, a, weyl, g).sup_norm(), 0.0);
  const SymbolField ab = poisson_bracket(a, b, weyl, g), ba = poisson_bracket(b, a, weyl, g);
  EXPECT_LT((ab + ba).sup_norm(), 1e-14);
}

TEST(Poisson, CommutatorOfQuadratures) {
  const FockSpace s(40);
  WeylPair weyl(s);
  const Ladder l = build_ladder(s);
  const LabelGrid g = LabelGrid::square(1.5, 5);
  // the top-level defect of the truncated commutator stays invisible near the origin
  const SymbolField br = poisson_bracket(l.q, l.p, weyl, g);
  for (const cplx v : br.values) EXPECT_NEAR(std::abs(v - cplx(0.0, 1.0)), 0.0, 1e-6);
}

TEST(Poisson, JacobiAndLeibniz) {
  const int d = 10;
  const FockSpace s(d);
  SOrderedPair pair(s, SOrder(-0.3));
  std::mt19937_64 rng(9);
  const LabelGrid g = LabelGrid::square(1.0, 4);
  for (int t = 0; t < 3; ++t) {
    const Operator a = oracle::op(oracle::random_low_hermitian(d, 4, rng));
    const Operator b = oracle::op(oracle::random_low_hermitian(d, 4, rng));
    const Operator c = oracle::op(oracle::random_low_hermitian(d, 4, rng));
    const SymbolField jac = poisson_bracket(a, commutator(b, c), pair, g) +
                            poisson_bracket(b, commutator(c, a), pair, g) +
                            poisson_bracket(c, commutator(a, b), pair, g);
    EXPECT_LT(jac.sup_norm(), 1e-9);
    const SymbolField lhs = poisson_bracket(a, b * c, pair, g);
    const SymbolField rhs = star_via_operators(commutator(a, b), c, pair, g) +
                            star_via_operators(b, commutator(a, c), pair, g);
    EXPECT_LT(sup_distance(lhs, rhs), 1e-9);
  }
}

TEST(TracePower, PurityByMonteCarlo) {
  const FockSpace s(16);
  WeylPair weyl(s);
  const LabelGrid g = LabelGrid::square(5.0, 40);
  TracePowerOptions o;
  o.method = TracePowerOptions::Method::MonteCarlo;
  o.samples = 1000000;
  o.seed = 99;
  const TracePowerResult r = trace_power(make_state(s, StateSpec::fock(0)), weyl, 2, g, o);
  // the estimator's standard error is about 7e-3 here, so the check is statistical
  EXPECT_LT(r.std_error, 1e-2);
  EXPECT_LT(std::abs(r.value - 1.0), 4.0 * r.std_error);
  EXPECT_EQ(r.seed, 99u);
  EXPECT_EQ(r.method, "monte-carlo");
}

TEST(TracePower, ThermalDirectAndFidelity) {
  const FockSpace s(24);
  // s > 0: the dequantizer is bounded and the two-point kernel decays
  SOrderedPair pair(s, SOrder(0.3));
  const LabelGrid g = LabelGrid::square(3.5, 28);
  const Operator th = make_state(s, StateSpec::thermal(1.0));
  const double direct = trace_of_product(th.matrix(), th.matrix()).real();
  const TracePowerResult r = trace_power(th, pair, 2, g);
  EXPECT_NEAR(std::abs(r.value - direct), 0.0, 1e-2);
  const TracePowerResult f = fidelity(th, th, pair, g);
  EXPECT_NEAR(std::abs(f.value - r.value), 0.0, 1e-12);
}

TEST(TracePower, BudgetEnforced) {
  const FockSpace s(8);
  WeylPair weyl(s);
  TracePowerOptions o;
  o.method = TracePowerOptions::Method::Direct;
  o.budget = 10;
  EXPECT_THROW(trace_power(make_state(s, StateSpec::fock(0)), weyl, 2, LabelGrid::square(1.0, 4), o), ResourceError);
  EXPECT_THROW(trace_power(make_state(s, StateSpec::fock(0)), weyl, 1, LabelGrid::square(1.0, 4)), DomainError);
}

TEST(Evolution, OscillatorQuarterPeriod) {
  const FockSpace s(24);
  WeylPair weyl(s);
  const Ladder l = build_ladder(s);
  const Operator h = 0.5 * (l.q * l.q + l.p * l.p);
  const LabelGrid g = LabelGrid::square(2.0, 6);
  const double t = kPi / 2.0;
  const EvolutionResult r = heisenberg_evolve(l.q, h, weyl, g, t, 1e-3);
  EXPECT_LT(r.max_deviation, 1e-3);
  const SymbolField& last = r.fields.back();
  // q(t) = q cos t + p sin t
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double expect = g.point(i)[0] * std::cos(t) + g.point(i)[1] * std::sin(t);
    EXPECT_NEAR(std::abs(last.values[i] - expect), 0.0, 1e-3);
  }
}

TEST(Evolution, TrivialCases) {
  const FockSpace s(12);
  WeylPair weyl(s);
  const Ladder l = build_ladder(s);
  const LabelGrid g = LabelGrid::square(1.5, 4);
  const EvolutionResult r = heisenberg_evolve(l.q, Operator::identity(s), weyl, g, 1.0, 0.01);
  EXPECT_LT(sup_distance(r.fields.front(), r.fields.back()), 1e-13);
  const EvolutionResult z = heisenberg_evolve(l.q, Operator::identity(s), weyl, g, 0.0, 0.01);
  ASSERT_EQ(z.fields.size(), 1u);
  EXPECT_EQ(sup_distance(z.fields.front(), symbol_field(l.q, weyl, g)), 0.0);
}

TEST(Evolution, LargeStepIsUnstable) {
  const FockSpace s(24);
  WeylPair weyl(s);
  const Ladder l = build_ladder(s);
  const Operator h = 0.5 * (l.q * l.q + l.p * l.p);
  EXPECT_THROW(heisenberg_evolve(l.q, h, weyl, LabelGrid::square(1.0, 2), 20.0, 1.0), StabilityError);
}

TEST(Intertwine, WeylToTomographicVacuum) {
  const FockSpace s(16);
  WeylPair weyl(s);
  TomographicPair tomo(s, 0.3);
  const Operator vac = make_state(s, StateSpec::fock(0));
  const LabelGrid wg = LabelGrid::square(6.0, 64);
  const LabelGrid tg = LabelGrid::rectangular({{-3.0, 3.0, 12}, {0.2, 1.2, 3}, {-0.8, 0.7, 3}});
  const IntertwineResult r = intertwine(wigner(vac, wg), weyl, tomo, tg);
  const SymbolField direct = symbol_field(vac, tomo, tg);
  EXPECT_LT(sup_distance(r.field, direct), 1e-3);
  EXPECT_LT(r.reconstruction_residual, 1e-3);
}

TEST(Intertwine, SameMapAndRoundTrip) {
  const FockSpace s(24);
  WeylPair weyl(s);
  SOrderedPair sord(s, SOrder(-0.4));
  const LabelGrid wg = LabelGrid::square(6.0, 64);
  const SymbolField w = wigner(coherent(24, cplx(0.4, -0.2)), wg);
  EXPECT_LT(sup_distance(intertwine(w, weyl, weyl, wg).field, w), 1e-3);
  const LabelGrid sg = sord.default_grid();
  const SymbolField mid = intertwine(w, weyl, sord, sg).field;
  const SymbolField back = intertwine(mid, sord, weyl, wg).field;
  EXPECT_LT(sup_distance(back, w), 1e-2);
}

TEST(Intertwine, KernelIsTraceOfDequantizerAndQuantizer) {
  const FockSpace s(20);
  WeylPair weyl(s);
  SOrderedPair sord(s, SOrder(-0.3));
  const Point x{0.2, 0.1}, y{-0.3, 0.4};
  const cplx direct = trace_of_product(weyl.d_at(x).matrix(), sord.u_at(y).matrix());
  EXPECT_NEAR(std::abs(intertwining_kernel(weyl, sord, x, y) - direct), 0.0, 1e-12);
  EXPECT_THROW(intertwining_kernel(weyl, SOrderedPair(FockSpace(8), SOrder(-0.3)), x, y), DimensionMismatch);
}
