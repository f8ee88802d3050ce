#include "starprod/deformed.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

namespace starprod {

DeformationContext::DeformationContext(Operator k_op, double lambda)
    : k_(std::move(k_op)), lambda_(lambda) {
  if (!std::isfinite(lambda)) throw DomainError("DeformationContext: lambda must be finite");
  if (lambda == 0.0)
    e_ = Operator::identity(k_.space());
  else
    e_ = Operator(k_.space(), (lambda * k_.matrix()).exp());
}

Operator k_product(const Operator& a, const Operator& b, const DeformationContext& ctx) {
  require_same_space(a, b);
  require_same_space(a, ctx.k_op());
  return a * ctx.e_lambda_k() * b;
}

Operator k_commutator(const Operator& a, const Operator& b, const DeformationContext& ctx) {
  return k_product(a, b, ctx) - k_product(b, a, ctx);
}

SymbolField k_star(const Operator& a, const Operator& b, const QuantizerPair& pair,
                   const DeformationContext& ctx, const LabelGrid& grid, TraceMode mode) {
  return symbol_field(k_product(a, b, ctx), pair, grid, mode);
}

SymbolField k_star(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                   const DeformationContext& ctx, TraceMode mode) {
  return k_star(reconstruct(fa, pair), reconstruct(fb, pair), pair, ctx, fa.grid, mode);
}

SymbolField star_fields(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                        TraceMode mode) {
  return symbol_field(reconstruct(fa, pair) * reconstruct(fb, pair), pair, fa.grid, mode);
}

SymbolField k_star_factorized(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                              const DeformationContext& ctx, bool right_first, TraceMode mode) {
  const SymbolField fk = symbol_field(ctx.e_lambda_k(), pair, fa.grid, mode);
  if (right_first) return star_fields(fa, star_fields(fk, fb, pair, mode), pair, mode);
  return star_fields(star_fields(fa, fk, pair, mode), fb, pair, mode);
}

SymbolField k_poisson(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                      const DeformationContext& ctx, TraceMode mode) {
  return k_poisson(reconstruct(fa, pair), reconstruct(fb, pair), pair, ctx, fa.grid, mode);
}

SymbolField k_poisson(const Operator& a, const Operator& b, const QuantizerPair& pair,
                      const DeformationContext& ctx, const LabelGrid& grid, TraceMode mode) {
  return symbol_field(k_commutator(a, b, ctx), pair, grid, mode);
}

EvolutionResult k_evolve(const Operator& a0, const Operator& h, const DeformationContext& ctx,
                         const QuantizerPair& pair, const LabelGrid& grid, double t_final, double dt,
                         const EvolutionOptions& opts) {
  require_same_space(a0, h);
  require_same_space(a0, ctx.k_op());
  if (!(dt > 0.0)) throw DomainError("k_evolve: dt must be positive");
  if (t_final < 0.0) throw DomainError("k_evolve: t_final must be >= 0");

  const long steps = std::lround(t_final / dt);
  const double step = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;
  const cplx I(0.0, 1.0);
  const Matrix he = h.matrix() * ctx.e_lambda_k().matrix();
  const Matrix eh = ctx.e_lambda_k().matrix() * h.matrix();
  auto rhs = [&](const Matrix& a) -> Matrix { return I * (he * a - a * eh); };
  const bool commuting = (h.matrix() * ctx.k_op().matrix() - ctx.k_op().matrix() * h.matrix()).norm() <
                         1e-12 * std::max(1.0, h.matrix().norm() * ctx.k_op().matrix().norm());

  EvolutionResult out;
  auto record = [&](double t, const Matrix& a) {
    out.times.push_back(t);
    out.fields.push_back(symbol_field(Operator(a0.space(), a), pair, grid, opts.mode));
    if (!commuting) return;
    Matrix u = (I * t * he).exp();
    Matrix exact = u * a0.matrix() * u.inverse();
    out.exact_fields.push_back(symbol_field(Operator(a0.space(), exact), pair, grid, opts.mode));
    out.max_deviation = std::max(out.max_deviation, sup_distance(out.fields.back(), out.exact_fields.back()));
  };

  Matrix a = a0.matrix();
  const double n0 = a.norm();
  record(0.0, a);
  for (long k = 1; k <= steps; ++k) {
    Matrix k1 = rhs(a);
    Matrix k2 = rhs(a + 0.5 * step * k1);
    Matrix k3 = rhs(a + 0.5 * step * k2);
    Matrix k4 = rhs(a + step * k3);
    a += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double nk = a.norm();
    if (!std::isfinite(nk) || (n0 > 0.0 && nk > opts.growth_limit * n0))
      throw StabilityError("k_evolve: norm grew from " + std::to_string(n0) + " to " + std::to_string(nk) +
                           " at step " + std::to_string(k) + "; reduce dt");
    if (k == steps || (opts.record_every > 0 && k % opts.record_every == 0)) record(k * step, a);
  }
  return out;
}

}  // namespace starprod
