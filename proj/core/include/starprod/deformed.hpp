#pragma once

#include "starprod/map_framework.hpp"

namespace starprod {

// Insertion product A e^{lambda k} B.  Immutable once built.
class DeformationContext {
 public:
  DeformationContext(Operator k_op, double lambda);

  const Operator& k_op() const { return k_; }
  double lambda() const { return lambda_; }
  const Operator& e_lambda_k() const { return e_; }
  const FockSpace& space() const { return k_.space(); }

 private:
  Operator k_;
  double lambda_;
  Operator e_;
};

Operator k_product(const Operator& a, const Operator& b, const DeformationContext& ctx);
Operator k_commutator(const Operator& a, const Operator& b, const DeformationContext& ctx);

// Tr[A e^{lambda k} B U(x)] on the grid
SymbolField k_star(const Operator& a, const Operator& b, const QuantizerPair& pair,
                   const DeformationContext& ctx, const LabelGrid& grid, TraceMode mode = TraceMode::Auto);
// field version: the operators are reconstructed from the symbols first
SymbolField k_star(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                   const DeformationContext& ctx, TraceMode mode = TraceMode::Auto);

// Product of two symbols by the operator route: symbol of reconstruct(fa) reconstruct(fb)
SymbolField star_fields(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                        TraceMode mode = TraceMode::Auto);

// k_star through the plain star product and the symbol f_k of e^{lambda k}:
// (fa * f_k) * fb, or fa * (f_k * fb) with right_first
SymbolField k_star_factorized(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                              const DeformationContext& ctx, bool right_first = false,
                              TraceMode mode = TraceMode::Auto);

// fa * f_k * fb - fb * f_k * fa
SymbolField k_poisson(const SymbolField& fa, const SymbolField& fb, const QuantizerPair& pair,
                      const DeformationContext& ctx, TraceMode mode = TraceMode::Auto);
SymbolField k_poisson(const Operator& a, const Operator& b, const QuantizerPair& pair,
                      const DeformationContext& ctx, const LabelGrid& grid, TraceMode mode = TraceMode::Auto);

// dA/dt = i (H e^{lambda k} A - A e^{lambda k} H), RK4 on the operator.  When
// k commutes with H the exact fields come from conjugation by exp(i t H e^{lambda k});
// otherwise exact_fields stays empty.
EvolutionResult k_evolve(const Operator& a0, const Operator& h, const DeformationContext& ctx,
                         const QuantizerPair& pair, const LabelGrid& grid, double t_final, double dt,
                         const EvolutionOptions& opts = {});

}  // namespace starprod
