#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

#include "starprod/map_framework.hpp"

namespace starprod {

EvolutionResult heisenberg_evolve(const Operator& a0, const Operator& h, const QuantizerPair& pair,
                                  const LabelGrid& grid, double t_final, double dt,
                                  const EvolutionOptions& opts) {
  require_same_space(a0, h);
  if (!(dt > 0.0)) throw DomainError("heisenberg_evolve: dt must be positive");
  if (t_final < 0.0) throw DomainError("heisenberg_evolve: t_final must be >= 0");
  if (!is_hermitian(h, 1e-10)) throw DomainError("heisenberg_evolve: H is not Hermitian");

  const long steps = std::lround(t_final / dt);
  const double step = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;
  const Matrix& hm = h.matrix();
  const cplx I(0.0, 1.0);
  auto rhs = [&](const Matrix& a) -> Matrix { return I * (hm * a - a * hm); };

  EvolutionResult out;
  auto record = [&](double t, const Matrix& a) {
    out.times.push_back(t);
    out.fields.push_back(symbol_field(Operator(a0.space(), a), pair, grid, opts.mode));
    Matrix u = (I * t * hm).exp();
    Matrix exact = u * a0.matrix() * u.adjoint();
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
      throw StabilityError("heisenberg_evolve: norm grew from " + std::to_string(n0) + " to " +
                           std::to_string(nk) + " at step " + std::to_string(k) + "; reduce dt");
    const bool last = k == steps;
    if (last || (opts.record_every > 0 && k % opts.record_every == 0)) record(k * step, a);
  }
  return out;
}

}  // namespace starprod
