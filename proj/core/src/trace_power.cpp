#include <cmath>
#include <random>
#include <string>

#include "starprod/map_framework.hpp"
#include "starprod/parallel.hpp"

namespace starprod {

namespace {

// Tr[D(x_{i_1}) ... D(x_{i_N})] from the closed form when the pair has one,
// else from cached truncated dequantizer matrices
class ProductTrace {
 public:
  ProductTrace(const QuantizerPair& pair, const LabelGrid& grid, int n) : pair_(pair), grid_(grid) {
    std::vector<Point> probe(n, grid.point(0));
    closed_ = pair.product_trace_closed(probe).has_value();
    if (!closed_) {
      mats_.resize(grid.size());
      parallel_for(grid.size(), [&](std::size_t i) { mats_[i] = pair.d_at(grid.point(i)).matrix(); });
    }
  }

  cplx operator()(const std::vector<std::size_t>& idx) const {
    if (closed_) {
      std::vector<Point> pts;
      pts.reserve(idx.size());
      for (auto i : idx) pts.push_back(grid_.point(i));
      return *pair_.product_trace_closed(pts);
    }
    if (idx.size() == 1) return mats_[idx[0]].trace();
    Matrix acc = mats_[idx[0]];
    for (std::size_t k = 1; k + 1 < idx.size(); ++k) acc = acc * mats_[idx[k]];
    return trace_of_product(acc, mats_[idx.back()]);
  }

  bool closed() const { return closed_; }

 private:
  const QuantizerPair& pair_;
  const LabelGrid& grid_;
  bool closed_ = false;
  std::vector<Matrix> mats_;
};

TracePowerResult factorized(const std::vector<SymbolField>& fields, const QuantizerPair& pair) {
  std::vector<Operator> ops;
  for (const auto& f : fields) ops.push_back(reconstruct(f, pair));
  TracePowerResult r;
  r.value = trace_product(ops);
  r.method = "factorized";
  r.evaluations = fields.front().size() * fields.size();
  return r;
}

TracePowerResult direct(const std::vector<SymbolField>& fields, const QuantizerPair& pair) {
  const std::size_t g = fields.front().size();
  const int n = static_cast<int>(fields.size());
  ProductTrace kern(pair, fields.front().grid, n);
  std::vector<cplx> partial(g);
  // one slice per leading index; slices are summed in order afterwards
  parallel_for(g, [&](std::size_t i0) {
    const cplx c0 = fields[0].grid.weight(i0) * fields[0].values[i0];
    if (c0 == cplx(0.0)) {
      partial[i0] = 0.0;
      return;
    }
    std::vector<std::size_t> idx(n, 0);
    idx[0] = i0;
    cplx acc = 0.0;
    for (;;) {
      cplx c = c0;
      for (int k = 1; k < n; ++k) c *= fields[k].grid.weight(idx[k]) * fields[k].values[idx[k]];
      if (c != cplx(0.0)) acc += c * kern(idx);
      int k = n - 1;
      while (k >= 1 && ++idx[k] == g) idx[k--] = 0;
      if (k < 1) break;
    }
    partial[i0] = acc;
  });
  TracePowerResult r;
  for (const auto& p : partial) r.value += p;
  r.method = kern.closed() ? "direct" : "direct-truncated";
  r.evaluations = static_cast<std::size_t>(std::pow(static_cast<double>(g), n));
  return r;
}

TracePowerResult monte_carlo(const std::vector<SymbolField>& fields, const QuantizerPair& pair,
                             const TracePowerOptions& opts) {
  const int n = static_cast<int>(fields.size());
  const std::size_t g = fields.front().size();
  ProductTrace kern(pair, fields.front().grid, n);
  // index k drawn with probability |w W_k| / S_k; each draw carries S_k times the phase
  std::vector<std::discrete_distribution<std::size_t>> dists;
  std::vector<double> norms(n);
  std::vector<std::vector<cplx>> phases(n, std::vector<cplx>(g));
  for (int k = 0; k < n; ++k) {
    std::vector<double> p(g);
    double s = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      const cplx c = fields[k].grid.weight(i) * fields[k].values[i];
      p[i] = std::abs(c);
      s += p[i];
      phases[k][i] = p[i] > 0.0 ? c / p[i] : cplx(0.0);
    }
    if (!(s > 0.0)) {
      TracePowerResult r;
      r.method = "monte-carlo";
      r.seed = opts.seed;
      return r;
    }
    norms[k] = s;
    dists.emplace_back(p.begin(), p.end());
  }
  double scale = 1.0;
  for (double s : norms) scale *= s;
  std::mt19937_64 rng(opts.seed);
  std::vector<std::size_t> idx(n);
  cplx sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < opts.samples; ++t) {
    cplx ph = 1.0;
    for (int k = 0; k < n; ++k) {
      idx[k] = dists[k](rng);
      ph *= phases[k][idx[k]];
    }
    const cplx v = scale * ph * kern(idx);
    sum += v;
    sum_sq += std::norm(v);
  }
  TracePowerResult r;
  const double m = static_cast<double>(opts.samples);
  r.value = sum / m;
  const double var = std::max(0.0, sum_sq / m - std::norm(r.value));
  r.std_error = std::sqrt(var / m);
  r.method = "monte-carlo";
  r.evaluations = opts.samples;
  r.seed = opts.seed;
  return r;
}

}  // namespace

TracePowerResult trace_power_fields(const std::vector<SymbolField>& fields, const QuantizerPair& pair,
                                    const TracePowerOptions& opts) {
  if (fields.size() < 2) throw DomainError("trace_power: N must be >= 2");
  for (const auto& f : fields)
    if (f.size() != fields.front().size())
      throw DimensionMismatch("trace_power: fields live on different grids");
  const double tuples = std::pow(static_cast<double>(fields.front().size()),
                                 static_cast<double>(fields.size()));
  using M = TracePowerOptions::Method;
  switch (opts.method) {
    case M::Factorized:
      return factorized(fields, pair);
    case M::MonteCarlo:
      return monte_carlo(fields, pair, opts);
    case M::Direct:
      if (tuples > opts.budget)
        throw ResourceError("trace_power: " + std::to_string(tuples) + " tuples exceed budget " +
                            std::to_string(opts.budget));
      return direct(fields, pair);
    case M::Auto:
      break;
  }
  if (tuples <= opts.budget) return direct(fields, pair);
  return monte_carlo(fields, pair, opts);
}

TracePowerResult trace_power(const Operator& rho, const QuantizerPair& pair, int n,
                             const LabelGrid& grid, const TracePowerOptions& opts) {
  if (n < 2) throw DomainError("trace_power: N must be >= 2");
  SymbolField w = symbol_field(rho, pair, grid, opts.mode);
  return trace_power_fields(std::vector<SymbolField>(n, w), pair, opts);
}

TracePowerResult fidelity(const Operator& rho1, const Operator& rho2, const QuantizerPair& pair,
                          const LabelGrid& grid, const TracePowerOptions& opts) {
  return trace_power_fields({symbol_field(rho1, pair, grid, opts.mode),
                             symbol_field(rho2, pair, grid, opts.mode)},
                            pair, opts);
}

}  // namespace starprod
