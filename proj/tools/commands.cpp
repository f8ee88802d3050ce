#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "config.hpp"
#include "json.hpp"
#include "starprod/assoc.hpp"
#include "starprod/deformed.hpp"
#include "starprod/io.hpp"
#include "starprod/parallel.hpp"
#include "starprod/phase_space.hpp"
#include "starprod/tomography.hpp"

namespace starprod::cli {

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

// configuration errors raised by the library while building inputs are
// validation failures, not numerical ones
template <class F>
auto validated(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(field + ": " + e.what());
  }
}

struct Setup {
  FockSpace space;
  MapSpec map;
  std::unique_ptr<QuantizerPair> pair;
  LabelGrid grid;
};

Setup setup(const Common& c) {
  Setup s;
  s.space = validated("--dim", [&] { return FockSpace(c.dim); });
  s.map = parse_map(c.map);
  s.pair = validated("--map", [&] { return make_pair(s.map, s.space); });
  s.grid = validated("--grid", [&] { return make_grid(*s.pair, c.grid); });
  return s;
}

Operator state_of(const std::string& text, const FockSpace& space, const std::string& field = "--state") {
  const StateSpec spec = parse_state(text);
  return validated(field, [&] { return make_state(space, spec); });
}

class Run {
 public:
  Run(const Common& c, std::string command) : prefix_(c.out.empty() ? "starprod_" + command : c.out) {
    m_.command = std::move(command);
    m_.library_version = library_version();
    m_.seed = c.seed;
  }

  void param(const std::string& k, const std::string& v) { m_.parameters[k] = v; }
  void param(const std::string& k, double v) { m_.parameters[k] = format_number(v); }

  void common(const Common& c, bool with_state = true) {
    param("dim", std::to_string(c.dim));
    param("map", c.map);
    param("grid", c.grid.empty() ? "default" : join(c.grid, " "));
    if (with_state) param("state", c.state);
    param("threads", std::to_string(thread_count()));
  }

  void artifact(const std::string& suffix, const std::string& content) {
    const std::string path = prefix_ + suffix;
    write_text(path, content);
    m_.artifacts.push_back(path);
  }

  // tol <= 0 records the value without gating
  void residual(const std::string& key, double value, double tol) {
    m_.residuals[key] = value;
    bool ok = true;
    if (tol > 0.0) {
      m_.tolerances[key] = tol;
      ok = std::isfinite(value) && value <= tol;
      m_.pass = m_.pass && ok;
    }
    std::cout << std::left << std::setw(28) << key << " " << format_number(value);
    if (tol > 0.0) std::cout << "  (tol " << format_number(tol) << ") " << (ok ? "ok" : "FAIL");
    std::cout << "\n";
  }

  int finish() {
    const std::string path = prefix_ + ".manifest.json";
    write_text(path, manifest_json(m_));
    std::cout << (m_.pass ? "PASS" : "FAIL") << "  manifest: " << path << "\n";
    return m_.pass ? kOk : kNumerical;
  }

 private:
  std::string prefix_;
  Manifest m_;
};

}  // namespace

int run_symbol(const Common& c) {
  Setup s = setup(c);
  Operator rho = state_of(c.state, s.space);
  Run run(c, "symbol");
  run.common(c);
  SymbolField f = symbol_field(rho, *s.pair, s.grid);
  const auto names = label_names(*s.pair);
  run.artifact(".csv", field_csv(f, names));
  run.artifact(".json", field_json(f, names, {{"map", c.map}, {"state", c.state}}));
  run.residual("integral", normalization(f, s.map), 0.0);
  run.residual("normalization_error", std::abs(normalization(f, s.map) - 1.0), 1e-3);
  if (s.map.kind != MapSpec::Kind::Matrix) run.residual("max_imag", f.max_imag(), 1e-8);
  return run.finish();
}

int run_tomogram(const Common& c, double delta_width) {
  const FockSpace space = validated("--dim", [&] { return FockSpace(c.dim); });
  std::vector<Axis> axes;
  if (!c.grid.empty()) {
    if (c.grid.size() != 3) throw ValidationError("--grid: tomogram needs three axes (X, mu, nu)");
    for (const auto& g : c.grid) axes.push_back(parse_axis(g));
  } else {
    axes = TomographicPair(space, 1.0).default_grid().axes();
  }
  if (delta_width < 0.0) throw ValidationError("--delta-width must be positive");
  const double width = delta_width > 0.0 ? delta_width : axes[0].spacing();
  TomographicPair pair(space, width);
  LabelGrid grid = LabelGrid::rectangular(axes);
  Operator rho = state_of(c.state, space);

  Run run(c, "tomogram");
  run.common(c);
  run.param("map", "tomographic:" + format_number(width));
  run.param("delta_width", width);
  Tomogram t = tomogram_of_state(rho, pair, grid);
  run.artifact(".csv", tomogram_csv(t));
  run.artifact(".json", tomogram_json(t));

  const int nx = axes[0].count, nf = axes[1].count * axes[2].count;
  double worst = 0.0, minv = 0.0;
  for (int f = 0; f < nf; ++f) {
    double sum = 0.0;
    for (int x = 0; x < nx; ++x) sum += t.values[static_cast<std::size_t>(x) * nf + f] * axes[0].spacing();
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  for (double v : t.values) minv = std::min(minv, v);
  run.residual("normalization_error", worst, 1e-3);
  run.residual("imag_residue", t.max_imag_residue, 1e-10);
  run.residual("negativity", -minv, 1e-8);
  return run.finish();
}

int run_star_check(const Common& c, const StarCheckArgs& a) {
  Setup s = setup(c);
  if (!s.pair->has_closed_kernel())
    throw ValidationError("--map: " + s.pair->name() +
                          " has no pointwise closed kernel (it carries a delta); use kernel-check");
  const bool matrix = s.map.kind == MapSpec::Kind::Matrix;
  double r = a.radius;
  if (r <= 0.0) r = s.map.kind == MapSpec::Kind::SOrdered ? 0.8 / std::sqrt(2.0) : 1.0;

  Run run(c, "star-check");
  run.common(c, false);
  run.param("samples", std::to_string(a.samples));
  run.param("order", std::to_string(a.order));
  run.param("radius", r);

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> coord(-r, r);
  std::uniform_int_distribution<int> level(0, c.dim - 1);
  auto draw = [&]() -> Point {
    if (matrix) return {static_cast<double>(level(rng)), static_cast<double>(level(rng))};
    const double x = coord(rng), y = coord(rng);
    return {x, y};
  };

  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < a.samples; ++i) {
    std::vector<Point> in;
    for (int k = 0; k < a.order; ++k) in.push_back(draw());
    const Point out = draw();
    const cplx closed = s.pair->closed_kernel(in, out);
    const cplx trace = star_kernel(*s.pair, in, out);
    worst = std::max(worst, std::abs(closed - trace));
    scale = std::max(scale, std::abs(trace));
  }
  run.residual("max_kernel_scale", scale, 0.0);
  run.residual("max_abs_error", worst, 0.0);
  // absolute below unit scale, relative above it
  run.residual("max_scaled_error", worst / std::max(1.0, scale), a.tol);
  return run.finish();
}

int run_kernel_check(const Common& c, const KernelCheckArgs& a) {
  Setup s = setup(c);
  Operator ra = state_of(c.state, s.space);
  Operator rb = state_of(a.state_b, s.space, "--state-b");
  Run run(c, "kernel-check");
  run.common(c);
  run.param("state_b", a.state_b);
  run.param("out_radius", a.out_radius);

  const SymbolField fa = symbol_field(ra, *s.pair, s.grid);
  const SymbolField fb = symbol_field(rb, *s.pair, s.grid);
  double worst = 0.0;
  double tol = a.tol;

  if (s.map.kind == MapSpec::Kind::Tomographic) {
    const auto& tp = static_cast<const TomographicPair&>(*s.pair);
    std::vector<TomoPoint> out;
    for (double th : {0.3, 1.0, 2.2, -0.7})
      for (int k = 0; k <= 8; ++k) out.push_back({-2.0 + 0.5 * k, std::cos(th), std::sin(th)});
    const auto kr = tomo_star_kernel({fa, fb}, tp, out);
    const Matrix prod = reconstruct(fa, tp).matrix() * reconstruct(fb, tp).matrix();
    for (std::size_t i = 0; i < out.size(); ++i)
      worst = std::max(worst, std::abs(kr[i] - tp.trace_at(prod, out[i].as_label(), TraceMode::Auto)));
    run.param("out_points", std::to_string(out.size()));
  } else {
    const SymbolField kr = s.pair->kernel_star(fa, fb, s.grid);
    const SymbolField op = star_via_operators(ra, rb, *s.pair, s.grid);
    std::size_t used = 0;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      const Point& x = s.grid.point(i);
      if (a.out_radius > 0.0 && std::hypot(x[0], x[1]) > a.out_radius) continue;
      worst = std::max(worst, std::abs(kr.values[i] - op.values[i]));
      ++used;
    }
    run.param("out_points", std::to_string(used));
    run.artifact(".csv", field_csv(kr, label_names(*s.pair)));
  }
  run.residual("sup_error", worst, tol);
  return run.finish();
}

int run_evolve(const Common& c, const EvolveArgs& a) {
  Setup s = setup(c);
  Ladder l = build_ladder(s.space);
  Operator obs;
  if (a.observable == "q")
    obs = l.q;
  else if (a.observable == "p")
    obs = l.p;
  else if (a.observable == "n")
    obs = number_operator(s.space);
  else
    throw ValidationError("--observable: expected q, p or n");
  if (!(a.dt > 0.0)) throw ValidationError("--dt must be positive");
  if (a.t_final < 0.0) throw ValidationError("--t-final must be >= 0");

  Run run(c, "evolve");
  run.common(c, false);
  run.param("observable", a.observable);
  run.param("t_final", a.t_final);
  run.param("dt", a.dt);
  run.param("lambda", a.lambda);

  const Operator h = number_operator(s.space);
  EvolutionOptions opts;
  opts.record_every = a.record_every;
  EvolutionResult r;
  if (a.lambda == 0.0) {
    r = heisenberg_evolve(obs, h, *s.pair, s.grid, a.t_final, a.dt, opts);
  } else {
    DeformationContext ctx(number_operator(s.space), a.lambda);
    r = k_evolve(obs, h, ctx, *s.pair, s.grid, a.t_final, a.dt, opts);
  }
  run.artifact(".csv", field_csv(r.fields.back(), label_names(*s.pair)));
  run.residual("records", static_cast<double>(r.times.size()), 0.0);
  run.residual("max_deviation", r.max_deviation, a.tol);
  return run.finish();
}

int run_purity(const Common& c, const PurityArgs& a) {
  Setup s = setup(c);
  Operator rho = state_of(c.state, s.space);
  TracePowerOptions opts;
  using M = TracePowerOptions::Method;
  if (a.method == "auto")
    opts.method = M::Auto;
  else if (a.method == "direct")
    opts.method = M::Direct;
  else if (a.method == "factorized")
    opts.method = M::Factorized;
  else if (a.method == "mc")
    opts.method = M::MonteCarlo;
  else
    throw ValidationError("--method: expected auto, direct, factorized or mc");
  opts.samples = a.samples;
  opts.seed = c.seed;

  Run run(c, "purity");
  run.common(c);
  run.param("power", std::to_string(a.power));
  run.param("method", a.method);
  const TracePowerResult r = trace_power(rho, *s.pair, a.power, s.grid, opts);
  Matrix p = rho.matrix();
  for (int i = 1; i < a.power; ++i) p = p * rho.matrix();
  const cplx direct = p.trace();
  run.param("method_used", r.method);
  run.param("evaluations", std::to_string(r.evaluations));
  run.residual("kernel_value", r.value.real(), 0.0);
  run.residual("direct_value", direct.real(), 0.0);
  if (r.method == "monte-carlo") run.residual("std_error", r.std_error, 0.0);
  run.residual("abs_error", std::abs(r.value - direct), a.tol);
  return run.finish();
}

int run_assoc_verify(const Common& c, const AssocArgs& a) {
  StructureTensor m;
  Matrix k = Matrix::Identity(2, 2);
  if (!a.k.empty()) {
    if (a.k.size() != 4) throw ValidationError("--k: expected four numbers");
    k << a.k[0], a.k[1], a.k[2], a.k[3];
  }
  if (a.tensor.rfind("builtin:", 0) == 0)
    m = builtin_tensor(a.tensor.substr(8), k);
  else
    m = tensor_from_json(read_text(a.tensor));

  Run run(c, "assoc-verify");
  run.param("tensor", a.tensor);
  run.param("n", std::to_string(m.n()));
  run.param("mode", a.lie ? "lie" : "assoc");
  if (!a.k.empty()) {
    std::vector<std::string> ks;
    for (double v : a.k) ks.push_back(format_number(v));
    run.param("k", join(ks, ","));
  }
  run.artifact(".tensor.json", tensor_json(m));
  if (a.lie) {
    const LieCheckResult r = lie_jacobi_check(m, a.tol);
    run.residual("antisymmetry_residual", r.antisymmetry_residual, 0.0);
    if (!r.antisymmetric) std::cout << "note: constants are not antisymmetric\n";
    run.residual("jacobi_residual", r.max_residual, a.tol);
  } else {
    const CheckResult r = assoc_check(m, a.tol);
    run.residual("commutator_jacobi_residual", lie_jacobi_check(commutator_constants(m)).max_residual, 0.0);
    run.residual("assoc_residual", r.max_residual, a.tol);
  }
  return run.finish();
}

int run_intertwine(const Common& c, const IntertwineArgs& a) {
  Setup s = setup(c);
  const MapSpec tm = parse_map(a.target);
  std::unique_ptr<QuantizerPair> target = validated("--to", [&] { return make_pair(tm, s.space); });
  const LabelGrid tgrid = target->default_grid();
  Operator rho = state_of(c.state, s.space);

  Run run(c, "intertwine");
  run.common(c);
  run.param("to", a.target);
  run.param("roundtrip", a.roundtrip ? "true" : "false");

  const SymbolField f = symbol_field(rho, *s.pair, s.grid);
  const IntertwineResult r = intertwine(f, *s.pair, *target, tgrid);
  run.residual("reconstruction_residual", r.reconstruction_residual, 0.0);
  if (a.roundtrip) {
    const IntertwineResult back = intertwine(r.field, *target, *s.pair, s.grid);
    run.artifact(".csv", field_csv(back.field, label_names(*s.pair)));
    run.residual("roundtrip_sup_error", sup_distance(back.field, f), a.tol);
  } else {
    const SymbolField direct = symbol_field(rho, *target, tgrid);
    run.artifact(".csv", field_csv(r.field, label_names(*target)));
    run.residual("sup_error", sup_distance(r.field, direct), a.tol);
  }
  return run.finish();
}

int run_report(const ReportArgs& a) {
  if (a.manifests.empty()) {
    std::cerr << "report: no manifests given\n";
    return kValidation;
  }
  std::vector<Manifest> ms;
  for (const auto& p : a.manifests) {
    try {
      ms.push_back(parse_manifest(read_text(p)));
    } catch (const ValidationError& e) {
      std::cerr << "report: " << p << ": " << e.what() << "\n";
      return kValidation;
    }
  }

  struct Ratio {
    std::string command, key;
    int dim_lo, dim_hi;
    double ratio;
  };
  std::vector<Ratio> ratios;
  // same command and map, different dim: residual(lower dim) / residual(higher dim)
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto it = ms[i].parameters.find("map");
    groups[ms[i].command + "|" + (it == ms[i].parameters.end() ? "" : it->second)].push_back(i);
  }
  auto dim_of = [&](std::size_t i) {
    const auto it = ms[i].parameters.find("dim");
    return it == ms[i].parameters.end() ? -1 : std::atoi(it->second.c_str());
  };
  for (auto& [key, idx] : groups) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return dim_of(x) < dim_of(y); });
    for (std::size_t j = 1; j < idx.size(); ++j) {
      const Manifest &lo = ms[idx[j - 1]], &hi = ms[idx[j]];
      if (dim_of(idx[j - 1]) == dim_of(idx[j]) || dim_of(idx[j]) < 0) continue;
      for (const auto& [rk, tol] : lo.tolerances) {
        const auto h = hi.residuals.find(rk);
        const auto l = lo.residuals.find(rk);
        if (h == hi.residuals.end() || l == lo.residuals.end()) continue;
        const double r = h->second > 0.0 ? l->second / h->second : std::numeric_limits<double>::infinity();
        ratios.push_back({lo.command, rk, dim_of(idx[j - 1]), dim_of(idx[j]), r});
      }
    }
  }

  bool all = true;
  for (const auto& m : ms) all = all && m.pass;
  if (a.json) {
    nlohmann::json j;
    j["pass"] = all;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (const auto& [k, v] : ms[i].residuals) {
        const auto t = ms[i].tolerances.find(k);
        nlohmann::json row = {{"manifest", a.manifests[i]}, {"command", ms[i].command}, {"residual", k}, {"value", v}};
        if (t != ms[i].tolerances.end()) {
          row["tol"] = t->second;
          row["pass"] = v <= t->second;
        }
        rows.push_back(row);
      }
    j["checks"] = rows;
    nlohmann::json cr = nlohmann::json::array();
    for (const auto& r : ratios)
      cr.push_back({{"command", r.command}, {"residual", r.key}, {"dim_lo", r.dim_lo}, {"dim_hi", r.dim_hi},
                    {"ratio", r.ratio}});
    j["convergence"] = cr;
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << std::left << std::setw(14) << "command" << std::setw(30) << "residual" << std::setw(20) << "value"
              << std::setw(12) << "tol" << "flag\n";
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (const auto& [k, v] : ms[i].residuals) {
        const auto t = ms[i].tolerances.find(k);
        std::cout << std::setw(14) << ms[i].command << std::setw(30) << k << std::setw(20) << format_number(v);
        if (t != ms[i].tolerances.end())
          std::cout << std::setw(12) << format_number(t->second) << (v <= t->second ? "PASS" : "FAIL");
        std::cout << "\n";
      }
    if (!ratios.empty()) {
      std::cout << "\nconvergence (residual at lower dim / higher dim)\n";
      for (const auto& r : ratios)
        std::cout << std::setw(14) << r.command << std::setw(30) << r.key << "dim " << r.dim_lo << " -> " << r.dim_hi
                  << "  ratio " << format_number(r.ratio) << "\n";
    }
    std::cout << (all ? "PASS" : "FAIL") << "\n";
  }
  return all ? kOk : kNumerical;
}

}  // namespace starprod::cli
