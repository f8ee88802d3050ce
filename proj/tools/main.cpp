#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "starprod/errors.hpp"
#include "starprod/io.hpp"

using namespace starprod::cli;

namespace {
void add_common(CLI::App* sub, Common& c, bool with_state = true, bool with_map = true) {
  sub->add_option("--dim", c.dim, "truncation dimension")->check(CLI::Range(2, 400));
  if (with_map) sub->add_option("--map", c.map, "weyl | sordered:<s> | tomographic[:<width>] | matrix");
  sub->add_option("--grid", c.grid, "axis lo:hi:count, repeat per axis (one axis = both for 2D maps)")
      ->allow_extra_args(false);
  if (with_state) sub->add_option("--state", c.state, "vacuum | fock:<n> | coherent:<re>[,<im>] | thermal:<nbar>");
  sub->add_option("--out", c.out, "artifact prefix");
  sub->add_option("--seed", c.seed, "random seed");
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"starprod: operator symbols, star products and associativity checks"};
  app.set_version_flag("--version", starprod::library_version());
  app.require_subcommand(1);

  Common common;
  StarCheckArgs star;
  KernelCheckArgs kern;
  EvolveArgs evo;
  PurityArgs pur;
  AssocArgs assoc;
  IntertwineArgs inter;
  ReportArgs rep;

  auto* symbol = app.add_subcommand("symbol", "symbol field of a state");
  add_common(symbol, common);
  auto* tomo = app.add_subcommand("tomogram", "tomogram of a state");
  add_common(tomo, common, true, false);
  double delta_width = 0.0;
  tomo->add_option("--delta-width", delta_width, "smoothing width (default: X spacing)");

  auto* sc = app.add_subcommand("star-check", "closed-form kernel against the trace definition");
  add_common(sc, common, false);
  sc->add_option("--samples", star.samples)->check(CLI::Range(1, 100000));
  sc->add_option("--order", star.order, "number of input symbols")->check(CLI::Range(2, 10));
  sc->add_option("--radius", star.radius, "coordinate bound for random points");
  sc->add_option("--tol", star.tol);

  auto* kc = app.add_subcommand("kernel-check", "kernel-route star product against the operator route");
  add_common(kc, common);
  kc->add_option("--state-b", kern.state_b, "second state");
  kc->add_option("--out-radius", kern.out_radius, "compare only where |x| <= radius");
  kc->add_option("--tol", kern.tol);

  auto* ev = app.add_subcommand("evolve", "Heisenberg evolution of an observable under H = a^dag a");
  add_common(ev, common, false);
  ev->add_option("--observable", evo.observable, "q | p | n");
  ev->add_option("--t-final", evo.t_final);
  ev->add_option("--dt", evo.dt);
  ev->add_option("--lambda", evo.lambda, "deformation strength with k = a^dag a");
  ev->add_option("--record-every", evo.record_every);
  ev->add_option("--tol", evo.tol);

  auto* pu = app.add_subcommand("purity", "Tr rho^n by kernel quadrature");
  add_common(pu, common);
  pu->add_option("--power", pur.power)->check(CLI::Range(2, 8));
  pu->add_option("--method", pur.method, "auto | direct | factorized | mc");
  pu->add_option("--samples", pur.samples);
  pu->add_option("--tol", pur.tol);

  auto* av = app.add_subcommand("assoc-verify", "associativity of a structure tensor");
  av->add_option("--tensor", assoc.tensor, "builtin:<name>[:arg] or a JSON file");
  av->add_option("--k", assoc.k, "k11,k12,k21,k22 for builtin:akb")->delimiter(',')->expected(4);
  av->add_flag("--lie", assoc.lie, "treat the tensor as Lie structure constants");
  av->add_option("--tol", assoc.tol);
  av->add_option("--out", common.out, "artifact prefix");

  auto* it = app.add_subcommand("intertwine", "convert a symbol field between maps");
  add_common(it, common);
  it->add_option("--to", inter.target, "target map");
  it->add_flag("--roundtrip", inter.roundtrip, "convert back and compare with the source field");
  it->add_option("--tol", inter.tol);

  auto* rp = app.add_subcommand("report", "summarize run manifests");
  rp->add_option("manifests", rep.manifests, "manifest files");
  rp->add_flag("--json", rep.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*symbol) return run_symbol(common);
    if (*tomo) return run_tomogram(common, delta_width);
    if (*sc) return run_star_check(common, star);
    if (*kc) return run_kernel_check(common, kern);
    if (*ev) return run_evolve(common, evo);
    if (*pu) return run_purity(common, pur);
    if (*av) return run_assoc_verify(common, assoc);
    if (*it) return run_intertwine(common, inter);
    if (*rp) return run_report(rep);
  } catch (const starprod::ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kValidation;
  } catch (const starprod::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kValidation;
}
