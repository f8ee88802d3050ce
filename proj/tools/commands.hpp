#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace starprod::cli {

struct Common {
  int dim = 24;
  std::string map = "weyl";
  std::vector<std::string> grid;
  std::string state = "vacuum";
  std::string out;
  std::uint64_t seed = 7;
};

struct StarCheckArgs {
  int samples = 20;
  int order = 2;
  double radius = 0.0;  // 0: map default
  double tol = 1e-5;
};

struct KernelCheckArgs {
  std::string state_b = "coherent:-0.3,0.4";
  double out_radius = 0.0;  // 0: whole grid
  double tol = 1e-3;
};

struct EvolveArgs {
  std::string observable = "q";
  double t_final = 6.283185307179586;
  double dt = 1e-3;
  double lambda = 0.0;
  int record_every = 0;
  double tol = 1e-3;
};

struct PurityArgs {
  int power = 2;
  std::string method = "auto";
  std::size_t samples = 1000000;
  double tol = 1e-2;
};

struct AssocArgs {
  std::string tensor = "builtin:matrix-mult";
  std::vector<double> k;
  bool lie = false;
  double tol = 1e-12;
};

struct IntertwineArgs {
  std::string target = "tomographic";
  bool roundtrip = false;
  double tol = 1e-3;
};

struct ReportArgs {
  std::vector<std::string> manifests;
  bool json = false;
};

int run_symbol(const Common& c);
int run_tomogram(const Common& c, double delta_width);
int run_star_check(const Common& c, const StarCheckArgs& a);
int run_kernel_check(const Common& c, const KernelCheckArgs& a);
int run_evolve(const Common& c, const EvolveArgs& a);
int run_purity(const Common& c, const PurityArgs& a);
int run_assoc_verify(const Common& c, const AssocArgs& a);
int run_intertwine(const Common& c, const IntertwineArgs& a);
int run_report(const ReportArgs& a);

}  // namespace starprod::cli
