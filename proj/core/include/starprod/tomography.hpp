#pragma once

#include <vector>

#include "starprod/map_framework.hpp"

namespace starprod {

struct TomoPoint {
  double X = 0.0;
  double mu = 1.0;
  double nu = 0.0;

  Point as_label() const { return {X, mu, nu}; }
  static TomoPoint from_label(const Point& p) { return {p.at(0), p.at(1), p.at(2)}; }
};

// Spectral data of mu q + nu p in the truncated space
struct TomoFrame {
  double mu = 1.0;
  double nu = 0.0;
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;  // columns
};

TomoFrame make_frame(const FockSpace& space, double mu, double nu);

// Labels (X, mu, nu).  U = g_w(X - mu q - nu p), the spectral projector of
// mu q + nu p smoothed by a normalized Gaussian of width w.
// D = (1/2pi) e^{iX} exp(-i nu p - i mu q), with exact displacement matrix elements.
class TomographicPair : public QuantizerPair {
 public:
  TomographicPair(FockSpace space, double delta_width);

  std::string name() const override { return "tomographic"; }
  int label_dim() const override { return 3; }
  const FockSpace& space() const override { return space_; }
  double delta_width() const { return width_; }
  Operator u_at(const Point& x) const override;
  Operator d_at(const Point& x) const override;
  // X in [-24, 24] (240 cells), mu and nu in [-5, 5] (20 cells each)
  LabelGrid default_grid() const override;
  bool delta_complete() const override { return false; }
  cplx trace_at(const Matrix& x, const Point& p, TraceMode mode) const override;
  std::vector<cplx> quantizer_traces(const Matrix& x, const LabelGrid& grid,
                                     TraceMode mode) const override;
  Matrix dequantizer_sum(const LabelGrid& grid, const std::vector<cplx>& coeffs) const override;

  static cplx xi_of(double mu, double nu);

 private:
  double smear(double x) const;
  FockSpace space_;
  double width_;
};

struct Tomogram {
  LabelGrid grid;
  std::vector<double> values;
  int dim = 0;
  double delta_width = 0.0;
  double max_imag_residue = 0.0;

  SymbolField as_field() const;
};

// real tomogram of a Hermitian operator; DomainError if rho is not Hermitian
Tomogram tomogram_of_state(const Operator& rho, const TomographicPair& pair, const LabelGrid& grid);

// Kernel Tr[D(x_1)...D(x_N) U(x)] = amplitude * delta(constraint) in the unsmoothed limit
struct TomoKernelValue {
  // the delta argument is mu * sum_nu - nu * sum_mu
  double mu = 0.0;
  double nu = 0.0;
  double sum_mu = 0.0;
  double sum_nu = 0.0;
  cplx amplitude = 0.0;

  double constraint() const { return mu * sum_nu - nu * sum_mu; }
};

// BranchError if 4 mu^2 nu^2 > 1 at the output, DegenerateFrame if mu or nu is 0
TomoKernelValue tomo_kernel(const std::vector<TomoPoint>& inputs, const TomoPoint& out);

// Star product of N tomograms through the kernel.  The X integrals are done
// first (they are Fourier components at unit frequency); the delta is solved
// for the last input's nu, with Jacobian 1/|mu|, and that input's transform is
// interpolated along nu.  The output is smoothed like the pair's quantizer.
// Inputs are rectangular (X, mu, nu) fields on a common (mu, nu) lattice.
// Output frames need only mu != 0 (DegenerateFrame otherwise).  mu_refine > 1
// subdivides the last input's mu lattice, needed when outputs reach large |X/mu|.
std::vector<cplx> tomo_star_kernel(const std::vector<SymbolField>& inputs, const TomographicPair& pair,
                                   const std::vector<TomoPoint>& out, int mu_refine = 1);

// Canonical partner of mu q + nu p built from the same square root; used to
// report [X, P] = i at interior frames
Operator tomo_conjugate_momentum(const FockSpace& space, double mu, double nu);

}  // namespace starprod
