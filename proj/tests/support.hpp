#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "starprod/operator_core.hpp"

// Reference routines coded separately from the library.  They use plain
// recurrences and explicit sums so a shared bug is unlikely.
namespace oracle {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

inline Eigen::MatrixXcd random_matrix(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline Eigen::MatrixXcd random_hermitian(int d, std::mt19937_64& rng) {
  const Eigen::MatrixXcd m = random_matrix(d, rng);
  return 0.5 * (m + m.adjoint());
}

inline starprod::Operator op(const Eigen::MatrixXcd& m) {
  return starprod::Operator(starprod::FockSpace(static_cast<int>(m.rows())), m);
}

// Hermitian with support on the lowest `band` levels so symbols stay smooth
inline Eigen::MatrixXcd random_low_hermitian(int d, int band, std::mt19937_64& rng) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  m.topLeftCorner(band, band) = random_hermitian(band, rng);
  return m;
}

// D(alpha)|0> by the series e^{-|a|^2/2} sum a^n/sqrt(n!) |n>, recursively
inline Eigen::VectorXcd coherent_series(int d, cplx a) {
  Eigen::VectorXcd v(d);
  cplx c = std::exp(-0.5 * std::norm(a));
  for (int n = 0; n < d; ++n) {
    v(n) = c;
    c *= a / std::sqrt(static_cast<double>(n + 1));
  }
  return v;
}

// |<x|0>|^2 with <x|0> = pi^{-1/4} e^{-x^2/2}
inline double ground_density(double x) { return std::exp(-x * x) / std::sqrt(kPi); }

// displacement by Taylor series of the generator, many terms, no scaling
inline Eigen::MatrixXcd displacement_taylor(int d, cplx a) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) {
    g(n, n - 1) = a * std::sqrt(static_cast<double>(n));
    g(n - 1, n) = -std::conj(a) * std::sqrt(static_cast<double>(n));
  }
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(d, d), sum = term;
  for (int k = 1; k < 200; ++k) {
    term = term * g / static_cast<double>(k);
    sum += term;
    if (term.norm() < 1e-18) break;
  }
  return sum;
}

// <m|D(a)|n> of the infinite matrix by direct double sum over the normal-ordered form
inline cplx displacement_element(int m, int n, cplx a) {
  // D = e^{-|a|^2/2} e^{a a^dag} e^{-a* a}
  cplx s = 0.0;
  auto fact = [](int k) { return std::tgamma(k + 1.0); };
  for (int k = 0; k <= std::min(m, n); ++k) {
    // <m| (a a^dag)^{m-k}/(m-k)! |k><k| (-a* a)^{n-k}/(n-k)! |n>
    const double c = std::sqrt(fact(m) * fact(n)) / (fact(k) * fact(m - k) * fact(n - k));
    s += c * std::pow(a, m - k) * std::pow(-std::conj(a), n - k);
  }
  return std::exp(-0.5 * std::norm(a)) * s;
}

// Moyal kernel coded from its symplectic form, (q, p) labels
inline cplx moyal(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c) {
  auto w = [](const std::vector<double>& x, const std::vector<double>& y) { return x[0] * y[1] - x[1] * y[0]; };
  return std::exp(cplx(0.0, 2.0) * (w(a, b) + w(b, c) + w(c, a))) / (kPi * kPi);
}

}  // namespace oracle
