// Symmetric eigenvalue routines: dense Householder + implicit QL for the full
// spectrum, and Lanczos with full reorthogonalization for the top eigenvalue.
#pragma once

#include "rmtlab/adjacency.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace rmtlab::spectral {

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double residual)
      : std::runtime_error(what), best_estimate_(best_estimate), residual_(residual) {}
  double best_estimate() const { return best_estimate_; }
  double residual() const { return residual_; }

 private:
  double best_estimate_;
  double residual_;
};

inline constexpr int kMaxDenseSpectrum = 512;

/// All eigenvalues of a symmetric row-major n x n matrix, ascending.
/// Only the lower triangle is read. Throws ConvergenceError if QL stalls.
std::vector<double> full_spectrum(std::span<const double> matrix, int n);
std::vector<double> full_spectrum(const AdjacencyMatrix& a);

/// Eigen-decomposition of a symmetric tridiagonal matrix (diag, offdiag of
/// length n-1). Eigenvalues ascending; `vectors`, if non-null, receives the
/// eigenvectors as columns of a row-major n x n matrix.
std::vector<double> tridiagonal_eigen(std::vector<double> diag, std::vector<double> offdiag,
                                      std::vector<double>* vectors = nullptr);

struct Lambda1Options {
  double rel_tol = 1e-10;
  int krylov_dim = 48;
  int max_restarts = 20;
  int power_iterations = 20000;
};

struct Lambda1Result {
  double value = 0.0;
  double residual = 0.0;  // ||A v - λ v|| for the returned unit vector
  int matvecs = 0;
  bool used_power_fallback = false;
};

/// Largest eigenvalue of A, certified by ||Av - λv|| <= rel_tol · ||A||_1.
/// Explicitly restarted Lanczos from the all-ones vector, falling back to
/// shifted power iteration. Throws ConvergenceError with the best estimate.
Lambda1Result lambda1_detailed(const AdjacencyMatrix& a, const Lambda1Options& options = {});

inline double lambda1(const AdjacencyMatrix& a, double rel_tol = 1e-10) {
  return lambda1_detailed(a, {.rel_tol = rel_tol}).value;
}

/// Sum of λ_i^{2m} over the dense spectrum matches trace_power_int to 1e-8
/// relative (1e-12 absolute when the trace is zero), and lambda1 matches the
/// top eigenvalue to 1e-8 (1 + |λ1|). Requires n <= 256.
bool spectrum_crosscheck(const AdjacencyMatrix& a, int m);

}  // namespace rmtlab::spectral
