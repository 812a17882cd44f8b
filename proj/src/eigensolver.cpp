#include "rmtlab/eigensolver.hpp"

#include "rmtlab/trace_power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace rmtlab::spectral {

namespace {

constexpr int kQlIterationCap = 60;

// Implicit-shift QL on a tridiagonal matrix. `e` holds the subdiagonal in
// e[0..n-2]; e[n-1] is scratch. `z`, when non-null, is an n x n row-major
// matrix whose columns are rotated along with the reduction.
void tql_implicit(std::vector<double>& d, std::vector<double>& e, double* z) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  e[static_cast<std::size_t>(n - 1)] = 0.0;
  auto D = [&](int i) -> double& { return d[static_cast<std::size_t>(i)]; };
  auto E = [&](int i) -> double& { return e[static_cast<std::size_t>(i)]; };

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(D(m)) + std::fabs(D(m + 1));
        if (std::fabs(E(m)) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (iter++ == kQlIterationCap)
        throw ConvergenceError("implicit QL did not converge for eigenvalue " + std::to_string(l), D(l),
                               std::fabs(E(l)));
      double g = (D(l + 1) - D(l)) / (2.0 * E(l));
      double r = std::hypot(g, 1.0);
      g = D(m) - D(l) + E(l) / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = m - 1; i >= l; --i) {
        const double f = s * E(i);
        const double b = c * E(i);
        r = std::hypot(f, g);
        E(i + 1) = r;
        if (r == 0.0) {
          D(i + 1) -= p;
          E(m) = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = D(i + 1) - p;
        r = (D(i) - g) * s + 2.0 * c * b;
        p = s * r;
        D(i + 1) = g + p;
        g = c * r - b;
        if (z) {
          for (int k = 0; k < n; ++k) {
            double& zi = z[static_cast<std::size_t>(k * n + i)];
            double& zi1 = z[static_cast<std::size_t>(k * n + i + 1)];
            const double t = zi1;
            zi1 = s * zi + c * t;
            zi = c * zi - s * t;
          }
        }
      }
      if (underflow) continue;
      D(l) -= p;
      E(l) = g;
      E(m) = 0.0;
    } while (m != l);
  }
}

// Householder reduction of the lower triangle of `a` (row-major, destroyed)
// to tridiagonal form: diagonal in d, subdiagonal in e[0..n-2].
void householder_tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d, std::vector<double>& e) {
  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i * n + j)]; };
  d.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sub(static_cast<std::size_t>(n), 0.0);  // sub[i] couples rows i-1 and i

  for (int i = n - 1; i > 0; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::fabs(A(i, k));
      if (scale == 0.0) {
        sub[static_cast<std::size_t>(i)] = A(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          A(i, k) /= scale;
          h += A(i, k) * A(i, k);
        }
        double f = A(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        sub[static_cast<std::size_t>(i)] = scale * g;
        h -= f * g;
        A(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += A(j, k) * A(i, k);
          for (int k = j + 1; k <= l; ++k) g += A(k, j) * A(i, k);
          sub[static_cast<std::size_t>(j)] = g / h;
          f += sub[static_cast<std::size_t>(j)] * A(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = A(i, j);
          g = sub[static_cast<std::size_t>(j)] - hh * f;
          sub[static_cast<std::size_t>(j)] = g;
          for (int k = 0; k <= j; ++k) A(j, k) -= f * sub[static_cast<std::size_t>(k)] + g * A(i, k);
        }
      }
    } else {
      sub[static_cast<std::size_t>(i)] = A(i, l);
    }
  }
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = A(i, i);
  e.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i < n; ++i) e[static_cast<std::size_t>(i - 1)] = sub[static_cast<std::size_t>(i)];
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

// ||A y - θ y|| with θ the Rayleigh quotient of unit y; returns {θ, residual}.
std::pair<double, double> rayleigh_residual(const AdjacencyMatrix& a, std::span<const double> y,
                                            std::vector<double>& scratch) {
  a.multiply(y, scratch);
  const double theta = dot(y, scratch);
  double r2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = scratch[i] - theta * y[i];
    r2 += r * r;
  }
  return {theta, std::sqrt(r2)};
}

}  // namespace

std::vector<double> tridiagonal_eigen(std::vector<double> diag, std::vector<double> offdiag,
                                      std::vector<double>* vectors) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return {};
  if (static_cast<int>(offdiag.size()) != n - 1)
    throw std::invalid_argument("tridiagonal_eigen: offdiag must have length n - 1");
  offdiag.push_back(0.0);
  std::vector<double> z;
  if (vectors) {
    z.assign(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i * n + i)] = 1.0;
  }
  tql_implicit(diag, offdiag, vectors ? z.data() : nullptr);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[static_cast<std::size_t>(x)] < diag[static_cast<std::size_t>(y)]; });
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = diag[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  if (vectors) {
    vectors->assign(static_cast<std::size_t>(n * n), 0.0);
    for (int k = 0; k < n; ++k)
      for (int col = 0; col < n; ++col)
        (*vectors)[static_cast<std::size_t>(k * n + col)] = z[static_cast<std::size_t>(k * n + order[static_cast<std::size_t>(col)])];
  }
  return values;
}

std::vector<double> full_spectrum(std::span<const double> matrix, int n) {
  if (n < 1) throw std::invalid_argument("full_spectrum: n must be >= 1");
  if (n > kMaxDenseSpectrum) throw std::invalid_argument("full_spectrum: n exceeds " + std::to_string(kMaxDenseSpectrum));
  if (matrix.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw std::invalid_argument("full_spectrum: matrix size mismatch");
  std::vector<double> a(matrix.begin(), matrix.end());
  std::vector<double> d, e;
  householder_tridiagonalize(a, n, d, e);
  tql_implicit(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> full_spectrum(const AdjacencyMatrix& a) { return full_spectrum(a.dense(), a.size()); }

Lambda1Result lambda1_detailed(const AdjacencyMatrix& a, const Lambda1Options& options) {
  const int n = a.size();
  const auto un = static_cast<std::size_t>(n);
  Lambda1Result result;
  if (a.edge_count() == 0) return result;

  const double tol = options.rel_tol * a.norm1();
  const double breakdown = 1e-14 * a.norm1();
  const int kmax = std::min(options.krylov_dim, n);

  std::vector<double> start(un, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(un), scratch(un), y(un);
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta, ritz_vectors;
  double best_value = 0.0;
  double best_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    basis.assign(1, start);
    alpha.clear();
    beta.clear();
    for (int j = 0; j < kmax; ++j) {
      const std::vector<double>& v = basis.back();
      a.multiply(v, w);
      ++result.matvecs;
      const double aj = dot(w, v);
      alpha.push_back(aj);
      for (std::size_t i = 0; i < un; ++i) w[i] -= aj * v[i];
      if (j > 0) {
        const std::vector<double>& prev = basis[basis.size() - 2];
        for (std::size_t i = 0; i < un; ++i) w[i] -= beta.back() * prev[i];
      }
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) {
          const double c = dot(w, b);
          for (std::size_t i = 0; i < un; ++i) w[i] -= c * b[i];
        }
      const double bj = norm2(w);

      tridiagonal_eigen(alpha, beta, &ritz_vectors);
      const auto k = static_cast<std::size_t>(j + 1);
      const std::size_t top = k - 1;
      const double estimate = std::fabs(bj * ritz_vectors[(k - 1) * k + top]);
      const bool invariant = bj <= breakdown;
      const bool last = j + 1 == kmax;

      if (estimate <= 0.5 * tol || invariant || last) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t col = 0; col < k; ++col) {
          const double s = ritz_vectors[col * k + top];
          for (std::size_t i = 0; i < un; ++i) y[i] += s * basis[col][i];
        }
        const double ny = norm2(y);
        for (double& yi : y) yi /= ny;
        const auto [theta, residual] = rayleigh_residual(a, y, scratch);
        ++result.matvecs;
        if (residual < best_residual) {
          best_residual = residual;
          best_value = theta;
        }
        if (residual <= tol) {
          result.value = theta;
          result.residual = residual;
          return result;
        }
        if (invariant || last) break;
      }
      std::vector<double> next(un);
      for (std::size_t i = 0; i < un; ++i) next[i] = w[i] / bj;
      beta.push_back(bj);
      basis.push_back(std::move(next));
    }
    start = y;
  }

  // Shifted power iteration: A + ||A||_1 I is positive semidefinite with the
  // same top eigenvector.
  const double shift = a.norm1();
  std::vector<double> x = start;
  result.used_power_fallback = true;
  for (int it = 1; it <= options.power_iterations; ++it) {
    a.multiply(x, w);
    ++result.matvecs;
    for (std::size_t i = 0; i < un; ++i) w[i] += shift * x[i];
    const double nw = norm2(w);
    for (std::size_t i = 0; i < un; ++i) x[i] = w[i] / nw;
    if (it % 10 == 0) {
      const auto [theta, residual] = rayleigh_residual(a, x, scratch);
      ++result.matvecs;
      if (residual < best_residual) {
        best_residual = residual;
        best_value = theta;
      }
      if (residual <= tol) {
        result.value = theta;
        result.residual = residual;
        return result;
      }
    }
  }
  throw ConvergenceError("lambda1 did not reach residual " + std::to_string(tol), best_value, best_residual);
}

bool spectrum_crosscheck(const AdjacencyMatrix& a, int m) {
  if (a.size() > 256) throw std::invalid_argument("spectrum_crosscheck: n must be <= 256");
  const auto spectrum = full_spectrum(a);
  const double exact = to_double(trace_power_int(a, m));
  long double power_sum = 0.0L;
  for (double lambda : spectrum) power_sum += std::pow(static_cast<long double>(lambda), 2 * m);
  const double gap = std::fabs(static_cast<double>(power_sum) - exact);
  const bool trace_ok = exact == 0.0 ? gap <= 1e-12 : gap <= 1e-8 * exact;

  const double top = spectrum.back();
  const double l1 = lambda1(a);
  const bool lambda_ok = std::fabs(l1 - top) <= 1e-8 * (1.0 + std::fabs(l1));
  return trace_ok && lambda_ok;
}

}  // namespace rmtlab::spectral
