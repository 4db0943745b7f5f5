#include "sglab/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace sg {

std::vector<double> fd_weights(double x0, std::span<const double> xs, int m) {
  // B. Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids", Math. Comp. 51 (1988).
  const int nd = static_cast<int>(xs.size()) - 1;
  std::vector<std::vector<double>> c(static_cast<std::size_t>(nd + 1),
                                     std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
              c1 * (k * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] -
                    c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)]) /
              c2;
        c[static_cast<std::size_t>(i)][0] =
            -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
            (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
             k * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)]) /
            c3;
      c[static_cast<std::size_t>(j)][0] *= c4 / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) w[i] = c[i][static_cast<std::size_t>(m)];
  return w;
}

namespace {

// Apply an (order+1)-point derivative stencil: centered in the interior,
// shifted near the edges.
Field apply_stencil(const Field& f, int deriv, int order) {
  const int n = f.size();
  const int width = order + deriv;              // points per stencil
  const int half = width / 2;
  if (n < width) throw std::invalid_argument("differentiate: grid smaller than stencil");
  const double h = f.grid.h();

  // Offsets are in index units; weights scale by h^-deriv.
  std::vector<double> xs(static_cast<std::size_t>(width));
  const double scale = std::pow(h, -deriv);

  Field out(f.grid);
  // Precompute the interior (centered) weights once.
  for (int k = 0; k < width; ++k) xs[static_cast<std::size_t>(k)] = k - half;
  const std::vector<double> wc = fd_weights(0.0, xs, deriv);
  for (int i = half; i < n - (width - 1 - half); ++i) {
    Complex acc{};
    for (int k = 0; k < width; ++k) acc += wc[static_cast<std::size_t>(k)] * f[i - half + k];
    out[i] = scale * acc;
  }
  // Edge rows: same order, shifted windows.
  for (int i = 0; i < half; ++i) {
    for (int k = 0; k < width; ++k) xs[static_cast<std::size_t>(k)] = k - i;
    const std::vector<double> w = fd_weights(0.0, xs, deriv);
    Complex acc{};
    for (int k = 0; k < width; ++k) acc += w[static_cast<std::size_t>(k)] * f[k];
    out[i] = scale * acc;
  }
  for (int i = n - (width - 1 - half); i < n; ++i) {
    const int start = n - width;
    for (int k = 0; k < width; ++k) xs[static_cast<std::size_t>(k)] = (start + k) - i;
    const std::vector<double> w = fd_weights(0.0, xs, deriv);
    Complex acc{};
    for (int k = 0; k < width; ++k) acc += w[static_cast<std::size_t>(k)] * f[start + k];
    out[i] = scale * acc;
  }
  return out;
}

}  // namespace

Field differentiate(const Field& f) { return apply_stencil(f, 1, 8); }

Field second_derivative(const Field& f, int order) { return apply_stencil(f, 2, order); }

Complex integrate(const Field& f) {
  const int n = f.size();
  Complex acc = 0.5 * (f[0] + f[n - 1]);
  for (int i = 1; i < n - 1; ++i) acc += f[i];
  return f.grid.h() * acc;
}

Complex pair_integral(const Field& a, const Field& b) {
  check_same_grid(a, b);
  const int n = a.size();
  Complex acc = 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
  for (int i = 1; i < n - 1; ++i) acc += a[i] * b[i];
  return a.grid.h() * acc;
}

Field cumulative_integral(const Field& f, CumulativeOrigin origin) {
  const int n = f.size();
  const double h = f.grid.h();
  Field out(f.grid);
  Complex acc{};
  out[0] = acc;
  for (int i = 1; i < n; ++i) {
    acc += 0.5 * h * (f[i] + f[i - 1]);
    out[i] = acc;
  }
  // Euler-Maclaurin endpoint correction: trapezoid from the left edge carries
  // a smooth -h^2/12 (f'(x) - f'(-L)) error that would cap the composition
  // differentiate(cumulative(f)) at 2nd order.
  const Field fp = differentiate(f);
  const double c = h * h / 12.0;
  for (int i = 0; i < n; ++i) out[i] -= c * (fp[i] - fp[0]);

  if (origin == CumulativeOrigin::Zero) {
    // Subtract the value at x = 0, interpolated when 0 is not a node.
    const int ic = f.grid.nearest(0.0);
    Complex at0{};
    if (std::abs(f.grid.node(ic)) < 1e-12 * h) {
      at0 = out[ic];
    } else {
      // Barycentric Lagrange on the 8 nodes around x = 0.
      int lo = std::max(0, std::min(ic - 4, n - 8));
      double num_r = 0.0, num_i = 0.0, den = 0.0;
      for (int k = 0; k < 8; ++k) {
        double w = 1.0;
        for (int j = 0; j < 8; ++j)
          if (j != k) w /= (f.grid.node(lo + k) - f.grid.node(lo + j));
        const double d = 0.0 - f.grid.node(lo + k);
        w /= d;
        num_r += w * out[lo + k].real();
        num_i += w * out[lo + k].imag();
        den += w;
      }
      at0 = Complex(num_r / den, num_i / den);
    }
    for (int i = 0; i < n; ++i) out[i] -= at0;
  }
  return out;
}

double l2_norm(const Field& f) {
  const int n = f.size();
  double acc = 0.5 * (std::norm(f[0]) + std::norm(f[n - 1]));
  for (int i = 1; i < n - 1; ++i) acc += std::norm(f[i]);
  return std::sqrt(f.grid.h() * acc);
}

double energy_norm(const FieldPair& p) {
  const Field px = differentiate(p.phi);
  const int n = p.phi.size();
  auto w = [&](int i) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; };
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += w(i) * (std::norm(p.phi[i]) + std::norm(px[i]) + std::norm(p.phi_t[i]));
  return std::sqrt(p.grid().h() * acc);
}

}  // namespace sg
