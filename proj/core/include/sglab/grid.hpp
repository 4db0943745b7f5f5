#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sg {

using Complex = std::complex<double>;

/// Uniform mesh on [-L, L] with n nodes, x_i = -L + i*h, h = 2L/(n-1).
struct Grid {
  double L = 40.0;
  int n = 4096;

  Grid() = default;
  Grid(double half_width, int points) : L(half_width), n(points) {
    if (!(L > 0.0)) throw std::invalid_argument("Grid: L must be positive");
    if (n < 16) throw std::invalid_argument("Grid: need at least 16 nodes");
  }

  double h() const { return 2.0 * L / (n - 1); }
  double node(int i) const { return -L + i * h(); }

  /// Index of the node closest to x (clamped to range).
  int nearest(double x) const {
    int i = static_cast<int>((x + L) / h() + 0.5);
    if (i < 0) i = 0;
    if (i >= n) i = n - 1;
    return i;
  }

  bool operator==(const Grid& o) const { return L == o.L && n == o.n; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Complex-valued samples of a scalar function on a Grid.
struct Field {
  Grid grid;
  std::vector<Complex> v;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), v(g.n, Complex{}) {}
  Field(const Grid& g, std::vector<Complex> values) : grid(g), v(std::move(values)) {
    if (static_cast<int>(v.size()) != g.n)
      throw std::invalid_argument("Field: value count does not match grid");
  }

  int size() const { return grid.n; }
  Complex& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  const Complex& operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  template <class F>
  static Field sample(const Grid& g, F&& f) {
    Field out(g);
    for (int i = 0; i < g.n; ++i) out[i] = Complex(f(g.node(i)));
    return out;
  }
};

/// State pair (phi, phi_t) on a shared grid.
struct FieldPair {
  Field phi;
  Field phi_t;

  FieldPair() = default;
  FieldPair(Field p, Field pt) : phi(std::move(p)), phi_t(std::move(pt)) {
    if (phi.grid != phi_t.grid)
      throw std::invalid_argument("FieldPair: fields live on different grids");
  }
  explicit FieldPair(const Grid& g) : phi(g), phi_t(g) {}

  const Grid& grid() const { return phi.grid; }
};

inline void check_same_grid(const Field& a, const Field& b) {
  if (a.grid != b.grid) throw std::invalid_argument("fields live on different grids");
}

// Pointwise arithmetic. All checked for grid agreement.
inline Field operator+(const Field& a, const Field& b) {
  check_same_grid(a, b);
  Field out(a.grid);
  for (int i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}
inline Field operator-(const Field& a, const Field& b) {
  check_same_grid(a, b);
  Field out(a.grid);
  for (int i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}
inline Field operator*(Complex c, const Field& a) {
  Field out(a.grid);
  for (int i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}
inline Field operator*(double c, const Field& a) { return Complex(c) * a; }
inline Field operator*(const Field& a, const Field& b) {
  check_same_grid(a, b);
  Field out(a.grid);
  for (int i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}
inline Field operator/(const Field& a, const Field& b) {
  check_same_grid(a, b);
  Field out(a.grid);
  for (int i = 0; i < a.size(); ++i) out[i] = a[i] / b[i];
  return out;
}
inline Field operator-(const Field& a) { return Complex(-1.0) * a; }

template <class F>
Field map(const Field& a, F&& f) {
  Field out(a.grid);
  for (int i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

inline Field conj(const Field& a) {
  return map(a, [](Complex z) { return std::conj(z); });
}
inline Field real_part(const Field& a) {
  return map(a, [](Complex z) { return Complex(z.real(), 0.0); });
}
inline Field imag_part(const Field& a) {
  return map(a, [](Complex z) { return Complex(z.imag(), 0.0); });
}

inline double sup_norm(const Field& a) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

inline bool all_finite(const Field& a) {
  for (int i = 0; i < a.size(); ++i)
    if (!std::isfinite(a[i].real()) || !std::isfinite(a[i].imag())) return false;
  return true;
}

inline FieldPair operator+(const FieldPair& a, const FieldPair& b) {
  return FieldPair(a.phi + b.phi, a.phi_t + b.phi_t);
}
inline FieldPair operator-(const FieldPair& a, const FieldPair& b) {
  return FieldPair(a.phi - b.phi, a.phi_t - b.phi_t);
}
inline FieldPair operator*(Complex c, const FieldPair& a) {
  return FieldPair(c * a.phi, c * a.phi_t);
}
inline FieldPair operator*(double c, const FieldPair& a) { return Complex(c) * a; }

}  // namespace sg
