#pragma once
// Functions sampled on uniform boxes in exponential coordinates, plus the
// group-convolution quadrature and L^1-normalized dilation acting on them.

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "strata/group.hpp"

namespace strata {

using cplx = std::complex<double>;

// Uniform tensor grid on prod_i [-w_i, w_i] with an odd number of points per
// axis, so the origin is a node.  Node coordinate along axis i at index t is
// (t - (N_i-1)/2) * h_i with h_i = 2 w_i / (N_i - 1); the centre is exact.
struct GridSpec {
  StratifiedGroup group;
  std::vector<double> half_widths;
  std::vector<int> points;

  // derived
  std::vector<double> spacing;
  std::vector<std::size_t> strides;   // row-major, last axis fastest
  std::size_t total_nodes = 0;
  double cell_volume = 0;

  double coord(int axis, int index) const {
    return (index - (points[axis] - 1) / 2) * spacing[axis];
  }
  std::size_t origin_index() const;
  void node_coords(std::size_t flat, double* out) const;
  bool operator==(const GridSpec& o) const {
    return group == o.group && half_widths == o.half_widths && points == o.points;
  }
};

GridSpec make_grid(StratifiedGroup group, std::vector<double> half_widths,
                   std::vector<int> points);

class GridFunction {
public:
  GridFunction() = default;
  explicit GridFunction(GridSpec spec)
      : spec_(std::move(spec)), values_(spec_.total_nodes, cplx(0)) {}
  GridFunction(GridSpec spec, std::vector<cplx> values);

  const GridSpec& spec() const { return spec_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  bool real_valued(double tol = 0.0) const;

private:
  GridSpec spec_;
  std::vector<cplx> values_;
};

// Pointwise sampling of a callable on the grid nodes; rejects non-finite values.
GridFunction sample(const GridSpec& spec,
                    const std::function<cplx(const std::vector<double>&)>& f);
GridFunction sample_real(const GridSpec& spec,
                         const std::function<double(const std::vector<double>&)>& f);

// Multilinear interpolation of f at a point in exponential coordinates.
// Outside the box the function is extended by zero; the extension keeps the
// interpolant continuous, so values taper linearly to zero across one ghost
// cell beyond the boundary nodes.
cplx interpolate(const GridFunction& f, const double* point);

// Group convolution (f * g)(x) = vol * sum_y f(y) g(y^{-1} x), with g
// evaluated by multilinear interpolation and extended by zero outside the
// box.  `Direct` forces the generic quadrature; `Auto` routes abelian grids
// through an FFT and step-2 grids through an FFT over the top layer that
// reproduces the generic path to round-off.
enum class ConvPath { Auto, Direct };
GridFunction convolve(const GridFunction& f, const GridFunction& g,
                      ConvPath path = ConvPath::Auto);

// L^1-normalized dilation (D_t f)(x) = t^Q f(delta_t x), multilinear
// interpolation, zero outside the box.
GridFunction dilate(double t, const GridFunction& f);

// f~(x) = f(x^{-1}) and f*(x) = conj(f(x^{-1})); exact index reversals.
GridFunction involution(const GridFunction& f);
GridFunction star(const GridFunction& f);

// Riemann-sum L^p norm; p = infinity (use lp_norm_max / p_inf) is max |f|.
inline constexpr double p_inf = std::numeric_limits<double>::infinity();
double lp_norm(const GridFunction& f, double p);

// vol * sum_x f(x) x^I.
cplx moment(const GridFunction& f, const MultiIndex& I);

// Largest N <= max_order such that all moments with d(I) <= N-1 vanish
// relative to ||f||_1 * R^{d(I)}, R = max hom-norm over the box corners.
int vanishing_moment_order(const GridFunction& f, int max_order,
                           double tol = 1e-5);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(cplx s, const GridFunction& a);

}  // namespace strata
