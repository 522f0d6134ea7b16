#pragma once
// Continuous wavelet analysis from the spectral calculus: admissible vectors
// psi = L h_hat(L) delta, the Calderon constant
// c_psi = 1/2 int_0^inf u |h_hat(u)|^2 du, the transform over a log-uniform
// scale grid, inversion, and the continuous-scale Besov norm.

#include <functional>
#include <string>
#include <vector>

#include "strata/grid.hpp"
#include "strata/littlewood_paley.hpp"
#include "strata/spectral.hpp"

namespace strata {

struct AdmissibleWavelet {
  GridFunction psi;
  std::function<double(double)> h_hat;
  double c_psi = 0;
  int moments = 0;      // verified vanishing-moment order
  std::string label;
};

// psi with spectral multiplier xi * h_hat(xi).  Errors if c_psi degenerates
// (below 1e-14 or non-finite after quadrature).
AdmissibleWavelet make_admissible(const SpectralModel& model,
                                  const std::function<double(double)>& h_hat,
                                  const std::string& label = "admissible");

// Multiplier xi^k e^{-xi}, i.e. h_hat(xi) = xi^{k-1} e^{-xi}: the group
// Mexican hat; 2k vanishing moments, c_psi = (2k-1)! / 2^{2k+1}.
AdmissibleWavelet mexican_hat(const SpectralModel& model, int k);

// 1/2 int_0^inf u |h_hat(u)|^2 du by adaptive quadrature.
double calderon_constant(const std::function<double(double)>& h_hat);

// log-uniform scales with midpoint weights: sum w = log(a_max/a_min),
// approximating int da/a over [a_min, a_max].
struct ScaleGrid {
  std::vector<double> scales;
  std::vector<double> weights;
};
ScaleGrid make_scale_grid(double a_min, double a_max, int count);

// W_psi u (a, .) = u * (D_a psi)^* per scale.  Scales must stay within the
// band the grid resolves: past a ~ 1/h the dilated kernel falls between
// nodes and the interpolated samples turn to noise that grows with a.
struct CwtResult {
  ScaleGrid grid;
  std::vector<GridFunction> planes;
};
CwtResult cwt(const GridFunction& u, const AdmissibleWavelet& w,
              const ScaleGrid& grid);

// sum_a w_a f * D_a(psi^* * psi) / c_psi: the truncated Calderon integral.
GridFunction calderon_reconstruct(const GridFunction& f,
                                  const AdmissibleWavelet& w,
                                  const ScaleGrid& grid);

// (int (a^s ||u * (D_a psi)^*||_p)^q da/a)^{1/q} on the scale grid, the
// continuous analogue of the discrete norm under band j <-> a = base^j.
double continuous_besov_norm(const GridFunction& u, const AdmissibleWavelet& w,
                             const BesovParams& bp, const ScaleGrid& grid);

}  // namespace strata
