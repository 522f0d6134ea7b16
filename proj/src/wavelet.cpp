#include "strata/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strata {

namespace {

// adaptive Simpson for the Calderon integrand
double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adapt(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 48);
}

}  // namespace

double calderon_constant(const std::function<double(double)>& h_hat) {
  auto integrand = [&](double u) {
    const double h = h_hat(u);
    if (!std::isfinite(h))
      throw std::runtime_error("calderon_constant: h_hat not finite");
    return u * h * h;
  };
  // the multipliers in use decay exponentially; extend the upper limit until
  // the marginal piece is negligible
  double total = integrate(integrand, 0.0, 8.0, 1e-14);
  double lo = 8.0;
  for (int round = 0; round < 12; ++round) {
    const double hi = lo * 2;
    const double piece = integrate(integrand, lo, hi, 1e-14);
    total += piece;
    if (std::abs(piece) < 1e-14 * std::max(1.0, std::abs(total))) break;
    lo = hi;
  }
  return 0.5 * total;
}

AdmissibleWavelet make_admissible(const SpectralModel& model,
                                  const std::function<double(double)>& h_hat,
                                  const std::string& label) {
  AdmissibleWavelet w;
  w.h_hat = h_hat;
  w.label = label;
  w.c_psi = calderon_constant(h_hat);
  if (!std::isfinite(w.c_psi) || w.c_psi < 1e-14)
    throw std::invalid_argument(
        "make_admissible: degenerate Calderon constant (" +
        std::to_string(w.c_psi) + ")");
  w.psi = model.spectral_kernel([&](double xi) { return xi * h_hat(xi); });
  w.moments = vanishing_moment_order(w.psi, 6);
  return w;
}

AdmissibleWavelet mexican_hat(const SpectralModel& model, int k) {
  if (k < 1) throw std::invalid_argument("mexican_hat: k must be >= 1");
  auto w = make_admissible(
      model,
      [k](double xi) { return std::pow(xi, k - 1) * std::exp(-xi); },
      "mexican" + std::to_string(k));
  return w;
}

ScaleGrid make_scale_grid(double a_min, double a_max, int count) {
  if (!(a_min > 0) || !(a_max > a_min))
    throw std::invalid_argument("make_scale_grid: need 0 < a_min < a_max");
  if (count < 2) throw std::invalid_argument("make_scale_grid: count >= 2");
  ScaleGrid g;
  const double step = std::log(a_max / a_min) / count;
  for (int i = 0; i < count; ++i) {
    g.scales.push_back(a_min * std::exp((i + 0.5) * step));   // midpoints
    g.weights.push_back(step);
  }
  return g;
}

CwtResult cwt(const GridFunction& u, const AdmissibleWavelet& w,
              const ScaleGrid& grid) {
  if (!(u.spec() == w.psi.spec()))
    throw std::invalid_argument("cwt: grid spec mismatch");
  CwtResult res;
  res.grid = grid;
  const GridFunction psis = star(w.psi);
  for (double a : grid.scales)
    res.planes.push_back(convolve(u, dilate(a, psis)));
  return res;
}

GridFunction calderon_reconstruct(const GridFunction& f,
                                  const AdmissibleWavelet& w,
                                  const ScaleGrid& grid) {
  if (!(f.spec() == w.psi.spec()))
    throw std::invalid_argument("calderon_reconstruct: grid spec mismatch");
  const GridFunction kernel = convolve(star(w.psi), w.psi);
  GridFunction out(f.spec());
  for (size_t i = 0; i < grid.scales.size(); ++i) {
    const GridFunction term = convolve(f, dilate(grid.scales[i], kernel));
    const double c = grid.weights[i] / w.c_psi;
    out = out + cplx(c) * term;
  }
  return out;
}

double continuous_besov_norm(const GridFunction& u, const AdmissibleWavelet& w,
                             const BesovParams& bp, const ScaleGrid& grid) {
  if (std::abs(bp.s) >= w.moments)
    throw std::invalid_argument(
        "continuous_besov_norm: requires vanishing moments of order k > |s| "
        "(have k = " + std::to_string(w.moments) + ", |s| = " +
        std::to_string(std::abs(bp.s)) + ")");
  if (!(bp.p >= 1) && bp.p != p_inf)
    throw std::invalid_argument("continuous_besov_norm: bad p");
  if (!(bp.q >= 1) && bp.q != p_inf)
    throw std::invalid_argument("continuous_besov_norm: bad q");
  const GridFunction psis = star(w.psi);
  double acc = 0, mx = 0;
  for (size_t i = 0; i < grid.scales.size(); ++i) {
    const double a = grid.scales[i];
    const double term = std::pow(a, bp.s) *
                        lp_norm(convolve(u, dilate(a, psis)), bp.p);
    if (bp.q == p_inf)
      mx = std::max(mx, term);
    else
      acc += grid.weights[i] * std::pow(term, bp.q);
  }
  return bp.q == p_inf ? mx : std::pow(acc, 1.0 / bp.q);
}

}  // namespace strata
