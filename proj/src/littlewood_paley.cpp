#include "strata/littlewood_paley.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strata {

double smoothstep(double u) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

LPProfile::LPProfile(double xi_center, double base) : xi_c_(xi_center), a_(base) {
  if (!(xi_center > 0))
    throw std::invalid_argument("LPProfile: xi_center must be positive");
  if (!(base > 1))
    throw std::invalid_argument("LPProfile: base must be > 1");
}

LPProfile build_lp_profile(double xi_center, double base) {
  return LPProfile(xi_center, base);
}

// tau = log_{a^2}(xi / xi_c); bump supported on tau in (-1, 1), so successive
// squared dilates tile the spectrum with overlap exactly 2 deep
// Kernels are representatives modulo constants: the continuum band kernel has
// hat(0) = 0 exactly, and the box walls push the discretization error of that
// identity entirely into the grid mean.  Projecting it out restores the exact
// vanishing integral (and with it, reconstruction that ignores the mean).
static void remove_mean(GridFunction& f) {
  const std::size_t M = f.spec().total_nodes;
  cplx mean = 0;
  for (std::size_t i = 0; i < M; ++i) mean += f[i];
  mean /= static_cast<double>(M);
  for (std::size_t i = 0; i < M; ++i) f[i] -= mean;
}

double LPProfile::bump(double xi) const {
  if (!(xi > 0)) return 0;
  const double tau = std::log(xi / xi_c_) / (2.0 * std::log(a_));
  if (tau <= -1 || tau >= 1) return 0;
  return smoothstep(1 + tau) * smoothstep(1 - tau);
}

double LPProfile::psi_hat(double xi) const {
  const double th = bump(xi);
  if (th == 0) return 0;
  const double tau = std::log(xi / xi_c_) / (2.0 * std::log(a_));
  double denom = 0;
  const int j0 = static_cast<int>(std::ceil(-1 - tau));
  const int j1 = static_cast<int>(std::floor(1 - tau));
  for (int j = j0; j <= j1; ++j) {
    const double t = tau + j;
    if (t <= -1 || t >= 1) continue;
    const double b = smoothstep(1 + t) * smoothstep(1 - t);
    denom += b * b;
  }
  if (denom < 1e-6)
    throw std::runtime_error("LPProfile: partition denominator degenerate");
  return th / std::sqrt(denom);
}

double LPProfile::partition_sum(double xi) const {
  if (!(xi > 0)) return 0;
  double s = 0;
  // a^{2j} xi must land in (xi_lo, xi_hi)
  const double la2 = 2.0 * std::log(a_);
  const double tau = std::log(xi / xi_c_) / la2;
  const int j0 = static_cast<int>(std::ceil(-1 - tau));
  const int j1 = static_cast<int>(std::floor(1 - tau));
  for (int j = j0; j <= j1; ++j) {
    const double v = psi_hat(std::exp((tau + j) * la2) * xi_c_);
    s += v * v;
  }
  return s;
}

LPPair make_lp_pair(const SpectralModel& model, const LPProfile& profile,
                    double moment_tol) {
  if (profile.xi_hi() > model.lambda_max())
    throw std::invalid_argument(
        "make_lp_pair: profile support [" + std::to_string(profile.xi_lo()) +
        ", " + std::to_string(profile.xi_hi()) +
        "] exceeds the model's spectral range (lambda_max = " +
        std::to_string(model.lambda_max()) + ")");
  LPPair pair;
  pair.profile = profile;
  pair.psi = model.spectral_kernel([&](double xi) { return profile.psi_hat(xi); });
  remove_mean(pair.psi);
  pair.psi_moments = vanishing_moment_order(pair.psi, 6, moment_tol);
  if (pair.psi_moments < 2)
    throw std::runtime_error(
        "make_lp_pair: kernel fails the order-2 moment check; the grid does "
        "not resolve the profile");
  pair.eta = pair.psi;
  pair.eta_moments = pair.psi_moments;
  pair.model = &model;
  char buf[64];
  std::snprintf(buf, sizeof buf, "lp[xi_c=%g,a=%g]", profile.xi_center(),
                profile.base());
  pair.label = buf;
  return pair;
}

std::vector<double> profile_kernel_moments(const LPProfile& prof, int max_degree) {
  if (max_degree < 0)
    throw std::invalid_argument("profile_kernel_moments: max_degree >= 0");
  // resolve the bump support with ~16k samples below its lower edge (the
  // x^4-weighted sums feel the w-side trapezoid error); the conjugate grid
  // then spans X = pi/dw, thousands of kernel widths
  const double dw = std::sqrt(prof.xi_lo()) / 16384.0;
  const int n = (1 << 22) + 1;
  const double dx = M_PI / (dw * (n - 1));
  std::vector<double> in(n), out(n);
  for (int k = 0; k < n; ++k) {
    const double w = k * dw;
    in[k] = prof.psi_hat(w * w);
  }
  fftw_plan plan = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_REDFT00,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  // out[j] = in[0] + (-1)^j in[n-1] + 2 sum' in[k] cos(pi jk/(n-1)); with the
  // trapezoid end weights this is twice the half-line integral
  //
  // Sum only while the kernel stands above transform round-off: past that the
  // x^k weights would integrate pure noise, while the excluded true tail is
  // below 1e-11 of the peak and contributes ~1e-10 relative.
  double peak = 0;
  for (int j = 0; j < n; ++j) peak = std::max(peak, std::abs(out[j]));
  int jcap = n - 1;
  while (jcap > 0 && std::abs(out[jcap]) < 1e-11 * peak) --jcap;
  std::vector<double> num(max_degree + 1, 0), den(max_degree + 1, 0);
  for (int j = 0; j <= jcap; ++j) {
    const double psi = out[j] * dw / (2.0 * M_PI);
    const double wj = (j == 0 || j == jcap) ? 0.5 : 1.0;
    double xk = 1.0;
    for (int k = 0; k <= max_degree; ++k) {
      // even extension: odd powers cancel exactly, even ones double
      if (k % 2 == 0) {
        num[k] += wj * xk * psi;
        den[k] += wj * xk * std::abs(psi);
      }
      xk *= j * dx;
    }
  }
  std::vector<double> rel(max_degree + 1, 0.0);
  for (int k = 0; k <= max_degree; ++k)
    if (k % 2 == 0) rel[k] = std::abs(num[k]) / den[k];
  return rel;
}

std::function<double(double)> low_bump(double cut) {
  if (!(cut > 0)) throw std::invalid_argument("low_bump: cut must be positive");
  return [cut](double xi) {
    if (xi < 0) return 0.0;
    return smoothstep(2.0 * (1.0 - xi / cut));   // == 1 on [0, cut/2]
  };
}

LPPair shifted_synthesis_pair(const SpectralModel& model, const LPPair& pair,
                              const std::function<double(double)>& phi_hat) {
  const GridSpec& s = pair.psi.spec();
  if (s.group.step() != 1 || s.group.dim() != 1)
    throw std::invalid_argument(
        "shifted_synthesis_pair: only the 1-D abelian case is supported");
  // no spectral overlap with the analysis profile
  const double lo = std::min(pair.profile.xi_lo() * 1e-6, 1e-12);
  const double hi = model.lambda_max();
  for (int i = 0; i <= 4096; ++i) {
    const double xi = lo * std::pow(hi / lo, i / 4096.0);
    if (std::abs(phi_hat(xi) * pair.profile.psi_hat(xi)) > 1e-12)
      throw std::invalid_argument(
          "shifted_synthesis_pair: phi_hat overlaps the analysis profile near "
          "xi = " + std::to_string(xi));
  }
  // phi(x) = (2 pi)^{-1} int phi_hat(w^2) e^{iwx} dw, trapezoid on [0, wmax]
  // exploiting evenness; find the support edge on a log sweep
  double cut = 0;
  for (int i = 0; i <= 8192; ++i) {
    const double xi = lo * std::pow(hi / lo, i / 8192.0);
    if (std::abs(phi_hat(xi)) > 0) cut = xi;
  }
  if (cut == 0 && std::abs(phi_hat(0.0)) == 0) return pair;   // phi = 0: no-op
  const double wmax = std::sqrt(std::max(cut * 1.01, lo));
  const int nw = 20001;
  const double dw = wmax / (nw - 1);
  GridFunction phi(s);
  for (std::size_t m = 0; m < s.total_nodes; ++m) {
    const double x = s.coord(0, static_cast<int>(m));
    double acc = 0;
    for (int i = 0; i < nw; ++i) {
      const double w = i * dw;
      const double weight = (i == 0 || i == nw - 1) ? 0.5 : 1.0;
      acc += weight * phi_hat(w * w) * std::cos(w * x);
    }
    phi[m] = acc * dw / M_PI;   // doubled half-line integral over 2 pi
  }
  LPPair out = pair;
  out.eta = pair.psi + phi;
  out.eta_moments = vanishing_moment_order(out.eta, 6);
  out.label = pair.label + "+shift";
  out.shift_hat = phi_hat;
  return out;
}

GridFunction lp_band_kernel(const LPPair& pair, int j, bool synthesis) {
  const double aj = std::pow(pair.profile.base(), j);
  if (!pair.model) return dilate(aj, synthesis ? pair.eta : pair.psi);

  // With a model attached, every band comes from the exact dilation
  // covariance D_{a^j} psi = psi_hat(a^{-2j} .)(L) delta.  (Sampling a dilated
  // kernel instead aliases contracted bands and truncates spread ones.)
  const LPProfile& prof = pair.profile;
  const double s = 1.0 / (aj * aj);
  const bool shifted = synthesis && pair.shift_hat;
  // In Chebyshev mode, multipliers of deep-low bands are too sharp to expand;
  // ramping them off below the spectral floor changes nothing an eigenvalue
  // can see and keeps the required degree bounded by lambda_max/floor.
  const double cut = pair.model->mode() == SpectralMode::Chebyshev
                         ? 0.5 * pair.model->lambda_floor()
                         : 0.0;
  auto mult = [&prof, &pair, s, shifted, cut](double xi) {
    double v = prof.psi_hat(xi * s);
    if (shifted) v += pair.shift_hat(xi * s);
    if (cut > 0) v *= smoothstep(2.0 * xi / cut - 1.0);
    return v;
  };
  GridFunction k = pair.model->spectral_kernel(mult);
  // the shift deliberately carries mass at frequency zero; plain bands do not
  if (!shifted) remove_mean(k);
  return k;
}

LPCoefficients lp_coefficients(const GridFunction& u, const LPPair& pair, int J) {
  if (J < 0) throw std::invalid_argument("lp_coefficients: J must be >= 0");
  if (!(u.spec() == pair.psi.spec()))
    throw std::invalid_argument("lp_coefficients: grid spec mismatch");
  LPCoefficients co;
  co.J = J;
  co.base = pair.profile.base();
  co.bands.reserve(2 * J + 1);
  for (int j = -J; j <= J; ++j)
    co.bands.push_back(convolve(u, star(lp_band_kernel(pair, j, false))));
  return co;
}

GridFunction lp_reconstruct(const LPCoefficients& co, const LPPair& pair) {
  GridFunction out(pair.eta.spec());
  for (int j = -co.J; j <= co.J; ++j)
    out = out + convolve(co.bands[j + co.J], lp_band_kernel(pair, j, true));
  return out;
}

double besov_norm(const LPCoefficients& co, const BesovParams& bp,
                  int moment_order) {
  if (std::abs(bp.s) >= moment_order)
    throw std::invalid_argument(
        "besov_norm: requires vanishing moments of order k > |s| (have k = " +
        std::to_string(moment_order) + ", |s| = " + std::to_string(std::abs(bp.s)) +
        ")");
  if (!(bp.p >= 1) && bp.p != p_inf)
    throw std::invalid_argument("besov_norm: p must be >= 1 or infinity");
  if (!(bp.q >= 1) && bp.q != p_inf)
    throw std::invalid_argument("besov_norm: q must be >= 1 or infinity");
  double acc = 0, mx = 0;
  for (int j = -co.J; j <= co.J; ++j) {
    const double term =
        std::pow(co.base, j * bp.s) * lp_norm(co.bands[j + co.J], bp.p);
    if (bp.q == p_inf)
      mx = std::max(mx, term);
    else
      acc += std::pow(term, bp.q);
  }
  return bp.q == p_inf ? mx : std::pow(acc, 1.0 / bp.q);
}

double besov_norm(const GridFunction& u, const LPPair& pair,
                  const BesovParams& bp, int J) {
  return besov_norm(lp_coefficients(u, pair, J), bp, pair.psi_moments);
}

EquivalenceReport equivalence_experiment(const std::vector<LPPair>& pairs,
                                         const std::vector<NamedFunction>& bank,
                                         const std::vector<BesovParams>& params,
                                         int J) {
  if (pairs.size() < 2)
    throw std::invalid_argument("equivalence_experiment: need at least 2 pairs");
  if (bank.empty())
    throw std::invalid_argument("equivalence_experiment: empty test bank");
  EquivalenceReport rep;
  for (const auto& p : pairs) rep.pair_labels.push_back(p.label);

  // band coefficients once per (pair, f); norms per parameter triple reuse them
  std::vector<std::vector<LPCoefficients>> co(pairs.size());
  for (size_t ip = 0; ip < pairs.size(); ++ip)
    for (const auto& [id, f] : bank)
      co[ip].push_back(lp_coefficients(f, pairs[ip], J));

  for (const auto& bp : params) {
    std::vector<std::vector<double>> norms(pairs.size(),
                                           std::vector<double>(bank.size()));
    for (size_t ip = 0; ip < pairs.size(); ++ip)
      for (size_t kf = 0; kf < bank.size(); ++kf) {
        norms[ip][kf] = besov_norm(co[ip][kf], bp, pairs[ip].psi_moments);
        if (!(norms[ip][kf] > 0))
          throw std::runtime_error("equivalence_experiment: zero Besov norm for " +
                                   bank[kf].first);
      }
    for (size_t kf = 0; kf < bank.size(); ++kf) {
      EquivalenceRow row;
      row.f_id = bank[kf].first;
      row.bp = bp;
      for (size_t ip = 0; ip < pairs.size(); ++ip)
        row.norms.push_back(norms[ip][kf]);
      rep.rows.push_back(std::move(row));
    }
    for (size_t pa = 0; pa < pairs.size(); ++pa)
      for (size_t pb = pa + 1; pb < pairs.size(); ++pb) {
        double rmin = 0, rmax = 0;
        for (size_t kf = 0; kf < bank.size(); ++kf) {
          const double r = norms[pb][kf] / norms[pa][kf];
          if (kf == 0) rmin = rmax = r;
          rmin = std::min(rmin, r);
          rmax = std::max(rmax, r);
        }
        const double spread = rmax / rmin;
        if (spread > rep.worst_spread) {
          rep.worst_spread = spread;
          char buf[96];
          std::snprintf(buf, sizeof buf, "s=%g,p=%g,q=%g:%s/%s", bp.s, bp.p,
                        bp.q, pairs[pb].label.c_str(), pairs[pa].label.c_str());
          rep.worst_param = buf;
        }
      }
  }
  return rep;
}

DecayResult decay_slope_experiment(const GridFunction& f, const GridFunction& g,
                                   const DecayOptions& opts) {
  if (opts.ts.size() < 2)
    throw std::invalid_argument("decay_slope_experiment: need >= 2 sweep points");
  for (double t : opts.ts)
    if (!(t > 0))
      throw std::invalid_argument("decay_slope_experiment: t must be positive");
  DecayResult res;
  res.ts = opts.ts;
  const double Q = f.spec().group.hom_dim();
  GridFunction ft, gt;
  if (opts.reflected) {
    ft = involution(f);
    gt = involution(g);
  }
  for (double t : opts.ts) {
    double v;
    if (opts.reflected)
      v = std::pow(t, Q) * lp_norm(convolve(ft, dilate(1.0 / t, gt)), p_inf);
    else
      v = lp_norm(convolve(g, dilate(t, f)), p_inf);
    res.norms.push_back(v);
  }
  // least squares on (log t, log norm), skipping points below the floor
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < res.ts.size(); ++i) {
    if (res.norms[i] <= opts.floor) continue;
    const double x = std::log2(res.ts[i]), y = std::log2(res.norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2)
    throw std::runtime_error("decay_slope_experiment: all sweep points are "
                             "below the norm floor");
  res.used = n;
  res.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return res;
}

}  // namespace strata
