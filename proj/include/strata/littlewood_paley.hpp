#pragma once
// Discrete Littlewood-Paley analysis built on the spectral calculus: a C-inf
// bump profile psi_hat on the L-spectrum normalized so that
// sum_j psi_hat(a^{2j} xi)^2 = 1 exactly for xi > 0, the induced kernel pair
// (psi, eta), band coefficients u * (D_{a^j} psi)^*, reconstruction, Besov
// norms, and the norm-equivalence / decay-slope experiments.

#include <functional>
#include <string>
#include <vector>

#include "strata/grid.hpp"
#include "strata/spectral.hpp"

namespace strata {

class LPProfile {
public:
  LPProfile() = default;
  LPProfile(double xi_center, double base);

  double xi_center() const { return xi_c_; }
  double base() const { return a_; }
  double xi_lo() const { return xi_c_ / (a_ * a_); }   // support of psi_hat
  double xi_hi() const { return xi_c_ * a_ * a_; }

  double bump(double xi) const;        // unnormalized theta
  double psi_hat(double xi) const;     // normalized multiplier
  double partition_sum(double xi) const;   // sum_j psi_hat(a^{2j} xi)^2

private:
  double xi_c_ = 1.0, a_ = 2.0;
};

LPProfile build_lp_profile(double xi_center, double base);

// Relative moments |int x^k psi| / int |x|^k |psi|, k = 0..max_degree, of the
// continuum 1-D kernel psi(x) = (1/pi) int psi_hat(w^2) cos(wx) dw, by cosine
// transform over a domain long enough to exhaust the tail.  Bump-profile
// kernels decay like exp(-c sqrt|x|) -- far too slowly for any working box,
// so grid moment sums stall near 1e-3 no matter the box; the true integrals
// vanish to all orders (psi_hat is flat at 0), and this quadrature is where
// that is numerically visible.  Probes the profile only, hence serves every
// group: moments against hom-degree <= d polynomials on any G are the same
// finitely many derivatives of psi_hat at 0.
std::vector<double> profile_kernel_moments(const LPProfile& profile,
                                           int max_degree);

// C-inf step: 0 for u <= 0, 1 for u >= 1, strictly increasing between.
double smoothstep(double u);

struct LPPair {
  GridFunction psi;
  GridFunction eta;
  LPProfile profile;
  int psi_moments = 0;   // verified vanishing-moment orders
  int eta_moments = 0;
  std::string label;
  const SpectralModel* model = nullptr;     // source model; must outlive the pair
  std::function<double(double)> shift_hat;  // synthesis low-pass (shifted pairs)
};

// psi = spectral kernel of the profile with the grid mean projected out (the
// continuum kernel integrates to zero exactly; the walls put the defect of
// that identity in the mean); eta = psi.  Errors if the profile's support
// exceeds the model's spectral range or the kernel fails the order-2 moment
// check at moment_tol (an under-resolved grid).
LPPair make_lp_pair(const SpectralModel& model, const LPProfile& profile,
                    double moment_tol = 1e-5);

// Abelian (1-D) only: eta = psi + phi with phi built from a low-pass bump
// phi_hat supported below the profile, via quadrature of the inverse Fourier
// integral phi(x) = (2 pi)^{-1} int phi_hat(w^2) e^{iwx} dw.  Errors if
// phi_hat overlaps psi_hat beyond 1e-12.
LPPair shifted_synthesis_pair(const SpectralModel& model, const LPPair& pair,
                              const std::function<double(double)>& phi_hat);
// Bump equal to 1 at 0 and supported in [0, cut].
std::function<double(double)> low_bump(double cut);

// Band kernel psi_j = D_{a^j} psi (eta when synthesis).  Pairs carrying a
// model realize the dilation through the exact spectral covariance
// D_t psi = psi_hat(t^{-2} .)(L) delta: sampling a dilated kernel instead
// aliases contracted bands (j > 0) and truncates spread ones (j < 0) at the
// box.  Bands whose multiplier lives entirely below the spectral floor come
// back identically zero, which is what the calculus assigns them.  Model-less
// pairs fall back to grid dilation of the stored kernel.
GridFunction lp_band_kernel(const LPPair& pair, int j, bool synthesis);

struct LPCoefficients {
  std::vector<GridFunction> bands;   // band j at index j + J
  int J = 0;
  double base = 2.0;
};

LPCoefficients lp_coefficients(const GridFunction& u, const LPPair& pair, int J);
GridFunction lp_reconstruct(const LPCoefficients& co, const LPPair& pair);

struct BesovParams {
  double s = 0, p = 2, q = 2;   // p, q may be p_inf
};

// (sum_j (a^{js} ||band_j||_p)^q)^{1/q}; enforces |s| < verified moment order.
double besov_norm(const LPCoefficients& co, const BesovParams& bp,
                  int moment_order);
double besov_norm(const GridFunction& u, const LPPair& pair,
                  const BesovParams& bp, int J);

using NamedFunction = std::pair<std::string, GridFunction>;

struct EquivalenceRow {
  std::string f_id;
  BesovParams bp;
  std::vector<double> norms;     // one per pair
};
struct EquivalenceReport {
  std::vector<std::string> pair_labels;
  std::vector<EquivalenceRow> rows;
  // worst over parameter triples of (max_f ratio / min_f ratio), ratios
  // taken between each pair of pairs
  double worst_spread = 1.0;
  std::string worst_param;
};

EquivalenceReport equivalence_experiment(const std::vector<LPPair>& pairs,
                                         const std::vector<NamedFunction>& bank,
                                         const std::vector<BesovParams>& params,
                                         int J);

struct DecayOptions {
  std::vector<double> ts;
  // evaluate ||g * D_t f||_inf as t^Q ||f~ * D_{1/t} g~||_inf (an exact
  // identity); keeps the dilated factor resolvable when t > 1 shrinks f
  // below the grid spacing, which on anisotropic layers happens fast
  bool reflected = false;
  double floor = 1e-13;   // drop sweep points below this before fitting
};

struct DecayResult {
  std::vector<double> ts, norms;
  double slope = 0;   // least-squares fit of log norm against log t
  int used = 0;
};

// ||g * D_t f||_inf over the sweep.
DecayResult decay_slope_experiment(const GridFunction& f, const GridFunction& g,
                                   const DecayOptions& opts);

}  // namespace strata
