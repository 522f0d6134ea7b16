#pragma once
// The sub-Laplacian L = -sum_{i<l} Y_i^2 discretized on a grid, and the
// functional calculus g(L) applied to the lattice delta to produce
// convolution kernels.
//
// Discretization: each -Y_i^2 is assembled as the Gram form
// (B_+^T B_+ + B_-^T B_-)/2 with one-sided differences B_pm and zero
// extension outside the box.  Two realizations of B_pm:
//
//  - flow scheme: B_pm f (x) = (f(x . (pm h_i e_i)) - f(x)) / h_i, differencing
//    along the group flow of Y_i.  Exact left invariance on the lattice, so
//    spectral_kernel output convolves back to the operator with no O(h^2)
//    commutator defect.  Requires every flow step to land on a lattice node
//    (on H1: h_3 divides h^2/2); chosen automatically when it does.
//  - axis scheme: B_pm = sum_k c_k(x) D_k^pm, coordinate differences weighted
//    by the field coefficients.  Works on any grid; left-invariant only up to
//    O(h^2).
//
// Both are exactly symmetric positive semi-definite and second-order
// consistent on step <= 2 groups, where the coefficients c_k never depend on
// the differenced variables.  Step-3 groups are rejected: their fields pick
// up coefficients depending on the differenced variables and the axis scheme
// loses exactness (and their flow steps leave any fixed lattice).
//
// Calculus: grids up to opts.dense_limit nodes get a full symmetric
// eigendecomposition (LAPACK dsyevd, cacheable on disk); larger grids use a
// Chebyshev expansion of ghat on [0, lambda_max] driven by sparse matvecs,
// with the degree chosen adaptively from the coefficient tail.

#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "strata/grid.hpp"

namespace strata {

// Polynomial in the coordinates, sum of monomial terms.
struct Poly {
  struct Term {
    std::vector<int> exps;
    double c;
  };
  std::vector<Term> terms;
  double eval(const double* x) const;
  bool is_zero() const { return terms.empty(); }
  bool depends_on(int axis) const;
};

// Left-invariant vector field Y_i = sum_k c^i_k(x) d/dx_k in exponential
// coordinates; c^i_k(x) = delta_ik + [x, e_i]_k / 2 + [x, [x, e_i]]_k / 12.
struct FirstOrderField {
  int index = 0;
  std::vector<Poly> coeffs;   // one per coordinate
};
FirstOrderField left_invariant_field(const StratifiedGroup& g, int i);

enum class SpectralMode { Auto, Dense, Chebyshev };

struct SpectralOptions {
  SpectralMode mode = SpectralMode::Auto;
  std::size_t dense_limit = 20000;
  double cheb_tol = 1e-9;
  int cheb_max_degree = 20000;
  std::filesystem::path cache_dir;   // empty: STRATA_CACHE_DIR env or no cache
  bool use_cache = true;             // false: recompute (and refresh the cache)
};

class SpectralModel {
public:
  const GridSpec& spec() const { return spec_; }
  SpectralMode mode() const { return mode_; }
  // "flow-gram" when the grid admits exact lattice flows, else "gram"
  const char* scheme() const { return flow_ ? "flow-gram" : "gram"; }
  double lambda_max() const { return lambda_max_; }
  // Bottom of the discrete spectrum: exact in dense mode, a Rayleigh-quotient
  // overestimate (heat-damped power iteration) in Chebyshev mode.  Multiplier
  // values below this are never sampled by an eigenvalue, up to the estimate's
  // slack; callers that exploit that should keep a safety factor.
  double lambda_floor() const { return lambda_floor_; }
  std::size_t nonzeros() const { return vals_.size(); }
  std::span<const double> eigenvalues() const;   // dense mode only

  // Kernel of ghat(L): ghat(L) applied to the lattice delta (1/vol at the
  // origin node).  ghat is evaluated on [0, lambda_max].
  GridFunction spectral_kernel(const std::function<double(double)>& ghat) const;
  GridFunction heat_kernel(double t) const;

  // ghat(L) v for a grid function v.
  GridFunction apply(const std::function<double(double)>& ghat,
                     const GridFunction& v) const;

  // y = A x (sparse matvec with the assembled matrix)
  void matvec(const double* x, double* y) const;
  void matvec(const cplx* x, cplx* y) const;

  bool loaded_from_cache() const { return from_cache_; }

private:
  friend SpectralModel build_sublaplacian(const GridSpec&, int, const SpectralOptions&);
  int cheb_degree(const std::function<double(double)>& ghat,
                  std::vector<double>& coeff) const;

  GridSpec spec_;
  SpectralMode mode_ = SpectralMode::Dense;
  bool flow_ = false;
  double lambda_max_ = 0;
  double lambda_floor_ = 0;
  bool from_cache_ = false;
  // CSR, both triangles stored
  std::vector<std::size_t> row_ptr_;
  std::vector<int> col_;
  std::vector<double> vals_;
  // dense mode
  std::vector<double> eigval_;
  std::vector<double> eigvec_;   // column-major, column j = eigenvector j
  // chebyshev mode
  double cheb_tol_ = 1e-9;
  int cheb_max_degree_ = 20000;
};

// l must equal the dimension of the first layer.
SpectralModel build_sublaplacian(const GridSpec& spec, int l,
                                 const SpectralOptions& opts = {});

}  // namespace strata
