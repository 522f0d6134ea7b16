#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "strata/grid.hpp"

// Group convolution (f * g)(x) = vol * sum_y f(y) g(y^{-1} x).
//
// Generic path: quadrature over y with g multilinearly interpolated at
// cbh(-y, x), zero outside the box.  O(M^2) — fine for small grids and any
// step, and the reference the fast paths are tested against.
//
// Fast path (step <= 2): with the basis sorted by layer, y^{-1} x splits into
// exact on-grid offsets along layer-1 axes and a pure translation by
// s_k(x,y) = -1/2 [y, x]_k along each layer-2 axis.  The layer-2 sum is then
// a 1-D linear convolution per layer-1 index pair, and translating by a
// non-integer amount with linear interpolation is, after zero-padding, the
// Fourier multiplier ((1-a) + a e^{2 pi i t/P}) e^{2 pi i t n0/P} with
// s/h = n0 + a.  This reproduces the generic quadrature to round-off while
// costing O(B1^2 P) instead of O(M^2).  Abelian grids are the degenerate
// case: every axis is transformed and the shift is zero.

namespace strata {

namespace {

std::mutex fftw_plan_mutex;

// smallest 5-smooth integer >= n (FFTW likes these)
int next_fast_size(int n) {
  for (int s = n;; ++s) {
    int r = s;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return s;
  }
}

struct PairTerm { int i, j; double coeff; };   // s_k += coeff * y_i * x_j

GridFunction convolve_fft(const GridFunction& f, const GridFunction& g) {
  const GridSpec& s = f.spec();
  const StratifiedGroup& G = s.group;
  const int n = G.dim();

  // pair axes iterate exact offsets; fft axes carry the padded transform
  std::vector<int> pair_axes, fft_axes;
  for (int a = 0; a < n; ++a)
    (G.step() >= 2 && G.layer(a) == 1 ? pair_axes : fft_axes).push_back(a);
  const int nf = static_cast<int>(fft_axes.size());

  // bilinear coefficients of the layer-2 shift, per fft axis
  std::vector<std::vector<PairTerm>> shift_terms(nf);
  std::vector<int> axis_of(n, -1);
  for (int q = 0; q < nf; ++q) axis_of[fft_axes[q]] = q;
  for (const auto& t : G.bracket_terms()) {
    if (axis_of[t.k] < 0) continue;   // abelian: no terms at all
    auto& dst = shift_terms[axis_of[t.k]];
    dst.push_back({t.i, t.j, -0.5 * t.c});
    dst.push_back({t.j, t.i, +0.5 * t.c});
  }

  std::vector<int> N(nf), C(nf), P(nf);
  std::size_t B2 = 1, B2pad = 1;
  for (int q = 0; q < nf; ++q) {
    int a = fft_axes[q];
    N[q] = s.points[a];
    C[q] = (N[q] - 1) / 2;
    double smax = 0;
    for (const auto& t : shift_terms[q])
      smax += std::abs(t.coeff) * s.half_widths[t.i] * s.half_widths[t.j];
    int S = static_cast<int>(std::ceil(smax / s.spacing[a])) + 1;
    P[q] = next_fast_size(2 * N[q] - 1 + 2 * S);
    B2 *= static_cast<std::size_t>(N[q]);
    B2pad *= static_cast<std::size_t>(P[q]);
  }
  std::size_t B1 = s.total_nodes / B2;

  // index maps between the compact rows and the padded rows
  std::vector<std::size_t> zmap(B2);
  for (std::size_t z = 0; z < B2; ++z) {
    std::size_t rem = z, padidx = 0, pstride = 1;
    for (int q = nf - 1; q >= 0; --q) {
      padidx += (rem % N[q]) * pstride;
      rem /= N[q];
      pstride *= static_cast<std::size_t>(P[q]);
    }
    zmap[z] = padidx;
  }
  // per padded flat index, the frequency index along each fft axis
  std::vector<std::vector<int>> tk(nf, std::vector<int>(B2pad));
  for (std::size_t t = 0; t < B2pad; ++t) {
    std::size_t rem = t;
    for (int q = nf - 1; q >= 0; --q) {
      tk[q][t] = static_cast<int>(rem % P[q]);
      rem /= P[q];
    }
  }
  std::vector<std::vector<cplx>> cis(nf);
  for (int q = 0; q < nf; ++q) {
    cis[q].resize(P[q]);
    for (int m = 0; m < P[q]; ++m)
      cis[q][m] = std::polar(1.0, 2.0 * M_PI * m / P[q]);
  }

  auto alloc = [&](std::size_t count) {
    return static_cast<cplx*>(fftw_malloc(sizeof(cplx) * count));
  };
  cplx* Ff = alloc(B1 * B2pad);
  cplx* Fg = alloc(B1 * B2pad);
  cplx* Facc = alloc(B1 * B2pad);
  std::memset(Ff, 0, sizeof(cplx) * B1 * B2pad);
  std::memset(Fg, 0, sizeof(cplx) * B1 * B2pad);
  std::memset(Facc, 0, sizeof(cplx) * B1 * B2pad);

  std::vector<char> f_row_live(B1, 0), g_row_live(B1, 0);
  for (std::size_t r = 0; r < B1; ++r)
    for (std::size_t z = 0; z < B2; ++z) {
      cplx fv = f[r * B2 + z], gv = g[r * B2 + z];
      if (fv != cplx(0)) { Ff[r * B2pad + zmap[z]] = fv; f_row_live[r] = 1; }
      if (gv != cplx(0)) { Fg[r * B2pad + zmap[z]] = gv; g_row_live[r] = 1; }
    }

  fftw_plan fwd_f, fwd_g, bwd;
  {
    std::scoped_lock lk(fftw_plan_mutex);
    fwd_f = fftw_plan_many_dft(nf, P.data(), static_cast<int>(B1),
                               reinterpret_cast<fftw_complex*>(Ff), nullptr, 1,
                               static_cast<int>(B2pad),
                               reinterpret_cast<fftw_complex*>(Ff), nullptr, 1,
                               static_cast<int>(B2pad), FFTW_FORWARD,
                               FFTW_ESTIMATE);
    fwd_g = fftw_plan_many_dft(nf, P.data(), static_cast<int>(B1),
                               reinterpret_cast<fftw_complex*>(Fg), nullptr, 1,
                               static_cast<int>(B2pad),
                               reinterpret_cast<fftw_complex*>(Fg), nullptr, 1,
                               static_cast<int>(B2pad), FFTW_FORWARD,
                               FFTW_ESTIMATE);
    bwd = fftw_plan_many_dft(nf, P.data(), static_cast<int>(B1),
                             reinterpret_cast<fftw_complex*>(Facc), nullptr, 1,
                             static_cast<int>(B2pad),
                             reinterpret_cast<fftw_complex*>(Facc), nullptr, 1,
                             static_cast<int>(B2pad), FFTW_BACKWARD,
                             FFTW_ESTIMATE);
  }
  fftw_execute(fwd_f);
  fftw_execute(fwd_g);

  // layer-1 bookkeeping: coordinates and multi-indices of the B1 rows
  const int np = static_cast<int>(pair_axes.size());
  std::vector<std::vector<int>> ridx(B1, std::vector<int>(np));
  std::vector<std::vector<double>> rcoord(B1, std::vector<double>(np));
  {
    std::vector<std::size_t> pstrides(np, 1);
    for (int a = np - 2; a >= 0; --a)
      pstrides[a] = pstrides[a + 1] * s.points[pair_axes[a + 1]];
    for (std::size_t r = 0; r < B1; ++r) {
      std::size_t rem = r;
      for (int a = 0; a < np; ++a) {
        ridx[r][a] = static_cast<int>(rem / pstrides[a]);
        rem %= pstrides[a];
        rcoord[r][a] = s.coord(pair_axes[a], ridx[r][a]);
      }
    }
  }

  // phase rows e^{2 pi i t k / P} built once per realized integer shift k;
  // non-integer shifts lerp between two adjacent rows
  std::vector<long long> kbase(nf);
  std::vector<std::vector<std::vector<cplx>>> rows(nf);
  for (int q = 0; q < nf; ++q) {
    int a = fft_axes[q];
    double smax = 0;
    for (const auto& t : shift_terms[q])
      smax += std::abs(t.coeff) * s.half_widths[t.i] * s.half_widths[t.j];
    const long long S = static_cast<long long>(std::ceil(smax / s.spacing[a])) + 1;
    kbase[q] = C[q] - S;
    rows[q].resize(2 * S + 2);
  }
  auto phase_row = [&](int q, long long k) -> const cplx* {
    auto& slot = rows[q][static_cast<std::size_t>(k - kbase[q])];
    if (slot.empty()) {
      const auto& cq = cis[q];
      const long long Pq = P[q];
      slot.resize(P[q]);
      for (long long t = 0; t < Pq; ++t) {
        long long r = (t * k) % Pq;
        slot[t] = cq[static_cast<std::size_t>(r < 0 ? r + Pq : r)];
      }
    }
    return slot.data();
  };

  std::vector<std::vector<cplx>> M(nf);
  for (int q = 0; q < nf; ++q) M[q].resize(P[q]);
  std::vector<const cplx*> Mp(nf);

  std::vector<double> ycoord(n, 0.0), xcoord(n, 0.0);
  for (std::size_t yr = 0; yr < B1; ++yr) {
    if (!f_row_live[yr]) continue;
    for (std::size_t gr = 0; gr < B1; ++gr) {
      if (!g_row_live[gr]) continue;
      // x_1 = y_1 + (gr - centre); skip when outside the grid
      std::size_t xr = 0;
      bool ok = true;
      {
        std::size_t stride = 1;
        for (int a = np - 1; a >= 0; --a) {
          int xi = ridx[yr][a] + ridx[gr][a] - (s.points[pair_axes[a]] - 1) / 2;
          if (xi < 0 || xi >= s.points[pair_axes[a]]) { ok = false; break; }
          xr += stride * static_cast<std::size_t>(xi);
          stride *= static_cast<std::size_t>(s.points[pair_axes[a]]);
        }
      }
      if (!ok) continue;

      for (int a = 0; a < np; ++a) {
        ycoord[pair_axes[a]] = rcoord[yr][a];
        xcoord[pair_axes[a]] = rcoord[yr][a] + rcoord[gr][a];
      }
      for (int q = 0; q < nf; ++q) {
        double sh = 0;
        for (const auto& t : shift_terms[q])
          sh += t.coeff * ycoord[t.i] * xcoord[t.j];
        double sigma = sh / s.spacing[fft_axes[q]];
        double fl = std::floor(sigma);
        double alpha = sigma - fl;
        long long k0 = C[q] + static_cast<long long>(fl);
        if (alpha < 1e-12) {
          Mp[q] = phase_row(q, k0);
        } else {
          const cplx* r0 = phase_row(q, k0);
          const cplx* r1 = phase_row(q, k0 + 1);
          for (int t = 0; t < P[q]; ++t)
            M[q][t] = (1.0 - alpha) * r0[t] + alpha * r1[t];
          Mp[q] = M[q].data();
        }
      }

      const cplx* frow = Ff + yr * B2pad;
      const cplx* grow = Fg + gr * B2pad;
      cplx* arow = Facc + xr * B2pad;
      if (nf == 1) {
        const cplx* m0 = Mp[0];
        for (std::size_t t = 0; t < B2pad; ++t)
          arow[t] += frow[t] * grow[t] * m0[t];
      } else {
        for (std::size_t t = 0; t < B2pad; ++t) {
          cplx m = Mp[0][tk[0][t]];
          for (int q = 1; q < nf; ++q) m *= Mp[q][tk[q][t]];
          arow[t] += frow[t] * grow[t] * m;
        }
      }
    }
  }

  fftw_execute(bwd);

  GridFunction out(s);
  const double scale = s.cell_volume / static_cast<double>(B2pad);
  for (std::size_t r = 0; r < B1; ++r)
    for (std::size_t z = 0; z < B2; ++z)
      out[r * B2 + z] = Facc[r * B2pad + zmap[z]] * scale;

  {
    std::scoped_lock lk(fftw_plan_mutex);
    fftw_destroy_plan(fwd_f);
    fftw_destroy_plan(fwd_g);
    fftw_destroy_plan(bwd);
  }
  fftw_free(Ff);
  fftw_free(Fg);
  fftw_free(Facc);
  return out;
}

GridFunction convolve_direct(const GridFunction& f, const GridFunction& g) {
  const GridSpec& s = f.spec();
  const int n = s.group.dim();
  GridFunction out(s);
  std::vector<double> coords(s.total_nodes * n);
  for (std::size_t i = 0; i < s.total_nodes; ++i)
    s.node_coords(i, coords.data() + i * n);

  double ny[kMaxDim], arg[kMaxDim];
  for (std::size_t xi = 0; xi < s.total_nodes; ++xi) {
    const double* x = coords.data() + xi * n;
    cplx acc(0);
    for (std::size_t yi = 0; yi < s.total_nodes; ++yi) {
      cplx fv = f[yi];
      if (fv == cplx(0)) continue;
      const double* y = coords.data() + yi * n;
      for (int a = 0; a < n; ++a) ny[a] = -y[a];
      cbh_product_into(s.group, ny, x, arg);
      acc += fv * interpolate(g, arg);
    }
    out[xi] = s.cell_volume * acc;
  }
  return out;
}

}  // namespace

GridFunction convolve(const GridFunction& f, const GridFunction& g, ConvPath path) {
  if (!(f.spec() == g.spec()))
    throw std::invalid_argument("convolve: grid spec mismatch");
  if (path == ConvPath::Direct || f.spec().group.step() > 2)
    return convolve_direct(f, g);
  return convolve_fft(f, g);
}

}  // namespace strata
