#include "strata/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace strata {

double Poly::eval(const double* x) const {
  double s = 0;
  for (const auto& t : terms) {
    double m = t.c;
    for (size_t a = 0; a < t.exps.size(); ++a)
      for (int e = 0; e < t.exps[a]; ++e) m *= x[a];
    s += m;
  }
  return s;
}

bool Poly::depends_on(int axis) const {
  for (const auto& t : terms)
    if (t.exps[axis] > 0) return true;
  return false;
}

FirstOrderField left_invariant_field(const StratifiedGroup& g, int i) {
  const int n = g.dim();
  if (i < 0 || i >= n)
    throw std::invalid_argument("left_invariant_field: index out of range");
  // accumulate monomial -> coefficient per component
  std::vector<std::map<std::vector<int>, double>> acc(n);
  std::vector<int> zero(n, 0);
  acc[i][zero] = 1.0;
  // [x, e_i]_k / 2 = sum_j x_j c_{jik} / 2
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double c = g.structure_constant(j, i, k);
      if (c == 0.0) continue;
      auto mono = zero;
      mono[j] = 1;
      acc[k][mono] += 0.5 * c;
    }
  // [x, [x, e_i]]_k / 12 = sum_{j,l,m} x_j x_l c_{lim} c_{jmk} / 12
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      double clim = g.structure_constant(l, i, m);
      if (clim == 0.0) continue;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double cjmk = g.structure_constant(j, m, k);
          if (cjmk == 0.0) continue;
          auto mono = zero;
          mono[j] += 1;
          mono[l] += 1;
          acc[k][mono] += clim * cjmk / 12.0;
        }
    }
  FirstOrderField f;
  f.index = i;
  f.coeffs.resize(n);
  for (int k = 0; k < n; ++k)
    for (auto& [mono, c] : acc[k])
      if (c != 0.0) f.coeffs[k].terms.push_back({mono, c});
  return f;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string model_key(const GridSpec& s, int l, bool flow) {
  std::ostringstream os;
  os << "scheme=" << (flow ? "flow-gram-v1" : "gram-v1")
     << ";group=" << s.group.name() << ";layers=";
  for (int i = 0; i < s.group.dim(); ++i) os << s.group.layer(i) << ",";
  os << ";brackets=";
  for (const auto& t : s.group.bracket_terms()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d/%d/%d/%.17g,", t.i, t.j, t.k, t.c);
    os << buf;
  }
  os << ";box=";
  for (double w : s.half_widths) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g,", w);
    os << buf;
  }
  os << ";points=";
  for (int p : s.points) os << p << ",";
  os << ";l=" << l;
  return os.str();
}

struct Triplet { std::size_t row; std::size_t col; double v; };

// True when the grid is compatible with exact lattice flows.
bool assemble(const GridSpec& s, int l, std::vector<std::size_t>& row_ptr,
              std::vector<int>& col, std::vector<double>& vals) {
  const StratifiedGroup& G = s.group;
  const int n = G.dim();
  if (l != G.first_layer_dim())
    throw std::invalid_argument(
        "build_sublaplacian: l must equal the first-layer dimension (" +
        std::to_string(G.first_layer_dim()) + ")");
  if (G.step() > 2)
    throw std::invalid_argument(
        "build_sublaplacian: step-3 groups are not supported; the compact "
        "Gram scheme requires coefficients independent of the differenced "
        "variables, which fails beyond step 2");

  struct AxisTerm { int axis; Poly coeff; };
  struct FieldData { std::vector<AxisTerm> active; };
  std::vector<FieldData> fields(l);
  for (int i = 0; i < l; ++i) {
    FirstOrderField f = left_invariant_field(G, i);
    for (int k = 0; k < n; ++k)
      if (!f.coeffs[k].is_zero())
        fields[i].active.push_back({k, f.coeffs[k]});
    for (const auto& a : fields[i].active)
      for (const auto& b : fields[i].active)
        if (a.coeff.depends_on(b.axis))
          throw std::runtime_error(
              "build_sublaplacian: coefficient of Y_" + std::to_string(i + 1) +
              " along axis " + std::to_string(a.axis + 1) +
              " depends on a differenced variable");
  }

  // Flow scheme eligibility: the step x . (pm h_i e_i) must move every
  // bracket axis by a whole number of nodes at every lattice point.  The
  // coefficients are affine in x on step-2 groups, so it is enough that one
  // lattice move changes each displacement by an integer and that the
  // displacement is an integer at the grid corner.
  bool flow = G.step() == 2;
  auto near_int = [](double v) {
    return std::abs(v - std::nearbyint(v)) < 1e-9 * std::max(1.0, std::abs(v));
  };
  for (int i = 0; flow && i < l; ++i) {
    const double hi = s.spacing[i];
    for (const auto& a : fields[i].active) {
      if (a.axis == i) continue;   // unit step along its own axis
      double corner = 0;
      for (const auto& t : a.coeff.terms) {
        int deg = 0, var = -1;
        for (std::size_t j = 0; j < t.exps.size(); ++j) {
          deg += t.exps[j];
          if (t.exps[j] > 0) var = static_cast<int>(j);
        }
        if (deg > 1) { flow = false; break; }
        if (deg == 1) {
          if (!near_int(hi * t.c * s.spacing[var] / s.spacing[a.axis]))
            flow = false;
          corner += t.c * s.coord(var, 0);
        } else {
          corner += t.c;
        }
      }
      if (!near_int(hi * corner / s.spacing[a.axis])) flow = false;
      if (!flow) break;
    }
  }

  const std::size_t M = s.total_nodes;
  std::vector<Triplet> trip;
  std::size_t per_node = 0;
  for (const auto& f : fields)
    per_node += flow ? 8
                     : 3 * f.active.size() +
                           7 * f.active.size() * (f.active.size() - 1) / 2;
  trip.reserve(M * per_node);

  std::vector<double> x(n);
  std::vector<int> idx(n);
  for (std::size_t m = 0; m < M; ++m) {
    {
      std::size_t rem = m;
      for (int a = 0; a < n; ++a) {
        idx[a] = static_cast<int>(rem / s.strides[a]);
        rem %= s.strides[a];
        x[a] = s.coord(a, idx[a]);
      }
    }
    auto push = [&](int da_axis1, int d1, int da_axis2, int d2, double v) {
      // neighbour at m shifted by d1 along axis1 and d2 along axis2
      if (d1 != 0) {
        int t = idx[da_axis1] + d1;
        if (t < 0 || t >= s.points[da_axis1]) return;
      }
      if (d2 != 0) {
        int t = idx[da_axis2] + d2;
        if (t < 0 || t >= s.points[da_axis2]) return;
      }
      std::size_t c = m;
      c += static_cast<std::size_t>(static_cast<long long>(s.strides[da_axis1]) * d1);
      c += static_cast<std::size_t>(static_cast<long long>(s.strides[da_axis2]) * d2);
      trip.push_back({m, c, v});
    };
    if (flow) {
      for (int i = 0; i < l; ++i) {
        const double hi = s.spacing[i];
        const double w = 0.5 / (hi * hi);
        for (int sg = -1; sg <= 1; sg += 2) {
          // target node x . (sg h_i e_i); each axis moves sg * h_i * c_a(x)
          long long c = static_cast<long long>(m);
          bool inside = true;
          for (const auto& a : fields[i].active) {
            const long long d = std::llround(
                hi * a.coeff.eval(x.data()) / s.spacing[a.axis]);
            const long long t = idx[a.axis] + sg * d;
            if (t < 0 || t >= s.points[a.axis]) { inside = false; break; }
            c += static_cast<long long>(s.strides[a.axis]) * sg * d;
          }
          // ||B f||^2 contributes (f(target) - f(x))^2 w; the target value
          // is zero when the flow exits the box
          trip.push_back({m, m, w});
          if (inside) {
            const std::size_t cc = static_cast<std::size_t>(c);
            trip.push_back({cc, cc, w});
            trip.push_back({m, cc, -w});
            trip.push_back({cc, m, -w});
          }
        }
      }
      continue;
    }
    for (const auto& f : fields) {
      const auto& act = f.active;
      for (size_t u = 0; u < act.size(); ++u) {
        const int k = act[u].axis;
        const double ck = act[u].coeff.eval(x.data());
        const double w = ck * ck / (s.spacing[k] * s.spacing[k]);
        // the exact Gram diagonal loses w/2 per neighbour outside the box
        double diag = 2 * w;
        if (idx[k] + 1 >= s.points[k]) diag -= 0.5 * w;
        if (idx[k] == 0) diag -= 0.5 * w;
        push(k, 0, k, 0, diag);
        push(k, +1, k, 0, -w);
        push(k, -1, k, 0, -w);
        for (size_t v = u + 1; v < act.size(); ++v) {
          const int q = act[v].axis;
          const double wq = ck * act[v].coeff.eval(x.data()) /
                            (s.spacing[k] * s.spacing[q]);
          push(k, 0, q, 0, 2 * wq);
          push(k, +1, q, 0, -wq);
          push(k, -1, q, 0, -wq);
          push(q, +1, k, 0, -wq);
          push(q, -1, k, 0, -wq);
          push(k, +1, q, -1, +wq);
          push(k, -1, q, +1, +wq);
        }
      }
    }
  }

  std::sort(trip.begin(), trip.end(), [&](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr.assign(M + 1, 0);
  col.clear();
  vals.clear();
  col.reserve(trip.size());
  vals.reserve(trip.size());
  std::size_t p = 0;
  for (std::size_t r = 0; r < M; ++r) {
    while (p < trip.size() && trip[p].row == r) {
      std::size_t c = trip[p].col;
      double v = 0;
      while (p < trip.size() && trip[p].row == r && trip[p].col == c)
        v += trip[p++].v;
      col.push_back(static_cast<int>(c));
      vals.push_back(v);
    }
    row_ptr[r + 1] = col.size();
  }
  return flow;
}

}  // namespace

void SpectralModel::matvec(const double* x, double* y) const {
  const std::size_t M = spec_.total_nodes;
  for (std::size_t r = 0; r < M; ++r) {
    double acc = 0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      acc += vals_[p] * x[col_[p]];
    y[r] = acc;
  }
}

void SpectralModel::matvec(const cplx* x, cplx* y) const {
  const std::size_t M = spec_.total_nodes;
  for (std::size_t r = 0; r < M; ++r) {
    cplx acc(0);
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      acc += vals_[p] * x[col_[p]];
    y[r] = acc;
  }
}

std::span<const double> SpectralModel::eigenvalues() const {
  if (mode_ != SpectralMode::Dense)
    throw std::logic_error("eigenvalues(): model is not in dense mode");
  return eigval_;
}

namespace {
constexpr const char* kEigMagic = "STRATAEIG1";

bool load_eig_cache(const std::filesystem::path& file, const std::string& key,
                    std::size_t M, std::vector<double>& w, std::vector<double>& V) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return false;
  std::string magic, stored;
  std::getline(in, magic);
  if (magic != kEigMagic) return false;
  std::getline(in, stored);
  if (stored != key) return false;
  std::uint64_t m = 0;
  in.read(reinterpret_cast<char*>(&m), sizeof m);
  if (!in || m != M) return false;
  w.resize(M);
  V.resize(M * M);
  in.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(M * 8));
  in.read(reinterpret_cast<char*>(V.data()),
          static_cast<std::streamsize>(M * M * 8));
  return static_cast<bool>(in);
}

void save_eig_cache(const std::filesystem::path& file, const std::string& key,
                    const std::vector<double>& w, const std::vector<double>& V) {
  std::filesystem::create_directories(file.parent_path());
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return;   // caching is best-effort
    std::uint64_t m = w.size();
    out << kEigMagic << "\n" << key << "\n";
    out.write(reinterpret_cast<const char*>(&m), sizeof m);
    out.write(reinterpret_cast<const char*>(w.data()),
              static_cast<std::streamsize>(w.size() * 8));
    out.write(reinterpret_cast<const char*>(V.data()),
              static_cast<std::streamsize>(V.size() * 8));
    if (!out) return;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
}
}  // namespace

SpectralModel build_sublaplacian(const GridSpec& spec, int l,
                                 const SpectralOptions& opts) {
  SpectralModel m;
  m.spec_ = spec;
  m.cheb_tol_ = opts.cheb_tol;
  m.cheb_max_degree_ = opts.cheb_max_degree;
  m.flow_ = assemble(spec, l, m.row_ptr_, m.col_, m.vals_);

  const std::size_t M = spec.total_nodes;
  bool dense = opts.mode == SpectralMode::Dense ||
               (opts.mode == SpectralMode::Auto && M <= opts.dense_limit);
  m.mode_ = dense ? SpectralMode::Dense : SpectralMode::Chebyshev;

  if (!dense) {
    // Gershgorin upper bound: rigorous domain for the Chebyshev expansion
    double g = 0;
    for (std::size_t r = 0; r < M; ++r) {
      double s = 0;
      for (std::size_t p = m.row_ptr_[r]; p < m.row_ptr_[r + 1]; ++p)
        s += std::abs(m.vals_[p]);
      g = std::max(g, s);
    }
    m.lambda_max_ = std::max(g, 1e-300);

    // Spectral floor: damp the flat vector with the heat semigroup at an
    // adaptively lengthening time, then take the Rayleigh quotient.  Every
    // completed round is an overestimate of the bottom eigenvalue; three
    // rounds get within a small factor, which is all lambda_floor() promises.
    // The bootstrap runs under its own degree budget -- the user cap governs
    // user multipliers -- and a round too sharp for it stops the refinement.
    const int user_cap = m.cheb_max_degree_;
    m.cheb_max_degree_ = std::max(user_cap, 4096);
    std::vector<double> v(M, 1.0), av(M);
    double lam = m.lambda_max_;
    for (int round = 0; round < 3; ++round) {
      const double t = 1.0 / lam;
      std::vector<double> c;
      int K = 0;
      try {
        K = m.cheb_degree([t](double xi) { return std::exp(-t * xi); }, c);
      } catch (const std::runtime_error&) {
        break;
      }
      std::vector<double> w0 = v, w1(M), tmp(M), acc(M);
      for (std::size_t i = 0; i < M; ++i) acc[i] = 0.5 * c[0] * w0[i];
      if (K > 1) {
        m.matvec(w0.data(), w1.data());
        const double sc = 2.0 / m.lambda_max_;
        for (std::size_t i = 0; i < M; ++i) w1[i] = sc * w1[i] - w0[i];
        for (std::size_t i = 0; i < M; ++i) acc[i] += c[1] * w1[i];
        for (int j = 2; j < K; ++j) {
          m.matvec(w1.data(), tmp.data());
          for (std::size_t i = 0; i < M; ++i) {
            double t2 = 2.0 * (sc * tmp[i] - w1[i]) - w0[i];
            w0[i] = w1[i];
            w1[i] = t2;
            acc[i] += c[j] * t2;
          }
        }
      }
      double nn = 0;
      for (double a : acc) nn += a * a;
      nn = std::sqrt(nn);
      if (!(nn > 0)) break;   // semigroup annihilated the start vector
      for (std::size_t i = 0; i < M; ++i) v[i] = acc[i] / nn;
      m.matvec(v.data(), av.data());
      double rq = 0;
      for (std::size_t i = 0; i < M; ++i) rq += v[i] * av[i];
      lam = std::max(rq, m.lambda_max_ * 1e-14);
    }
    m.cheb_max_degree_ = user_cap;
    m.lambda_floor_ = lam;
    return m;
  }

  std::filesystem::path cache_dir = opts.cache_dir;
  if (cache_dir.empty()) {
    if (const char* env = std::getenv("STRATA_CACHE_DIR")) cache_dir = env;
  }
  const std::string key = model_key(spec, l, m.flow_);
  std::filesystem::path cache_file;
  if (!cache_dir.empty()) {
    char name[48];
    std::snprintf(name, sizeof name, "eig-%016llx.bin",
                  static_cast<unsigned long long>(fnv1a(key)));
    cache_file = cache_dir / name;
  }
  if (!cache_file.empty() && opts.use_cache &&
      load_eig_cache(cache_file, key, M, m.eigval_, m.eigvec_)) {
    m.from_cache_ = true;
  } else {
    m.eigvec_.assign(M * M, 0.0);
    for (std::size_t r = 0; r < M; ++r)
      for (std::size_t p = m.row_ptr_[r]; p < m.row_ptr_[r + 1]; ++p)
        m.eigvec_[static_cast<std::size_t>(m.col_[p]) * M + r] = m.vals_[p];
    m.eigval_.assign(M, 0.0);
    lapack_int info = LAPACKE_dsyevd(
        LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(M),
        m.eigvec_.data(), static_cast<lapack_int>(M), m.eigval_.data());
    if (info != 0)
      throw std::runtime_error("dsyevd failed with info=" + std::to_string(info));
    if (!cache_file.empty()) save_eig_cache(cache_file, key, m.eigval_, m.eigvec_);
  }
  const double lmax = std::max(1.0, m.eigval_.back());
  if (m.eigval_.front() < -1e-9 * lmax)
    throw std::runtime_error("sub-Laplacian has a significantly negative "
                             "eigenvalue; discretization is inconsistent");
  for (double& w : m.eigval_) w = std::max(w, 0.0);
  m.lambda_max_ = m.eigval_.back();
  m.lambda_floor_ = m.eigval_.front();
  return m;
}

int SpectralModel::cheb_degree(const std::function<double(double)>& ghat,
                               std::vector<double>& coeff) const {
  int K = std::min(256, cheb_max_degree_);
  for (;;) {
    const int Kq = 2 * K;
    coeff.assign(K, 0.0);
    double fmax = 0;
    for (int q = 0; q < Kq; ++q) {
      const double theta = M_PI * (q + 0.5) / Kq;
      const double u = std::cos(theta);
      const double xi = 0.5 * (u + 1.0) * lambda_max_;
      const double fv = ghat(xi);
      if (!std::isfinite(fv))
        throw std::runtime_error("spectral multiplier returned a non-finite value");
      fmax = std::max(fmax, std::abs(fv));
      double t0 = 1.0, t1 = u;
      coeff[0] += fv;
      if (K > 1) coeff[1] += fv * u;
      for (int j = 2; j < K; ++j) {
        double t2 = 2 * u * t1 - t0;
        coeff[j] += fv * t2;
        t0 = t1;
        t1 = t2;
      }
    }
    for (double& c : coeff) c *= 2.0 / Kq;
    if (fmax == 0) {
      coeff.assign(1, 0.0);
      return 1;
    }
    double tail = 0;
    for (int j = std::max(1, K - 16); j < K; ++j)
      tail = std::max(tail, std::abs(coeff[j]));
    if (tail <= cheb_tol_ * fmax) {
      int keep = K;
      while (keep > 1 && std::abs(coeff[keep - 1]) <= 0.1 * cheb_tol_ * fmax)
        --keep;
      coeff.resize(keep);
      return keep;
    }
    if (K >= cheb_max_degree_)
      throw std::runtime_error(
          "Chebyshev expansion did not converge at the degree cap; the "
          "multiplier is too sharp for this spectral range");
    K = std::min(2 * K, cheb_max_degree_);
  }
}

GridFunction SpectralModel::spectral_kernel(
    const std::function<double(double)>& ghat) const {
  const std::size_t M = spec_.total_nodes;
  const std::size_t o = spec_.origin_index();
  const double inv_vol = 1.0 / spec_.cell_volume;
  GridFunction out(spec_);

  if (mode_ == SpectralMode::Dense) {
    std::vector<double> y(M, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
      const double g = ghat(eigval_[j]);
      if (!std::isfinite(g))
        throw std::runtime_error("spectral multiplier returned a non-finite value");
      if (g == 0.0) continue;
      const double c = g * eigvec_[j * M + o] * inv_vol;
      if (c == 0.0) continue;
      const double* vj = eigvec_.data() + j * M;
      for (std::size_t i = 0; i < M; ++i) y[i] += c * vj[i];
    }
    for (std::size_t i = 0; i < M; ++i) out[i] = y[i];
    return out;
  }

  std::vector<double> c;
  const int K = cheb_degree(ghat, c);
  std::vector<double> w0(M, 0.0), w1(M), tmp(M), acc(M, 0.0);
  w0[o] = inv_vol;
  // acc = c0/2 T0 + c1 T1 + ...
  for (std::size_t i = 0; i < M; ++i) acc[i] = 0.5 * c[0] * w0[i];
  if (K > 1) {
    matvec(w0.data(), w1.data());
    const double sc = 2.0 / lambda_max_;
    for (std::size_t i = 0; i < M; ++i) w1[i] = sc * w1[i] - w0[i];
    for (std::size_t i = 0; i < M; ++i) acc[i] += c[1] * w1[i];
    for (int j = 2; j < K; ++j) {
      matvec(w1.data(), tmp.data());
      for (std::size_t i = 0; i < M; ++i) {
        double t2 = 2.0 * (sc * tmp[i] - w1[i]) - w0[i];
        w0[i] = w1[i];
        w1[i] = t2;
        acc[i] += c[j] * t2;
      }
    }
  }
  for (std::size_t i = 0; i < M; ++i) out[i] = acc[i];
  return out;
}

GridFunction SpectralModel::heat_kernel(double t) const {
  if (t < 0) throw std::invalid_argument("heat_kernel: t must be >= 0");
  return spectral_kernel([t](double xi) { return std::exp(-t * xi); });
}

GridFunction SpectralModel::apply(const std::function<double(double)>& ghat,
                                  const GridFunction& v) const {
  if (!(v.spec() == spec_))
    throw std::invalid_argument("apply: grid spec mismatch");
  const std::size_t M = spec_.total_nodes;
  GridFunction out(spec_);

  if (mode_ == SpectralMode::Dense) {
    std::vector<cplx> y(M, cplx(0));
    for (std::size_t j = 0; j < M; ++j) {
      const double g = ghat(eigval_[j]);
      if (g == 0.0) continue;
      const double* vj = eigvec_.data() + j * M;
      cplx d(0);
      for (std::size_t i = 0; i < M; ++i) d += vj[i] * v[i];
      const cplx cj = g * d;
      for (std::size_t i = 0; i < M; ++i) y[i] += cj * vj[i];
    }
    for (std::size_t i = 0; i < M; ++i) out[i] = y[i];
    return out;
  }

  std::vector<double> c;
  const int K = cheb_degree(ghat, c);
  std::vector<cplx> w0(v.values().begin(), v.values().end()), w1(M), tmp(M),
      acc(M);
  for (std::size_t i = 0; i < M; ++i) acc[i] = 0.5 * c[0] * w0[i];
  if (K > 1) {
    matvec(w0.data(), w1.data());
    const double sc = 2.0 / lambda_max_;
    for (std::size_t i = 0; i < M; ++i) w1[i] = sc * w1[i] - w0[i];
    for (std::size_t i = 0; i < M; ++i) acc[i] += c[1] * w1[i];
    for (int j = 2; j < K; ++j) {
      matvec(w1.data(), tmp.data());
      for (std::size_t i = 0; i < M; ++i) {
        cplx t2 = 2.0 * (sc * tmp[i] - w1[i]) - w0[i];
        w0[i] = w1[i];
        w1[i] = t2;
        acc[i] += c[j] * t2;
      }
    }
  }
  for (std::size_t i = 0; i < M; ++i) out[i] = acc[i];
  return out;
}

}  // namespace strata
