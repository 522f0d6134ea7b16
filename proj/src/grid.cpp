#include "strata/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strata {

std::size_t GridSpec::origin_index() const {
  std::size_t idx = 0;
  for (size_t a = 0; a < points.size(); ++a)
    idx += strides[a] * static_cast<std::size_t>((points[a] - 1) / 2);
  return idx;
}

void GridSpec::node_coords(std::size_t flat, double* out) const {
  for (size_t a = 0; a < points.size(); ++a) {
    int t = static_cast<int>(flat / strides[a]);
    flat %= strides[a];
    out[a] = coord(static_cast<int>(a), t);
  }
}

GridSpec make_grid(StratifiedGroup group, std::vector<double> half_widths,
                   std::vector<int> points) {
  GridSpec s;
  const int n = group.dim();
  if (static_cast<int>(half_widths.size()) != n ||
      static_cast<int>(points.size()) != n)
    throw std::invalid_argument("make_grid: need one half-width and point "
                                "count per coordinate");
  for (int i = 0; i < n; ++i) {
    if (!(half_widths[i] > 0))
      throw std::invalid_argument("make_grid: half-widths must be positive");
    if (points[i] < 3 || points[i] % 2 == 0)
      throw std::invalid_argument("make_grid: point counts must be odd and >= 3");
  }
  s.group = std::move(group);
  s.half_widths = std::move(half_widths);
  s.points = std::move(points);
  s.spacing.resize(n);
  s.cell_volume = 1.0;
  for (int i = 0; i < n; ++i) {
    s.spacing[i] = 2.0 * s.half_widths[i] / (s.points[i] - 1);
    s.cell_volume *= s.spacing[i];
  }
  s.strides.assign(n, 1);
  s.total_nodes = 1;
  for (int i = n - 1; i >= 0; --i) {
    s.strides[i] = s.total_nodes;
    s.total_nodes *= static_cast<std::size_t>(s.points[i]);
  }
  return s;
}

GridFunction::GridFunction(GridSpec spec, std::vector<cplx> values)
    : spec_(std::move(spec)), values_(std::move(values)) {
  if (values_.size() != spec_.total_nodes)
    throw std::invalid_argument("GridFunction: value count does not match grid");
}

bool GridFunction::real_valued(double tol) const {
  for (const auto& v : values_)
    if (std::abs(v.imag()) > tol) return false;
  return true;
}

GridFunction sample(const GridSpec& spec,
                    const std::function<cplx(const std::vector<double>&)>& f) {
  GridFunction out(spec);
  std::vector<double> x(spec.points.size());
  for (std::size_t i = 0; i < spec.total_nodes; ++i) {
    spec.node_coords(i, x.data());
    cplx v = f(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("sample: function value is not finite");
    out[i] = v;
  }
  return out;
}

GridFunction sample_real(const GridSpec& spec,
                         const std::function<double(const std::vector<double>&)>& f) {
  return sample(spec, [&](const std::vector<double>& x) { return cplx(f(x)); });
}

cplx interpolate(const GridFunction& f, const double* point) {
  const GridSpec& s = f.spec();
  const int n = static_cast<int>(s.points.size());
  int base[kMaxDim];
  double frac[kMaxDim];
  for (int a = 0; a < n; ++a) {
    double u = point[a] / s.spacing[a] + (s.points[a] - 1) / 2;
    double fl = std::floor(u);
    base[a] = static_cast<int>(fl);
    frac[a] = u - fl;
    if (base[a] < -1 || base[a] > s.points[a] - 1) return cplx(0);
  }
  cplx acc(0);
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    std::size_t idx = 0;
    bool inside = true;
    for (int a = 0; a < n; ++a) {
      int t = base[a] + ((corner >> a) & 1);
      double wa = ((corner >> a) & 1) ? frac[a] : 1.0 - frac[a];
      if (wa == 0.0) { inside = false; break; }
      if (t < 0 || t >= s.points[a]) { inside = false; break; }
      w *= wa;
      idx += s.strides[a] * static_cast<std::size_t>(t);
    }
    if (inside) acc += w * f[idx];
  }
  return acc;
}

GridFunction dilate(double t, const GridFunction& f) {
  if (!(t > 0)) throw std::invalid_argument("dilate: t must be positive");
  const GridSpec& s = f.spec();
  const int n = static_cast<int>(s.points.size());
  GridFunction out(s);
  const double scale = std::pow(t, s.group.hom_dim());
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < s.total_nodes; ++i) {
    s.node_coords(i, x.data());
    dilate_point_into(s.group, t, x.data(), y.data());
    out[i] = scale * interpolate(f, y.data());
  }
  return out;
}

namespace {
std::size_t reversed_index(const GridSpec& s, std::size_t flat) {
  std::size_t out = 0;
  for (size_t a = 0; a < s.points.size(); ++a) {
    int t = static_cast<int>(flat / s.strides[a]);
    flat %= s.strides[a];
    out += s.strides[a] * static_cast<std::size_t>(s.points[a] - 1 - t);
  }
  return out;
}
}  // namespace

GridFunction involution(const GridFunction& f) {
  GridFunction out(f.spec());
  for (std::size_t i = 0; i < f.size(); ++i) out[reversed_index(f.spec(), i)] = f[i];
  return out;
}

GridFunction star(const GridFunction& f) {
  GridFunction out(f.spec());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[reversed_index(f.spec(), i)] = std::conj(f[i]);
  return out;
}

double lp_norm(const GridFunction& f, double p) {
  if (p == p_inf) {
    double m = 0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1)) throw std::invalid_argument("lp_norm: need p >= 1 or infinity");
  // fixed-size chunks with a serial combine keep the reduction order
  // independent of any worker count
  constexpr std::size_t chunk = 8192;
  double total = 0;
  const auto vals = f.values();
  for (std::size_t lo = 0; lo < vals.size(); lo += chunk) {
    double part = 0;
    std::size_t hi = std::min(vals.size(), lo + chunk);
    if (p == 2.0) {
      for (std::size_t i = lo; i < hi; ++i) part += std::norm(vals[i]);
    } else if (p == 1.0) {
      for (std::size_t i = lo; i < hi; ++i) part += std::abs(vals[i]);
    } else {
      for (std::size_t i = lo; i < hi; ++i) part += std::pow(std::abs(vals[i]), p);
    }
    total += part;
  }
  return std::pow(f.spec().cell_volume * total, 1.0 / p);
}

cplx moment(const GridFunction& f, const MultiIndex& I) {
  const GridSpec& s = f.spec();
  if (static_cast<int>(I.exps.size()) != s.group.dim())
    throw std::invalid_argument("moment: multi-index dimension mismatch");
  constexpr std::size_t chunk = 8192;
  cplx total(0);
  std::vector<double> x(s.points.size());
  for (std::size_t lo = 0; lo < s.total_nodes; lo += chunk) {
    cplx part(0);
    std::size_t hi = std::min(s.total_nodes, lo + chunk);
    for (std::size_t i = lo; i < hi; ++i) {
      s.node_coords(i, x.data());
      double mono = 1.0;
      for (size_t a = 0; a < x.size(); ++a)
        for (int e = 0; e < I.exps[a]; ++e) mono *= x[a];
      part += f[i] * mono;
    }
    total += part;
  }
  return s.cell_volume * total;
}

int vanishing_moment_order(const GridFunction& f, int max_order, double tol) {
  if (max_order < 1)
    throw std::invalid_argument("vanishing_moment_order: max_order >= 1");
  const GridSpec& s = f.spec();
  const int n = s.group.dim();
  double R = 0;  // max hom-norm over the box corners
  std::vector<double> corner(n);
  for (int c = 0; c < (1 << n); ++c) {
    for (int a = 0; a < n; ++a)
      corner[a] = ((c >> a) & 1) ? s.half_widths[a] : -s.half_widths[a];
    R = std::max(R, hom_norm(s.group, corner));
  }
  const double l1 = lp_norm(f, 1.0);
  if (l1 == 0) return max_order;
  auto basis = poly_basis(s.group, max_order - 1);
  int best = 0;
  for (int N = 1; N <= max_order; ++N) {
    bool ok = true;
    for (const auto& I : basis) {
      int d = hom_degree(s.group, I);
      if (d != N - 1) continue;   // lower degrees checked in earlier rounds
      if (std::abs(moment(f, I)) > tol * l1 * std::pow(R, d)) { ok = false; break; }
    }
    if (!ok) break;
    best = N;
  }
  return best;
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  if (!(a.spec() == b.spec()))
    throw std::invalid_argument("grid function addition: spec mismatch");
  GridFunction out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  if (!(a.spec() == b.spec()))
    throw std::invalid_argument("grid function subtraction: spec mismatch");
  GridFunction out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

GridFunction operator*(cplx s, const GridFunction& a) {
  GridFunction out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
  return out;
}

}  // namespace strata
