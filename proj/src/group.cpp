#include "strata/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace strata {

namespace {

// factorial of step, step <= 3
int fact(int m) { return m <= 1 ? 1 : (m == 2 ? 2 : 6); }

std::string idx3(int i, int j, int k) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << "," << k + 1 << ")";
  return os.str();
}

}  // namespace

double StratifiedGroup::structure_constant(int i, int j, int k) const {
  double sign = 1.0;
  if (i == j) return 0.0;
  if (i > j) { std::swap(i, j); sign = -1.0; }
  for (const auto& t : terms_)
    if (t.i == i && t.j == j && t.k == k) return sign * t.c;
  return 0.0;
}

void StratifiedGroup::bracket(const double* x, const double* y, double* out) const {
  std::memset(out, 0, sizeof(double) * dim_);
  for (const auto& t : terms_)
    out[t.k] += t.c * (x[t.i] * y[t.j] - x[t.j] * y[t.i]);
}

std::vector<double> StratifiedGroup::bracket(const std::vector<double>& x,
                                             const std::vector<double>& y) const {
  std::vector<double> out(dim_);
  bracket(x.data(), y.data(), out.data());
  return out;
}

bool StratifiedGroup::operator==(const StratifiedGroup& o) const {
  if (layers_ != o.layers_ || terms_.size() != o.terms_.size()) return false;
  for (size_t n = 0; n < terms_.size(); ++n) {
    const auto &a = terms_[n], &b = o.terms_[n];
    if (a.i != b.i || a.j != b.j || a.k != b.k || a.c != b.c) return false;
  }
  return true;
}

void StratifiedGroup::finalize() {
  dim_ = static_cast<int>(layers_.size());
  if (dim_ < 1 || dim_ > kMaxDim)
    throw std::invalid_argument("group dimension must be in [1, 16]");
  step_ = *std::max_element(layers_.begin(), layers_.end());
  if (step_ < 1 || step_ > 3)
    throw std::invalid_argument("step must be 1, 2 or 3 (got " +
                                std::to_string(step_) + ")");
  for (int m = 1; m <= step_; ++m)
    if (std::count(layers_.begin(), layers_.end(), m) == 0)
      throw std::invalid_argument("layer " + std::to_string(m) + " is empty");
  for (int i = 0; i + 1 < dim_; ++i)
    if (layers_[i] > layers_[i + 1])
      throw std::invalid_argument(
          "basis must be sorted by layer: layer(" + std::to_string(i + 1) +
          ") > layer(" + std::to_string(i + 2) + ")");
  if (layers_[0] != 1)
    throw std::invalid_argument("first basis vector must be in layer 1");
  hom_dim_ = 0;
  for (int n : layers_) hom_dim_ += n;
  l_ = static_cast<int>(std::count(layers_.begin(), layers_.end(), 1));

  // canonicalize terms: i < j, merge duplicates, drop zeros
  std::map<std::array<int, 3>, double> merged;
  for (auto t : terms_) {
    if (t.i < 0 || t.j < 0 || t.k < 0 || t.i >= dim_ || t.j >= dim_ || t.k >= dim_)
      throw std::invalid_argument("bracket index out of range");
    if (t.i == t.j) {
      if (t.c != 0.0)
        throw std::invalid_argument("[Y_i, Y_i] must vanish at " +
                                    idx3(t.i, t.j, t.k));
      continue;
    }
    if (t.i > t.j) { std::swap(t.i, t.j); t.c = -t.c; }
    auto key = std::array<int, 3>{t.i, t.j, t.k};
    auto [it, fresh] = merged.emplace(key, t.c);
    if (!fresh && it->second != t.c)
      throw std::invalid_argument("inconsistent duplicate bracket entry at " +
                                  idx3(t.i, t.j, t.k));
  }
  terms_.clear();
  for (auto& [key, c] : merged) {
    if (c == 0.0) continue;
    // grading: [V_a, V_b] subset V_{a+b}
    int a = layers_[key[0]], b = layers_[key[1]], tgt = layers_[key[2]];
    if (tgt != a + b)
      throw std::invalid_argument(
          "grading violated at c" + idx3(key[0], key[1], key[2]) + ": layers " +
          std::to_string(a) + "+" + std::to_string(b) + " -> " + std::to_string(tgt));
    terms_.push_back({key[0], key[1], key[2], c});
  }

  // Jacobi: sum_m c_{ijm} c_{mkl} + c_{jkm} c_{mil} + c_{kim} c_{mjl} = 0
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k)
        for (int l = 0; l < dim_; ++l) {
          double s = 0;
          for (int m = 0; m < dim_; ++m)
            s += structure_constant(i, j, m) * structure_constant(m, k, l) +
                 structure_constant(j, k, m) * structure_constant(m, i, l) +
                 structure_constant(k, i, m) * structure_constant(m, j, l);
          if (std::abs(s) > 1e-14)
            throw std::invalid_argument(
                "Jacobi identity fails for basis triple " + idx3(i, j, k) +
                " on component " + std::to_string(l + 1));
        }
}

StratifiedGroup StratifiedGroup::abelian(int n) {
  StratifiedGroup g;
  g.name_ = "abelian:" + std::to_string(n);
  g.layers_.assign(n, 1);
  g.finalize();
  return g;
}

StratifiedGroup StratifiedGroup::heisenberg() {
  StratifiedGroup g;
  g.name_ = "heisenberg";
  g.layers_ = {1, 1, 2};
  g.terms_ = {{0, 1, 2, 1.0}};
  g.finalize();
  return g;
}

StratifiedGroup StratifiedGroup::engel() {
  StratifiedGroup g;
  g.name_ = "engel";
  g.layers_ = {1, 1, 2, 3};
  g.terms_ = {{0, 1, 2, 1.0}, {0, 2, 3, 1.0}};
  g.finalize();
  return g;
}

StratifiedGroup StratifiedGroup::from_structure(std::vector<int> layers,
                                                std::vector<BracketTerm> brackets,
                                                std::string name) {
  StratifiedGroup g;
  g.name_ = std::move(name);
  g.layers_ = std::move(layers);
  g.terms_ = std::move(brackets);
  g.finalize();
  return g;
}

StratifiedGroup StratifiedGroup::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open group file: " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("group file " + file.string() +
                                " is not valid JSON: " + e.what());
  }
  if (!j.contains("layers") || !j["layers"].is_array())
    throw std::invalid_argument("group file needs a \"layers\" array");
  std::vector<int> layers = j["layers"].get<std::vector<int>>();
  std::vector<BracketTerm> terms;
  if (j.contains("brackets")) {
    for (const auto& row : j["brackets"]) {
      if (!row.is_array() || row.size() != 4)
        throw std::invalid_argument("bracket rows must be [i, j, k, c]");
      // file uses 1-based basis indices
      terms.push_back({row[0].get<int>() - 1, row[1].get<int>() - 1,
                       row[2].get<int>() - 1, row[3].get<double>()});
    }
  }
  std::string name = j.value("name", file.stem().string());
  return from_structure(std::move(layers), std::move(terms), std::move(name));
}

void cbh_product_into(const StratifiedGroup& g, const double* x,
                      const double* y, double* out) {
  const int n = g.dim();
  for (int i = 0; i < n; ++i) out[i] = x[i] + y[i];
  if (g.step() == 1) return;

  double b[kMaxDim];
  g.bracket(x, y, b);                       // [x,y]
  for (int i = 0; i < n; ++i) out[i] += 0.5 * b[i];
  if (g.step() == 2) return;

  double bb[kMaxDim];
  g.bracket(x, b, bb);                      // [x,[x,y]]
  for (int i = 0; i < n; ++i) out[i] += bb[i] / 12.0;
  g.bracket(y, b, bb);                      // [y,[x,y]] = -[y,[y,x]]
  for (int i = 0; i < n; ++i) out[i] -= bb[i] / 12.0;
}

std::vector<double> cbh_product(const StratifiedGroup& g,
                                const std::vector<double>& x,
                                const std::vector<double>& y) {
  if (static_cast<int>(x.size()) != g.dim() ||
      static_cast<int>(y.size()) != g.dim())
    throw std::invalid_argument("cbh_product: point dimension mismatch");
  std::vector<double> out(g.dim());
  cbh_product_into(g, x.data(), y.data(), out.data());
  return out;
}

void dilate_point_into(const StratifiedGroup& g, double a, const double* x,
                       double* out) {
  const double a2 = a * a, a3 = a2 * a;
  for (int i = 0; i < g.dim(); ++i) {
    int n = g.layer(i);
    out[i] = x[i] * (n == 1 ? a : n == 2 ? a2 : a3);
  }
}

std::vector<double> dilate_point(const StratifiedGroup& g, double a,
                                 const std::vector<double>& x) {
  if (a <= 0) throw std::invalid_argument("dilate_point: a must be positive");
  if (static_cast<int>(x.size()) != g.dim())
    throw std::invalid_argument("dilate_point: point dimension mismatch");
  std::vector<double> out(g.dim());
  dilate_point_into(g, a, x.data(), out.data());
  return out;
}

double hom_norm(const StratifiedGroup& g, const double* x) {
  const int r = 2 * fact(g.step());
  double s = 0;
  for (int i = 0; i < g.dim(); ++i) {
    int e = r / g.layer(i);   // even integer
    s += std::pow(std::abs(x[i]), e);
  }
  return std::pow(s, 1.0 / r);
}

double hom_norm(const StratifiedGroup& g, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != g.dim())
    throw std::invalid_argument("hom_norm: point dimension mismatch");
  return hom_norm(g, x.data());
}

int hom_degree(const StratifiedGroup& g, const MultiIndex& I) {
  if (static_cast<int>(I.exps.size()) != g.dim())
    throw std::invalid_argument("hom_degree: multi-index dimension mismatch");
  int d = 0;
  for (int i = 0; i < g.dim(); ++i) {
    if (I.exps[i] < 0)
      throw std::invalid_argument("hom_degree: negative exponent");
    d += g.layer(i) * I.exps[i];
  }
  return d;
}

std::vector<MultiIndex> poly_basis(const StratifiedGroup& g, int k) {
  if (k < 0) throw std::invalid_argument("poly_basis: k must be >= 0");
  std::vector<MultiIndex> out;
  MultiIndex cur;
  cur.exps.assign(g.dim(), 0);
  // depth-first enumeration of exponents with homogeneous budget
  auto rec = [&](auto&& self, int pos, int budget) -> void {
    if (pos == g.dim()) {
      out.push_back(cur);
      return;
    }
    int w = g.layer(pos);
    for (int e = 0; e * w <= budget; ++e) {
      cur.exps[pos] = e;
      self(self, pos + 1, budget - e * w);
    }
    cur.exps[pos] = 0;
  };
  rec(rec, 0, k);
  std::sort(out.begin(), out.end(), [&](const MultiIndex& a, const MultiIndex& b) {
    int da = hom_degree(g, a), db = hom_degree(g, b);
    if (da != db) return da < db;
    return a.exps < b.exps;
  });
  return out;
}

}  // namespace strata
