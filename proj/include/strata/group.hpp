#pragma once
// Stratified Lie groups in exponential coordinates.
//
// A group is described by a graded basis Y_1..Y_dim of its Lie algebra,
// each basis vector living in a layer n(i) in {1..step}, step <= 3, and by
// the structure constants [Y_i,Y_j] = sum_k c_{ijk} Y_k.  Points are
// coordinate vectors in R^dim; the product is the Baker-Campbell-Hausdorff
// series, which terminates for nilpotent algebras of step <= 3.

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace strata {

inline constexpr int kMaxDim = 16;

struct BracketTerm {
  int i, j, k;   // [Y_i, Y_j] has component c along Y_k; stored with i < j
  double c;
};

class StratifiedGroup {
public:
  StratifiedGroup() = default;   // empty; fill via a factory before use

  // Abelian R^n: one layer, all brackets zero.
  static StratifiedGroup abelian(int n);
  // First Heisenberg group: layers (1,1,2), [Y1,Y2] = Y3.
  static StratifiedGroup heisenberg();
  // Engel group: layers (1,1,2,3), [Y1,Y2]=Y3, [Y1,Y3]=Y4.
  static StratifiedGroup engel();

  // Build from explicit data; validates antisymmetry consistency, grading,
  // the Jacobi identity and layer ordering.  layers[i] is the (1-based)
  // layer of basis vector i; brackets use 0-based indices.
  static StratifiedGroup from_structure(std::vector<int> layers,
                                        std::vector<BracketTerm> brackets,
                                        std::string name = "custom");

  // JSON file: {"name": .., "layers": [..], "brackets": [[i,j,k,c], ..]}
  // with 1-based basis indices in "brackets".
  static StratifiedGroup load(const std::filesystem::path& file);

  int dim() const { return dim_; }
  int step() const { return step_; }
  int hom_dim() const { return hom_dim_; }           // Q = sum_i n(i)
  int layer(int i) const { return layers_[i]; }      // n(i), i in [0, dim)
  int first_layer_dim() const { return l_; }
  const std::string& name() const { return name_; }
  const std::vector<BracketTerm>& bracket_terms() const { return terms_; }

  // c_{ijk} with antisymmetry applied.
  double structure_constant(int i, int j, int k) const;

  // out <- [x, y], coordinate-wise.  out must not alias x or y.
  void bracket(const double* x, const double* y, double* out) const;
  std::vector<double> bracket(const std::vector<double>& x,
                              const std::vector<double>& y) const;

  bool operator==(const StratifiedGroup& o) const;

private:
  void finalize();   // derives dim_/step_/Q, validates everything

  std::string name_;
  std::vector<int> layers_;
  std::vector<BracketTerm> terms_;   // canonical: i < j, merged, nonzero
  int dim_ = 0, step_ = 0, hom_dim_ = 0, l_ = 0;
};

// BCH product x.y = x + y + [x,y]/2 + ([x,[x,y]] + [y,[y,x]])/12.
// Exact group law for step <= 3.  cbh_product_into writes into out and
// needs no allocation (buffers on the stack); x, y, out must have dim
// entries and out must not alias the inputs.
void cbh_product_into(const StratifiedGroup& g, const double* x,
                      const double* y, double* out);
std::vector<double> cbh_product(const StratifiedGroup& g,
                                const std::vector<double>& x,
                                const std::vector<double>& y);

inline void group_inverse(const StratifiedGroup& g, const double* x, double* out) {
  for (int i = 0; i < g.dim(); ++i) out[i] = -x[i];
}

// Anisotropic dilation (delta_a x)_i = a^{n(i)} x_i, a > 0.
std::vector<double> dilate_point(const StratifiedGroup& g, double a,
                                 const std::vector<double>& x);
void dilate_point_into(const StratifiedGroup& g, double a, const double* x,
                       double* out);

// Homogeneous quasi-norm |x| = (sum_i |x_i|^{r/n(i)})^{1/r}, r = 2 * step!.
// Smooth away from 0, homogeneous of degree 1 under dilations.
double hom_norm(const StratifiedGroup& g, const double* x);
double hom_norm(const StratifiedGroup& g, const std::vector<double>& x);

// Monomial multi-index x^I = prod x_i^{I_i}.
struct MultiIndex {
  std::vector<int> exps;   // size dim, entries >= 0
};

// Homogeneous degree d(I) = sum_i n(i) I_i.
int hom_degree(const StratifiedGroup& g, const MultiIndex& I);

// All multi-indices with d(I) <= k, sorted by (d(I), lexicographic exps).
std::vector<MultiIndex> poly_basis(const StratifiedGroup& g, int k);

}  // namespace strata
