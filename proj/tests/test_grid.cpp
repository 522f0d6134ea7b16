#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <strata/grid.hpp>
#include <strata/grid_io.hpp>

#include "support/oracles.hpp"

using namespace strata;

namespace {

GridSpec r1_grid(int n = 513, double w = 16.0) {
  return make_grid(StratifiedGroup::abelian(1), {w}, {n});
}

GridFunction std_gaussian(const GridSpec& spec) {
  return sample_real(spec, [](const std::vector<double>& x) {
    double q = 0;
    for (double v : x) q += v * v;
    return std::exp(-0.5 * q) / std::sqrt(2.0 * M_PI);
  });
}

double rel_max_diff(const GridFunction& a, const GridFunction& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0 ? num / den : num;
}

}  // namespace

TEST_CASE("grid geometry: odd sizes, exact origin, row-major strides") {
  auto spec = make_grid(StratifiedGroup::heisenberg(), {2.0, 2.0, 4.0}, {9, 9, 17});
  CHECK(spec.total_nodes == 9u * 9u * 17u);
  CHECK(spec.spacing[0] == doctest::Approx(0.5));
  CHECK(spec.spacing[2] == doctest::Approx(0.5));
  CHECK(spec.cell_volume == doctest::Approx(0.125));
  CHECK(spec.strides[2] == 1u);            // last axis fastest
  CHECK(spec.strides[1] == 17u);
  CHECK(spec.strides[0] == 9u * 17u);
  CHECK(spec.coord(0, 4) == 0.0);          // centre node is exactly the origin
  CHECK(spec.coord(0, 0) == doctest::Approx(-2.0));
  double x[3];
  spec.node_coords(spec.origin_index(), x);
  CHECK(x[0] == 0.0);
  CHECK(x[1] == 0.0);
  CHECK(x[2] == 0.0);

  CHECK_THROWS_AS(make_grid(StratifiedGroup::abelian(1), {1.0}, {8}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(StratifiedGroup::abelian(1), {1.0}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(StratifiedGroup::abelian(1), {-1.0}, {9}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(StratifiedGroup::abelian(2), {1.0}, {9, 9}), std::invalid_argument);
}

TEST_CASE("sampling, norms and moments reproduce Gaussian closed forms") {
  auto f = std_gaussian(r1_grid());
  CHECK(f.real_valued());
  // the box loses ~1e-57 of mass, so these are machine-accurate
  CHECK(moment(f, MultiIndex{{0}}).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(moment(f, MultiIndex{{1}}).real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(moment(f, MultiIndex{{2}}).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lp_norm(f, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(oracles::kGaussL2).epsilon(1e-12));
  CHECK(lp_norm(f, p_inf) == doctest::Approx(oracles::kGaussAtZero).epsilon(1e-14));

  CHECK_THROWS_AS(sample_real(r1_grid(9),
                              [](const std::vector<double>& x) { return 1.0 / x[0]; }),
                  std::invalid_argument);  // non-finite at the origin
}

TEST_CASE("abelian convolution hits the Gaussian self-convolution constant") {
  auto spec = r1_grid();
  auto f = std_gaussian(spec);
  for (auto path : {ConvPath::Auto, ConvPath::Direct}) {
    auto c = convolve(f, f, path);
    CHECK(c[spec.origin_index()].real() ==
          doctest::Approx(oracles::kGaussSelfConvAtZero).epsilon(1e-11));
    // f*f is the N(0,2) density
    auto expect = sample_real(spec, [](const std::vector<double>& x) {
      return std::exp(-0.25 * x[0] * x[0]) / std::sqrt(4.0 * M_PI);
    });
    CHECK(rel_max_diff(c, expect) <= 1e-10);
  }
}

TEST_CASE("fft and direct quadratures agree to round-off on R^1") {
  auto spec = r1_grid(129, 4.0);
  auto f = sample_real(spec, [](const std::vector<double>& x) {
    return x[0] * std::exp(-x[0] * x[0]);
  });
  auto g = sample_real(spec, [](const std::vector<double>& x) {
    return std::cos(3.0 * x[0]) * std::exp(-2.0 * x[0] * x[0]);
  });
  CHECK(rel_max_diff(convolve(f, g, ConvPath::Auto), convolve(f, g, ConvPath::Direct)) <= 1e-12);
  // abelian convolution commutes up to quadrature round-off
  CHECK(rel_max_diff(convolve(f, g), convolve(g, f)) <= 1e-12);
}

TEST_CASE("Young's inequality holds on the grid quadrature") {
  auto spec = r1_grid(257, 8.0);
  auto f = sample_real(spec, [](const std::vector<double>& x) {
    return std::exp(-x[0] * x[0]) * (1.0 + std::sin(2 * x[0]));
  });
  auto g = sample_real(spec, [](const std::vector<double>& x) {
    return std::exp(-3.0 * std::abs(x[0]));
  });
  auto c = convolve(f, g);
  CHECK(lp_norm(c, 1.0) <= lp_norm(f, 1.0) * lp_norm(g, 1.0) * (1.0 + 1e-9));
}

TEST_CASE("twisted convolution matches brute force on the Heisenberg group") {
  auto g1 = StratifiedGroup::heisenberg();
  auto gauss3 = [](const std::vector<double>& x) {
    return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  };

  SUBCASE("shifts land exactly on nodes") {
    // h = (1, 1, 0.5): the twist (y1 x2 - y2 x1)/2 is always a z-node offset
    auto spec = make_grid(g1, {2.0, 2.0, 8.0}, {5, 5, 33});
    auto f = sample_real(spec, gauss3);
    auto h = sample_real(spec, [&](const std::vector<double>& x) {
      return x[0] * gauss3(x);
    });
    auto ref = oracles::convolve_bruteforce(f, h);
    CHECK(rel_max_diff(convolve(f, h, ConvPath::Auto), ref) <= 1e-12);
    CHECK(rel_max_diff(convolve(f, h, ConvPath::Direct), ref) <= 1e-12);
  }

  SUBCASE("shifts require interpolation") {
    auto spec = make_grid(g1, {2.0, 2.0, 4.0}, {9, 9, 17});
    auto f = sample_real(spec, [&](const std::vector<double>& x) {
      return x[0] * gauss3(x);
    });
    auto h = sample_real(spec, [&](const std::vector<double>& x) {
      return x[1] * gauss3(x);
    });
    auto ref = oracles::convolve_bruteforce(f, h);
    CHECK(rel_max_diff(convolve(f, h, ConvPath::Auto), ref) <= 1e-9);
    CHECK(rel_max_diff(convolve(f, h, ConvPath::Direct), ref) <= 1e-9);

    // group convolution is genuinely noncommutative here
    auto fh = convolve(f, h), hf = convolve(h, f);
    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < fh.size(); ++i) {
      diff = std::max(diff, std::abs(fh[i] - hf[i]));
      scale = std::max(scale, std::abs(fh[i]));
    }
    CHECK(diff > 1e-3 * scale);
  }

  SUBCASE("a larger grid stays consistent between the two paths") {
    auto spec = make_grid(g1, {3.0, 3.0, 6.0}, {13, 13, 25});
    auto f = sample_real(spec, gauss3);
    auto h = sample_real(spec, [&](const std::vector<double>& x) {
      return (x[2] - 0.25 * x[0]) * gauss3(x);
    });
    CHECK(rel_max_diff(convolve(f, h, ConvPath::Auto),
                       convolve(f, h, ConvPath::Direct)) <= 1e-9);
  }
}

TEST_CASE("dilation is L^1-normalized and covariant") {
  auto spec = r1_grid(513, 16.0);
  auto f = std_gaussian(spec);
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    CAPTURE(t);
    auto d = dilate(t, f);
    // mass is preserved while the support stays inside the box
    CHECK(lp_norm(d, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
    // against direct sampling of t * phi(t x); interpolation is O(h^2)
    auto expect = sample_real(spec, [&](const std::vector<double>& x) {
      return t * oracles::std_gauss(t * x[0]);
    });
    CHECK(rel_max_diff(d, expect) <= 2e-3);
  }

  // Heisenberg: delta_t scales z by t^2 and D_t carries t^Q = t^4.  With
  // t = 2 on a uniform grid every delta_t x is again a node, so the only
  // deviation from the closed form is the zero extension outside the box.
  auto h1 = make_grid(StratifiedGroup::heisenberg(), {4.0, 4.0, 8.0}, {17, 17, 33});
  auto g = sample_real(h1, [](const std::vector<double>& x) {
    return std::exp(-(x[0] * x[0] + x[1] * x[1] + 0.25 * x[2] * x[2]));
  });
  auto d2 = dilate(2.0, g);
  auto expect = sample_real(h1, [](const std::vector<double>& x) {
    return 16.0 * std::exp(-(4 * x[0] * x[0] + 4 * x[1] * x[1] + 4 * x[2] * x[2]));
  });
  CHECK(rel_max_diff(d2, expect) <= 1e-6);
  CHECK(lp_norm(d2, 1.0) == doctest::Approx(lp_norm(g, 1.0)).epsilon(2e-3));
}

TEST_CASE("involution and star are exact index maps") {
  auto spec = make_grid(StratifiedGroup::heisenberg(), {2.0, 2.0, 4.0}, {9, 9, 17});
  auto f = sample(spec, [](const std::vector<double>& x) {
    return cplx(x[0] + 0.3 * x[2] * x[2], x[1] - x[0] * x[2]);
  });
  auto fi = involution(f);
  std::vector<double> x(3), mx(3);
  for (std::size_t i = 0; i < spec.total_nodes; ++i) {
    spec.node_coords(i, x.data());
    for (int a = 0; a < 3; ++a) mx[a] = -x[a];
    // f~(x) = f(x^{-1}) with x^{-1} = -x; both are nodes, so this is exact
    CHECK(fi[i] == interpolate(f, mx.data()));
  }
  auto fs = star(f);
  for (std::size_t i = 0; i < spec.total_nodes; ++i)
    CHECK(fs[i] == std::conj(fi[i]));
  // involution is an involution, bit for bit
  auto fii = involution(fi);
  for (std::size_t i = 0; i < spec.total_nodes; ++i) CHECK(fii[i] == f[i]);
}

TEST_CASE("interpolation: exact on nodes, linear in between, zero outside") {
  auto spec = r1_grid(9, 4.0);
  auto f = sample_real(spec, [](const std::vector<double>& x) { return x[0] * x[0]; });
  double p = 2.0;
  CHECK(interpolate(f, &p).real() == 4.0);
  p = 2.5;  // between nodes 2 and 3: average of 4 and 9
  CHECK(interpolate(f, &p).real() == doctest::Approx(6.5).epsilon(1e-14));
  p = 4.75;  // ghost cell: tapers linearly from f(4)=16 to the zero extension
  CHECK(interpolate(f, &p).real() == doctest::Approx(4.0).epsilon(1e-14));
  p = 5.25;
  CHECK(interpolate(f, &p) == cplx(0));
  p = -17.0;
  CHECK(interpolate(f, &p) == cplx(0));
}

TEST_CASE("vanishing_moment_order detects Hermite-type cancellations") {
  auto spec = r1_grid(513, 16.0);
  auto gauss = sample_real(spec, [](const std::vector<double>& x) {
    return std::exp(-x[0] * x[0]);
  });
  auto h1 = sample_real(spec, [](const std::vector<double>& x) {
    return x[0] * std::exp(-x[0] * x[0]);
  });
  auto h2 = sample_real(spec, [](const std::vector<double>& x) {
    return (4 * x[0] * x[0] - 2) * std::exp(-x[0] * x[0]);
  });
  CHECK(vanishing_moment_order(gauss, 6) == 0);
  CHECK(vanishing_moment_order(h1, 6) == 1);
  CHECK(vanishing_moment_order(h2, 6) == 2);
}

TEST_CASE("grid functions round-trip through disk and export to CSV") {
  namespace fs = std::filesystem;
  auto spec = make_grid(StratifiedGroup::heisenberg(), {1.0, 1.0, 2.0}, {5, 5, 9});
  auto f = sample(spec, [](const std::vector<double>& x) {
    return cplx(std::sin(x[0] + x[2]), x[1]);
  });

  auto path = fs::temp_directory_path() / "strata_test_grid.sgf";
  save_grid_function(f, path);
  auto g = load_grid_function(path);
  CHECK(g.spec() == f.spec());
  CHECK(g.spec().group == StratifiedGroup::heisenberg());
  REQUIRE(g.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);  // bitwise
  fs::remove(path);

  auto csv = fs::temp_directory_path() / "strata_test_grid.csv";
  export_grid_csv(f, csv);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x1,x2,x3,re,im");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == spec.total_nodes);
  fs::remove(csv);
}

TEST_CASE("arithmetic operators combine values pointwise") {
  auto spec = r1_grid(9, 2.0);
  auto f = sample_real(spec, [](const std::vector<double>& x) { return x[0]; });
  auto g = sample_real(spec, [](const std::vector<double>& x) { return 1.0 + x[0] * x[0]; });
  auto s = f + g, d = f - g, m = cplx(2.0) * f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(s[i] == f[i] + g[i]);
    CHECK(d[i] == f[i] - g[i]);
    CHECK(m[i] == 2.0 * f[i]);
  }
}
