#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "degenspec/torus.hpp"

using namespace degenspec;
using doctest::Approx;
using cplx = std::complex<double>;

TEST_CASE("frequency grids") {
  {
    TorusGrid g(1, 4, 1.0);
    const auto f = frequencies(g);
    REQUIRE(f.size() == 4);
    const double want[] = {0.0, 0.25, -0.5, -0.25};
    for (std::size_t i = 0; i < 4; ++i) CHECK(f[i][0] == want[i]);
  }
  {
    TorusGrid g(2, 2, 1.0);
    const auto f = frequencies(g);
    REQUIRE(f.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (double x : f[i]) CHECK((x == 0.0 || x == -0.5));
    }
    CHECK(f[3][0] == -0.5);
    CHECK(f[3][1] == -0.5);
  }
  {
    TorusGrid g(1, 4, 0.5);
    const auto f = frequencies(g);
    const double want[] = {0.0, 0.5, -1.0, -0.5};
    for (std::size_t i = 0; i < 4; ++i) CHECK(f[i][0] == want[i]);
  }
}

TEST_CASE("grid indexing round trips and wraps") {
  TorusGrid g(3, 6, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.flat_index(g.multi_index(i)) == i);
  CHECK(g.flat_index({-1, 0, 0}) == g.flat_index({5, 0, 0}));
  CHECK(g.flat_index({0, 0, 1}) == 1);
  CHECK(g.coordinate(4) == -2.0);
  CHECK(g.wavenumber(3) == -3);
  CHECK_THROWS(TorusGrid(2, 3, 1.0));
  CHECK_THROWS(TorusGrid(2, 4, 1.5));
}

TEST_CASE("plane waves are eigenvectors of the free operator") {
  TorusGrid g(2, 8, 1.0);
  const auto spec = SymbolSpec::lattice_bcs(2, 0.5);
  const auto freq = frequencies(g);
  const auto zero = zero_potential(g);
  for (std::size_t k : {std::size_t{0}, std::size_t{5}, std::size_t{19}, std::size_t{63}}) {
    std::vector<cplx> u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto mi = g.multi_index(i);
      const double phase = 2.0 * M_PI * (freq[k][0] * mi[0] + freq[k][1] * mi[1]);
      u[i] = std::polar(1.0, phase);
    }
    const auto hu = apply_hamiltonian(spec, zero, g, u);
    const double t = eval_symbol(spec, freq[k]);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(hu[i] - t * u[i]) < 1e-12);
  }
}

TEST_CASE("standard lattice symbol acts as the neighbour average") {
  for (int d : {1, 2, 3}) {
    TorusGrid g(d, 6, 1.0);
    const auto spec = SymbolSpec::lattice_standard(d);
    const std::size_t n = g.size() / 3;
    std::vector<cplx> u(g.size(), 0.0);
    u[n] = 1.0;
    const auto hu = apply_hamiltonian(spec, zero_potential(g), g, u);
    const auto center = g.multi_index(n);
    std::set<std::size_t> neighbours;
    for (int j = 0; j < d; ++j) {
      for (int s : {-1, 1}) {
        auto m = center;
        m[static_cast<std::size_t>(j)] += s;
        neighbours.insert(g.flat_index(m));
      }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double want = neighbours.count(i) ? 1.0 / (2.0 * d) : 0.0;
      CHECK(std::abs(hu[i] - want) < 1e-13);
    }
  }
}

TEST_CASE("the quadratic form is real") {
  TorusGrid g(2, 8, 1.0);
  const auto v = random_potential(g, 1.0, 3.0, 5);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  std::vector<cplx> u(g.size());
  for (auto& x : u) x = {nd(rng), nd(rng)};
  for (const auto& spec : {SymbolSpec::lattice_bcs(2, 0.5), SymbolSpec::lattice_mv(2)}) {
    const auto hu = apply_hamiltonian(spec, v, g, u);
    cplx form = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) form += std::conj(u[i]) * hu[i];
    CHECK(std::abs(form.imag()) < 1e-10 * std::max(1.0, std::abs(form)));
  }
}

TEST_CASE("dense assembly") {
  SUBCASE("one point") {
    TorusGrid g(2, 1, 1.0);
    auto v = zero_potential(g);
    v.values[0] = 3.0;
    const auto h = assemble_dense(SymbolSpec::lattice_standard(2), v, g);
    REQUIRE(h.rows() == 1);
    CHECK(h(0, 0) == Approx(1.0 - 3.0));
  }
  SUBCASE("V = 0 gives the sorted multiplier values") {
    TorusGrid g(2, 16, 1.0);
    for (const auto& spec : {SymbolSpec::lattice_standard(2), SymbolSpec::lattice_mv(2),
                             SymbolSpec::lattice_bcs(2, 0.5)}) {
      const auto h = assemble_dense(spec, zero_potential(g), g);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
      auto sym = symbol_on_grid(spec, g);
      std::sort(sym.begin(), sym.end());
      for (std::size_t i = 0; i < sym.size(); ++i) CHECK(std::abs(es.eigenvalues()(static_cast<Eigen::Index>(i)) - sym[i]) < 1e-10);
    }
  }
  SUBCASE("matches the matrix-free operator") {
    TorusGrid g(2, 8, 1.0);
    const auto spec = SymbolSpec::lattice_bcs(2, 0.5);
    const auto v = gaussian_potential(g, 1.0, 2.0);
    const auto h = assemble_dense(spec, v, g);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (int probe = 0; probe < 10; ++probe) {
      Eigen::VectorXd x(static_cast<Eigen::Index>(g.size()));
      std::vector<cplx> u(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        x(static_cast<Eigen::Index>(i)) = nd(rng);
        u[i] = x(static_cast<Eigen::Index>(i));
      }
      const Eigen::VectorXd hx = h * x;
      const auto hu = apply_hamiltonian(spec, v, g, u);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(hu[i] - hx(static_cast<Eigen::Index>(i))) < 1e-12);
    }
  }
  SUBCASE("size cap") {
    TorusGrid g(2, 16, 1.0);
    CHECK_THROWS(assemble_dense(SymbolSpec::lattice_standard(2), zero_potential(g), g, 100));
  }
}

TEST_CASE("kernel from multiplier is the inverse DFT") {
  TorusGrid g(1, 8, 1.0);
  const auto spec = SymbolSpec::lattice_standard(1);
  const auto k = kernel_from_multiplier(g, symbol_on_grid(spec, g));
  // cos(2 pi xi) has kernel (delta_1 + delta_-1) / 2
  for (int n = 0; n < 8; ++n) {
    const double want = (n == 1 || n == 7) ? 0.5 : 0.0;
    CHECK(std::abs(k[static_cast<std::size_t>(n)] - want) < 1e-14);
  }
}

TEST_CASE("potential generators") {
  TorusGrid g(2, 16, 0.5);
  const auto gauss = gaussian_potential(g, 2.0, 1.5);
  CHECK(gauss.values[0] == Approx(2.0));
  CHECK(gauss.max_abs() == Approx(2.0));
  const auto delta = delta_potential(g, 3.0);
  CHECK(delta.values[0] == Approx(3.0 / g.cell_volume()));
  CHECK(delta.norm_pow(g, 1.0) == Approx(3.0));
  const auto plateau = plateau_potential(g, 1.0, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto mi = g.multi_index(i);
    const double r = std::hypot(g.coordinate(mi[0]), g.coordinate(mi[1]));
    CHECK(plateau.values[i] == (r <= 1.0 ? 1.0 : 0.0));
  }
  const auto bump = bump_potential(g, 1.0, 2.0);
  CHECK(bump.values[0] == Approx(1.0));
  CHECK(bump.nonnegative());
  const auto r1 = random_potential(g, 1.0, 2.0, 42);
  const auto r2 = random_potential(g, 1.0, 2.0, 42);
  const auto r3 = random_potential(g, 1.0, 2.0, 43);
  CHECK(r1.values == r2.values);
  CHECK(r1.values != r3.values);
  CHECK(r1.seed == 42);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(r1.values[i] >= 0.0);
    CHECK(r1.values[i] <= 1.0);
  }
  const auto sc = gauss.scaled(-2.0);
  CHECK(sc.values[0] == Approx(-4.0));
  CHECK(sc.positive_part().max_abs() == 0.0);
  CHECK(gauss.lp_norm(g, 2.0) == Approx(std::sqrt(gauss.norm_pow(g, 2.0))));
}

TEST_CASE("translation and CSV loading") {
  TorusGrid g(2, 4, 1.0);
  const auto d = delta_potential(g, 1.0);
  const auto t = translate_potential(g, d, {1, -1});
  CHECK(t.values[g.flat_index({1, 3})] == 1.0);
  CHECK(t.norm_pow(g, 1.0) == Approx(1.0));

  const auto path = std::filesystem::temp_directory_path() / "degenspec_potential_test.csv";
  {
    std::ofstream out(path);
    out << "# i,j,value\n0,0,1.5\n3,2,-0.25\n";
  }
  const auto v = load_potential_csv(g, path.string());
  CHECK(v.values[0] == 1.5);
  CHECK(v.values[g.flat_index({3, 2})] == -0.25);
  CHECK(v.norm_pow(g, 1.0) == Approx(1.75));
  {
    std::ofstream out(path);
    out << "0,9,1\n";
  }
  CHECK_THROWS(load_potential_csv(g, path.string()));
  std::filesystem::remove(path);
}

TEST_CASE("aliasing guard and spectral resolution") {
  const auto spec = SymbolSpec::continuum_bcs(2);
  TorusGrid fine(2, 16, 0.1);
  CHECK(aliasing_check(spec, gaussian_potential(fine, 1.0, 0.5), fine).ok);
  TorusGrid coarse(2, 16, 1.0);
  CHECK_FALSE(aliasing_check(spec, gaussian_potential(coarse, 10.0, 2.0), coarse).ok);
  CHECK(spectral_resolution(SymbolSpec::lattice_bcs(2, 0.5), TorusGrid(2, 32, 1.0)) == Approx(9.6e-3).epsilon(0.01));
}
