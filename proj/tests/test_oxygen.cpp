#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tumorsim/diagnostics.hpp"
#include "tumorsim/oxygen.hpp"

using namespace tumorsim;

namespace {
struct Setup {
  ModelParams params;
  SchemeConfig config;
  Mesh mesh;
};

Setup setup(double ellm, double h, double delta) {
  Setup s{ModelParams{}, SchemeConfig{}, Mesh(1, 1.0)};
  s.config.ellm = ellm;
  s.config.h = h;
  s.config.ell0 = h;
  s.config.delta = delta;
  s.mesh = build_mesh(s.config);
  return s;
}
}  // namespace

TEST_CASE("two-node oxygen system") {
  auto s = setup(1.5, 0.5, 0.1);
  s.params.Q = 0.0;
  const CellField a(std::vector<double>{0.8, 0.8, 0.0});
  const NodalField prev(std::vector<double>{0.5, 0.8, 1.0, 1.0});
  const auto sys = assemble_oxygen_system(a, prev, 2, s.params, s.config, s.mesh)
                       .combine(s.config.delta, s.params.lambda, s.params.Q);
  CHECK(sys.diag[0] == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(sys.diag[1] == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(sys.upper[0] == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(sys.lower[0] == doctest::Approx(-0.2).epsilon(1e-15));
  // M = diag(h/2, h), so the right-hand side is [0.25*0.5, 0.5*0.8 + 0.1*2].
  CHECK(sys.rhs[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(sys.rhs[1] == doctest::Approx(0.6).epsilon(1e-15));

  const auto c = solve_oxygen(a, prev, 2, s.params, s.config, s.mesh);
  CHECK(c[0] == doctest::Approx(0.2325 / 0.365).epsilon(1e-13));
  CHECK(c[1] == doctest::Approx(0.295 / 0.365).epsilon(1e-13));
  CHECK(c[2] == 1.0);
  CHECK(c[3] == 1.0);
}

TEST_CASE("uptake diagonal for constant alpha") {
  auto s = setup(1.0, 0.05, 1e-3);
  const auto sys = assemble_oxygen_system(CellField(20, 0.8), NodalField(21, 1.0), 20, s.params, s.config, s.mesh);
  CHECK(sys.S_diag[0] == doctest::Approx(0.01).epsilon(1e-14));
  for (std::size_t i = 1; i < 20; ++i) CHECK(sys.S_diag[i] == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("pure diffusion keeps the unit state") {
  auto s = setup(2.0, 0.25, 0.01);
  s.params.Q = 0.0;
  CellField a(8, 0.0);
  for (std::size_t j = 0; j < 5; ++j) a[j] = 0.7;
  const auto c = solve_oxygen(a, NodalField(9, 1.0), 5, s.params, s.config, s.mesh);
  for (double v : c.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  for (double v : solve_oxygen(a, NodalField(9, 0.3), 0, s.params, s.config, s.mesh).values) CHECK(v == 1.0);
}

TEST_CASE("oxygen assembly matches the dense per-element oracle") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto s = setup(6 * 0.2, 0.2, 0.01);
  s.params.Q1hat = 0.7;
  s.params.lambda = 1.3;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(6), c(7);
    for (auto& v : a) v = 0.95 * U(rng);
    for (auto& v : c) v = U(rng);
    c[6] = 1.0;
    const auto sys = assemble_oxygen_system(CellField(a), NodalField(c), 6, s.params, s.config, s.mesh)
                         .combine(s.config.delta, s.params.lambda, s.params.Q);
    const auto ref = oracle::oxygen_system(a, c, 6, s.params, 0.2, s.config.delta);
    const auto dense = oracle::band_to_dense(sys.lower, sys.diag, sys.upper);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(std::abs(sys.rhs[i] - ref.rhs[i]) <= 1e-13);
      for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(dense[i][j] - ref.a[i][j]) <= 1e-13);
    }
  }
}

TEST_CASE("maximum principle under fuzzing") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto s = setup(2.0, 0.05, 1e-3);
  const std::size_t J = s.mesh.cells();
  for (int trial = 0; trial < 1000; ++trial) {
    s.params.Q = 5.0 * U(rng);
    s.params.Q1hat = U(rng);
    const std::size_t Jn = 1 + static_cast<std::size_t>(U(rng) * (J - 2));
    CellField a(J, 0.0);
    NodalField c(J + 1, 1.0);
    for (std::size_t j = 0; j < Jn; ++j) a[j] = 0.99 * U(rng);
    for (std::size_t j = 0; j < Jn; ++j) c[j] = U(rng);
    const auto next = solve_oxygen(a, c, Jn, s.params, s.config, s.mesh);
    State st;
    st.c = next;
    st.alpha = a;
    st.u = NodalField(J + 1, 0.0);
    st.Jn = Jn;
    for (double v : next.values) {
      CHECK(v >= -1e-12);
      CHECK(v <= 1.0 + 1e-12);
    }
    for (const auto& v : bound_monitor(st, s.params, s.config)) CHECK(v.monitor != std::string(kMonitorCRange));
  }
}
