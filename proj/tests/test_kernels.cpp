#include <doctest.h>

#include <cstring>

#include "divfree/kernels.hpp"
#include "test_support.hpp"

using namespace divfree;
namespace k = divfree::kernels;

namespace {

std::vector<Complex> random_coeffs(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<Complex> out(n);
  for (auto& c : out) c = {d(rng), d(rng)};
  return out;
}

std::vector<double> random_reals(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<double> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

template <class T>
bool bitwise_equal(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

struct ThreadGuard {
  int saved = k::thread_count();
  ~ThreadGuard() { k::set_thread_count(saved); }
};

}  // namespace

TEST_CASE("omp kernels are bitwise identical to the serial reference") {
  ThreadGuard guard;
  std::mt19937_64 rng(21);
  for (const Grid g : {Grid(8), Grid(16, 32), Grid(64)}) {
    const auto uh = random_coeffs(g.size(), rng), vh = random_coeffs(g.size(), rng);
    const auto a = random_reals(g.size(), rng), b = random_reals(g.size(), rng);
    const auto c = random_reals(g.size(), rng), d = random_reals(g.size(), rng);

    auto u_ref = uh, v_ref = vh;
    k::serial::leray_modes(g, u_ref, v_ref);
    auto dealias_ref = uh;
    k::serial::dealias(g, dealias_ref);
    std::vector<double> adv_ref(g.size()), axpby_ref(g.size());
    k::serial::advection(a, b, c, d, adv_ref);
    k::serial::axpby(0.3, a, -1.7, b, axpby_ref);
    std::vector<Complex> cn_ref(g.size());
    k::serial::crank_nicolson(g, 1e-3, 1e-2, uh, vh, cn_ref);
    const double dot_ref = k::serial::dot(g, a, b);

    for (int threads : {1, 2, 3, 4, 7}) {
      CAPTURE(threads);
      k::set_thread_count(threads);
      auto u = uh, v = vh;
      k::omp::leray_modes(g, u, v);
      CHECK(bitwise_equal(u, u_ref));
      CHECK(bitwise_equal(v, v_ref));
      auto dl = uh;
      k::omp::dealias(g, dl);
      CHECK(bitwise_equal(dl, dealias_ref));
      std::vector<double> adv(g.size()), ab(g.size());
      k::omp::advection(a, b, c, d, adv);
      CHECK(bitwise_equal(adv, adv_ref));
      k::omp::axpby(0.3, a, -1.7, b, ab);
      CHECK(bitwise_equal(ab, axpby_ref));
      std::vector<Complex> cn(g.size());
      k::omp::crank_nicolson(g, 1e-3, 1e-2, uh, vh, cn);
      CHECK(bitwise_equal(cn, cn_ref));
      const double dt = k::omp::dot(g, a, b);
      CHECK(std::memcmp(&dt, &dot_ref, sizeof dt) == 0);
    }
  }
}

TEST_CASE("serial kernels against direct formulas") {
  std::mt19937_64 rng(22);
  const Grid g(8);
  const WavenumberTable wn(g);
  auto uh = random_coeffs(g.size(), rng), vh = random_coeffs(g.size(), rng);
  const auto u0 = uh, v0 = vh;
  k::serial::leray_modes(g, uh, vh);
  for (int iy = 0; iy < 8; ++iy)
    for (int ix = 0; ix < 8; ++ix) {
      const auto i = g.index(ix, iy);
      const double kx = odd_wavenumber(wn.kx[ix], 8), ky = odd_wavenumber(wn.ky[iy], 8);
      if (ix == 0 && iy == 0) {
        CHECK(uh[i] == Complex(0.0, 0.0));
        CHECK(vh[i] == Complex(0.0, 0.0));
        continue;
      }
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) {
        CHECK(uh[i] == u0[i]);
        continue;
      }
      const Complex kw = (kx * u0[i] + ky * v0[i]) / k2;
      CHECK(std::abs(uh[i] - (u0[i] - kx * kw)) < 1e-14);
      CHECK(std::abs(vh[i] - (v0[i] - ky * kw)) < 1e-14);
      CHECK(std::abs(kx * uh[i] + ky * vh[i]) < 1e-13);
    }

  const auto a = random_reals(g.size(), rng), b = random_reals(g.size(), rng);
  double expected = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) expected += a[i] * b[i];
  CHECK(k::serial::dot(g, a, b) == doctest::Approx(expected).epsilon(1e-14));

  // Single mode: ((1 - a) w + dt r) / (1 + a), a = nu |2 pi k|^2 dt / 2.
  const double nu = 0.01, dt = 0.1;
  std::vector<Complex> w(g.size()), r(g.size()), out(g.size());
  w[g.index(1, 2)] = {2.0, 1.0};
  r[g.index(1, 2)] = {0.5, 0.0};
  k::serial::crank_nicolson(g, nu, dt, w, r, out);
  const double alpha = 0.5 * nu * 4.0 * testing::pi * testing::pi * 5.0 * dt;
  const Complex want = ((1.0 - alpha) * Complex(2.0, 1.0) + dt * Complex(0.5, 0.0)) / (1.0 + alpha);
  CHECK(std::abs(out[g.index(1, 2)] - want) < 1e-14);
}

TEST_CASE("thread count setter") {
  ThreadGuard guard;
  k::set_thread_count(3);
  CHECK(k::thread_count() == 3);
  k::set_thread_count(1);
  CHECK(k::thread_count() == 1);
}
