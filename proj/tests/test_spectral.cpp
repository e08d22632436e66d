#include <doctest.h>

#include "divfree/errors.hpp"
#include "divfree/fft.hpp"
#include "divfree/spectral.hpp"
#include "test_support.hpp"

using namespace divfree;
using namespace divfree::testing;

TEST_CASE("grid rejects odd or tiny sizes") {
  CHECK_THROWS_AS(Grid(7), InvalidArgument);
  CHECK_THROWS_AS(Grid(2), InvalidArgument);
  CHECK_THROWS_AS(Grid(8, 9), InvalidArgument);
  CHECK_NOTHROW(Grid(4, 6));
  const Grid g(8);
  CHECK(g.hx() == doctest::Approx(0.125));
}

TEST_CASE("wavenumber table uses DFT ordering") {
  const WavenumberTable t(Grid(8));
  CHECK(t.kx == std::vector<int>{0, 1, 2, 3, -4, -3, -2, -1});
  CHECK(odd_wavenumber(-4, 8) == 0);
  CHECK(odd_wavenumber(3, 8) == 3);
}

TEST_CASE("forward transform of a constant is DC only") {
  const Grid g(8, 16);
  const auto f = ScalarField::from_function(g, [](double, double) { return 2.5; });
  const auto hat = forward_fft2(f);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == 0)
      CHECK(std::abs(hat.coeffs()[i] - Complex(2.5 * 128.0, 0.0)) < 1e-12);
    else
      CHECK(std::abs(hat.coeffs()[i]) < 1e-12);
  }
}

TEST_CASE("cos(2 pi x) on 8x8 matches the naive DFT") {
  const Grid g(8);
  const auto f = ScalarField::from_function(g, [](double x, double) { return std::cos(2.0 * pi * x); });
  const auto hat = forward_fft2(f);
  const auto oracle = naive_dft(f);
  for (int iy = 0; iy < 8; ++iy)
    for (int ix = 0; ix < 8; ++ix) {
      const auto i = g.index(ix, iy);
      CHECK(std::abs(hat.coeffs()[i] - oracle[i]) < 1e-12);
      const bool carrier = iy == 0 && (ix == 1 || ix == 7);
      CHECK(std::abs(hat.coeffs()[i] - Complex(carrier ? 32.0 : 0.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("Parseval over 100 random fields") {
  std::mt19937_64 rng(11);
  const Grid g(16, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_scalar(g, rng);
    const auto hat = forward_fft2(f);
    double spatial = 0.0, spectral = 0.0;
    for (double x : f.values()) spatial += x * x;
    for (auto c : hat.coeffs()) spectral += std::norm(c);
    spectral /= static_cast<double>(g.size());
    CHECK(std::abs(spatial - spectral) <= 1e-12 * spatial);
  }
}

TEST_CASE("round trip and conjugate symmetry on 1000 random fields") {
  std::mt19937_64 rng(12);
  const int sizes[] = {8, 16, 64};
  double worst_trip = 0.0, worst_sym = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Grid g(sizes[trial % 3]);
    const auto f = random_scalar(g, rng);
    const auto hat = forward_fft2(f);
    const auto back = inverse_fft2(hat);
    worst_trip = std::max(worst_trip, l2_norm(back - f) / l2_norm(f));
    double scale = 0.0;
    for (auto c : hat.coeffs()) scale = std::max(scale, std::abs(c));
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nx(); ++ix) {
        const auto m = hat((g.nx() - ix) % g.nx(), (g.ny() - iy) % g.ny());
        worst_sym = std::max(worst_sym, std::abs(hat(ix, iy) - std::conj(m)) / scale);
      }
  }
  CHECK(worst_trip <= 1e-12);
  CHECK(worst_sym <= 1e-12);
}

TEST_CASE("spectral derivative: analytic cases") {
  const Grid g(32);
  const auto f = ScalarField::from_function(g, [](double x, double) { return std::sin(2.0 * pi * x); });
  const auto dfdx = inverse_fft2(spectral_derivative(forward_fft2(f), Axis::x, 1));
  const auto expected = ScalarField::from_function(g, [](double x, double) { return 2.0 * pi * std::cos(2.0 * pi * x); });
  CHECK(max_abs_diff(dfdx, expected) <= 1e-10);

  const auto s = ScalarField::from_function(g, [](double x, double y) {
    return std::sin(2.0 * pi * x) * std::sin(2.0 * pi * y);
  });
  const auto lap = laplacian(s);
  CHECK(max_abs_diff(lap, -8.0 * pi * pi * s) <= 1e-9);

  CHECK_THROWS_AS(spectral_derivative(forward_fft2(f), Axis::x, 3), InvalidArgument);
  CHECK_THROWS_AS(spectral_derivative(forward_fft2(f), Axis::y, 0), InvalidArgument);
}

TEST_CASE("spectral derivative agrees with 4th-order central differences to O(h^4)") {
  // Five-point stencil truncation error is h^4/30 f^(5) + O(h^6); the spectral
  // derivative is exact for a band-limited field, so the gap must sit under
  // that leading term and shrink by ~16 when h halves.
  std::mt19937_64 rng(19);
  auto fd_gap = [&](int n, std::uint64_t seed) {
    rng.seed(seed);
    const Grid g(n);
    const auto f = smooth_scalar(g, rng, 4);
    const auto hat = forward_fft2(f);
    const auto spectral = inverse_fft2(spectral_derivative(hat, Axis::x, 1));
    auto d5 = hat;
    for (int i = 0; i < 5; ++i) d5 = spectral_derivative(d5, Axis::x, 1);
    const double h = g.hx();
    const double leading = std::pow(h, 4) / 30.0 * max_abs(inverse_fft2(d5));
    double err = 0.0;
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        auto at = [&](int dx) { return f((ix + dx + n) % n, iy); };
        const double fd = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
        err = std::max(err, std::abs(fd - spectral(ix, iy)));
      }
    return std::pair{err, leading};
  };
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto [e128, bound128] = fd_gap(128, seed);
    const auto [e64, bound64] = fd_gap(64, seed);
    CHECK(e128 <= 1.05 * bound128);
    CHECK(e64 <= 1.05 * bound64);
    CHECK(e64 / e128 == doctest::Approx(16.0).epsilon(0.1));
  }
}

TEST_CASE("odd derivatives of real fields stay real") {
  std::mt19937_64 rng(13);
  const Grid g(16);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_scalar(g, rng);
    for (Axis axis : {Axis::x, Axis::y}) {
      const auto full = inverse_fft2_complex(spectral_derivative(forward_fft2(f), axis, 1));
      double re = 0.0, im = 0.0;
      for (auto c : full) {
        re += c.real() * c.real();
        im += c.imag() * c.imag();
      }
      CHECK(std::sqrt(im) <= 1e-12 * std::sqrt(re));
    }
  }
}

TEST_CASE("divergence identities") {
  std::mt19937_64 rng(14);
  const Grid g(32);
  const auto w = curl_perp(random_scalar(g, rng));
  CHECK(l2_norm(divergence(w)) <= 1e-12 * l2_norm(w));

  const auto q = ScalarField::from_function(g, [](double x, double) { return std::sin(2.0 * pi * x); });
  const auto div = divergence(gradient(q));
  CHECK(max_abs_diff(div, -4.0 * pi * pi * q) <= 1e-10);
}

TEST_CASE("divergence and curl match naive DFT oracles on 8x8") {
  std::mt19937_64 rng(15);
  const Grid g(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = random_vector(g, rng);
    const auto div_oracle = naive_derivative(w.u(), true) + naive_derivative(w.v(), false);
    CHECK(max_abs_diff(divergence(w), div_oracle) <= 1e-12 * (1.0 + max_abs(div_oracle)));
    const auto curl_oracle = naive_derivative(w.v(), true) - naive_derivative(w.u(), false);
    CHECK(max_abs_diff(curl_scalar(w), curl_oracle) <= 1e-12 * (1.0 + max_abs(curl_oracle)));
  }
}

TEST_CASE("scalar curl: analytic cases") {
  const Grid g(32);
  const auto shear = VectorField2::from_functions(
      g, [](double, double y) { return -std::sin(2.0 * pi * y); }, [](double, double) { return 0.0; });
  const auto expected = ScalarField::from_function(g, [](double, double y) { return 2.0 * pi * std::cos(2.0 * pi * y); });
  CHECK(max_abs_diff(curl_scalar(shear), expected) <= 1e-10);

  std::mt19937_64 rng(16);
  const auto grad = gradient(smooth_scalar(g, rng));
  CHECK(l2_norm(curl_scalar(grad)) <= 1e-12 * l2_norm(grad));

  const auto tg = VectorField2::from_functions(
      g, [](double x, double y) { return std::sin(2.0 * pi * x) * std::cos(2.0 * pi * y); },
      [](double x, double y) { return -std::cos(2.0 * pi * x) * std::sin(2.0 * pi * y); });
  const auto tg_vorticity = ScalarField::from_function(g, [](double x, double y) {
    return 4.0 * pi * std::sin(2.0 * pi * x) * std::sin(2.0 * pi * y);
  });
  CHECK(max_abs_diff(curl_scalar(tg), tg_vorticity) <= 1e-10);
}

TEST_CASE("curl_perp: analytic case, linearity, norm identity, image") {
  const Grid g(16);
  const auto psi = ScalarField::from_function(g, [](double, double y) { return std::sin(2.0 * pi * y); });
  const auto w = curl_perp(psi);
  const auto expected_u = ScalarField::from_function(g, [](double, double y) { return 2.0 * pi * std::cos(2.0 * pi * y); });
  CHECK(max_abs_diff(w.u(), expected_u) <= 1e-10);
  CHECK(max_abs(w.v()) <= 1e-10);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p1 = random_scalar(g, rng);
    const auto p2 = random_scalar(g, rng);
    const double a = coef(rng), b = coef(rng);
    const auto lhs = curl_perp(a * p1 + b * p2);
    const auto rhs = a * curl_perp(p1) + b * curl_perp(p2);
    CHECK(l2_norm(lhs - rhs) <= 1e-13 * l2_norm(rhs));

    const auto perp = curl_perp(p1);
    const auto grad = gradient(p1);
    CHECK(std::abs(l2_norm(perp) - l2_norm(grad)) <= 1e-12 * l2_norm(grad));
    CHECK(l2_norm(divergence(perp)) <= 1e-12 * l2_norm(perp));
    CHECK(std::abs(mean(perp.u())) <= 1e-13 * l2_norm(perp));
    CHECK(std::abs(mean(perp.v())) <= 1e-13 * l2_norm(perp));
  }
}

TEST_CASE("two-thirds dealiasing mask") {
  const Grid g(64);
  SpectralField f(g);
  for (auto& c : f.coeffs()) c = Complex(1.0, -0.5);
  const auto d = dealias_two_thirds(f);
  CHECK(d(31, 0) == Complex(0.0, 0.0));
  CHECK(d(22, 0) == Complex(0.0, 0.0));
  CHECK(d(21, 0) == Complex(1.0, -0.5));
  CHECK(d(1, 1) == Complex(1.0, -0.5));
  CHECK(d(64 - 21, 64 - 21) == Complex(1.0, -0.5));
  CHECK(d(64 - 22, 3) == Complex(0.0, 0.0));

  const auto dd = dealias_two_thirds(d);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(dd.coeffs()[i] == d.coeffs()[i]);
}

TEST_CASE("L2 inner product") {
  std::mt19937_64 rng(18);
  const Grid g(8);
  const auto a = random_vector(g, rng);
  const auto b = random_vector(g, rng);
  CHECK(l2_inner(a, a) > 0.0);
  CHECK(l2_inner(VectorField2(g), VectorField2(g)) == 0.0);
  CHECK(l2_inner(a, b) == doctest::Approx(l2_inner(b, a)).epsilon(1e-15));

  double midpoint = 0.0;
  for (int iy = 0; iy < 8; ++iy)
    for (int ix = 0; ix < 8; ++ix) midpoint += (a.u()(ix, iy) * b.u()(ix, iy) + a.v()(ix, iy) * b.v()(ix, iy)) / 64.0;
  CHECK(std::abs(l2_inner(a, b) - midpoint) <= 1e-14);

  const Grid h(32);
  for (int trial = 0; trial < 20; ++trial) {
    const auto perp = curl_perp(random_scalar(h, rng));
    const auto grad = gradient(random_scalar(h, rng));
    CHECK(std::abs(l2_inner(perp, grad)) <= 1e-10 * l2_norm(perp) * l2_norm(grad));
  }
}
