#include "divfree/diagnostics.hpp"

#include <cmath>
#include <numbers>

#include "divfree/errors.hpp"
#include "divfree/fft.hpp"
#include "divfree/kernels.hpp"
#include "divfree/spectral.hpp"

namespace divfree {

ComponentMse mse(const VectorField2& pred, const VectorField2& ref) {
  if (!(pred.grid() == ref.grid())) throw InvalidArgument("mse: grid mismatch");
  const Grid& grid = pred.grid();
  const ScalarField du = pred.u() - ref.u();
  const ScalarField dv = pred.v() - ref.v();
  const double n = static_cast<double>(grid.size());
  return {kernels::omp::dot(grid, du.values(), du.values()) / n,
          kernels::omp::dot(grid, dv.values(), dv.values()) / n};
}

double divergence_error(const VectorField2& u) {
  const ScalarField div = divergence(u);
  return kernels::omp::dot(div.grid(), div.values(), div.values()) / static_cast<double>(div.grid().size());
}

ScalarField pressure_reconstruct(const VectorField2& u) {
  const Grid& grid = u.grid();
  const double norm = l2_norm(u);
  if (norm > 0.0 && l2_norm(divergence(u)) > 1e-6 * norm)
    warn("pressure_reconstruct: input is not divergence-free; pressure is a consistency probe only");

  const auto hat = forward_fft2(u);
  auto derivative = [&](const SpectralField& f, Axis axis) { return inverse_fft2(spectral_derivative(f, axis, 1)); };
  const ScalarField ux = derivative(hat.u, Axis::x);
  const ScalarField uy = derivative(hat.u, Axis::y);
  const ScalarField vx = derivative(hat.v, Axis::x);
  const ScalarField vy = derivative(hat.v, Axis::y);

  // (u . grad) u, component-wise, then dealiased.
  ScalarField ax(grid);
  ScalarField ay(grid);
  kernels::omp::advection(u.u().values(), u.v().values(), ux.values(), uy.values(), ax.values());
  kernels::omp::advection(u.u().values(), u.v().values(), vx.values(), vy.values(), ay.values());
  SpectralVector adv = forward_fft2(VectorField2(std::move(ax), std::move(ay)));
  kernels::omp::dealias(grid, adv.u.coeffs());
  kernels::omp::dealias(grid, adv.v.coeffs());

  const double s = 2.0 * std::numbers::pi / grid.length();
  SpectralField p(grid);
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, grid.ny());
    const int ey = odd_wavenumber(ky, grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = WavenumberTable::wavenumber(ix, grid.nx());
      const int ex = odd_wavenumber(kx, grid.nx());
      if (kx == 0 && ky == 0) continue;
      const auto i = grid.index(ix, iy);
      const Complex div = Complex(0.0, s * ex) * adv.u.coeffs()[i] + Complex(0.0, s * ey) * adv.v.coeffs()[i];
      // -lap p = div  =>  s^2 |k|^2 p = div
      p.coeffs()[i] = div / (s * s * (static_cast<double>(kx) * kx + static_cast<double>(ky) * ky));
    }
  }
  return inverse_fft2(p);
}

SpectrumCurve shell_spectrum(const ScalarField& f) {
  const Grid& grid = f.grid();
  const SpectralField hat = forward_fft2(f);
  const double norm = 1.0 / (static_cast<double>(grid.size()) * static_cast<double>(grid.size()));
  const int max_shell = static_cast<int>(std::lround(std::hypot(grid.nx() / 2.0, grid.ny() / 2.0)));
  SpectrumCurve curve;
  curve.shells.resize(max_shell);
  curve.values.assign(max_shell, 0.0);
  for (int k = 1; k <= max_shell; ++k) curve.shells[k - 1] = k;
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = WavenumberTable::wavenumber(ix, grid.nx());
      const int shell = static_cast<int>(std::floor(std::hypot(kx, ky) + 0.5));
      if (shell == 0) continue;
      curve.values[shell - 1] += 0.5 * std::norm(hat(ix, iy)) * norm;
    }
  }
  return curve;
}

SpectrumCurve enstrophy_spectrum(const VectorField2& u) { return shell_spectrum(curl_scalar(u)); }

SpectrumCurve energy_spectrum(const VectorField2& u) {
  SpectrumCurve a = shell_spectrum(u.u());
  const SpectrumCurve b = shell_spectrum(u.v());
  for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
  return a;
}

SpectrumCurve spectrum(const VectorField2& u, SpectrumKind kind) {
  return kind == SpectrumKind::enstrophy ? enstrophy_spectrum(u) : energy_spectrum(u);
}

double spectral_slope(const SpectrumCurve& curve, int k_min, int k_max) {
  if (curve.shells.empty() || k_min < 1 || k_min >= k_max || k_max > curve.shells.back())
    throw InvalidArgument("spectral_slope: need 1 <= k_min < k_max <= max shell");
  // log v = log m + e ln 2 with v = m 2^e. Exponents enter only through
  // integer differences, so rescaling the curve by a power of two leaves the
  // fit bit-identical; other factors change it by rounding only.
  std::vector<double> xs, log_m;
  std::vector<int> exps;
  for (std::size_t i = 0; i < curve.shells.size(); ++i) {
    const int k = curve.shells[i];
    if (k < k_min || k > k_max) continue;
    if (!(curve.values[i] > 0.0))
      throw InvalidArgument("spectral_slope: nonpositive value at shell " + std::to_string(k));
    int e = 0;
    const double m = std::frexp(curve.values[i], &e);
    xs.push_back(std::log(static_cast<double>(k)));
    log_m.push_back(std::log(m));
    exps.push_back(e);
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  for (double x : xs) mx += x;
  mx /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    sxx += dx * dx;
    sxy += dx * (log_m[i] + static_cast<double>(exps[i] - exps[0]) * std::numbers::ln2);
  }
  return sxy / sxx;
}

std::string stage_name(Stage stage, std::size_t position) {
  switch (stage) {
    case Stage::prediction: return "prediction";
    case Stage::short_term: return "short_term";
    case Stage::long_term: return "long_term";
    case Stage::custom: break;
  }
  return "stage" + std::to_string(position);
}

namespace {

void mean_std(const std::vector<double>& xs, double& mean, double& std_dev) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  std_dev = std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace

std::vector<StageReport> stage_report(const std::vector<VectorField2>& pred, const std::vector<VectorField2>& ref,
                                      const std::vector<FrameRange>& stages) {
  if (pred.size() != ref.size()) throw InvalidArgument("stage_report: trajectories differ in length");
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (!(pred[i].grid() == ref[i].grid())) throw InvalidArgument("stage_report: grid mismatch");
  for (const auto& r : stages)
    if (r.start > r.end || r.end >= pred.size())
      throw InvalidArgument("stage_report: stage " + std::to_string(r.start) + ":" + std::to_string(r.end) +
                            " outside trajectory of " + std::to_string(pred.size()) + " frames");

  std::vector<FrameMetrics> per_frame(pred.size());
  const auto n = static_cast<std::ptrdiff_t>(pred.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto m = mse(pred[i], ref[i]);
    per_frame[i] = {static_cast<std::size_t>(i), m.u_mse, m.v_mse, divergence_error(pred[i])};
  }

  const Stage named[] = {Stage::prediction, Stage::short_term, Stage::long_term};
  std::vector<StageReport> reports;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    StageReport r;
    r.stage = stage_name(s < 3 ? named[s] : Stage::custom, s);
    r.frame_range = stages[s];
    std::vector<double> us, vs, ds;
    for (std::size_t f = stages[s].start; f <= stages[s].end; ++f) {
      r.frames.push_back(per_frame[f]);
      us.push_back(per_frame[f].u_mse);
      vs.push_back(per_frame[f].v_mse);
      ds.push_back(per_frame[f].div_mse);
    }
    mean_std(us, r.u_mse, r.u_mse_std);
    mean_std(vs, r.v_mse, r.v_mse_std);
    mean_std(ds, r.div_mse, r.div_mse_std);
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<StageReport> stage_report(const Trajectory& pred, const Trajectory& ref,
                                      const std::vector<FrameRange>& stages) {
  if (pred.times != ref.times) throw InvalidArgument("stage_report: trajectories are not aligned in time");
  return stage_report(pred.frames, ref.frames, stages);
}

}  // namespace divfree
