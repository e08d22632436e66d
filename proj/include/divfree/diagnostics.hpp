#pragma once

#include <string>
#include <utility>
#include <vector>

#include "divfree/field.hpp"
#include "divfree/ns_solver.hpp"

namespace divfree {

struct ComponentMse {
  double u_mse = 0.0;
  double v_mse = 0.0;
};

ComponentMse mse(const VectorField2& pred, const VectorField2& ref);

/// Grid mean of (div u)^2 with the spectral divergence.
double divergence_error(const VectorField2& u);

/// Kinematic pressure from -lap p = div(u . grad u), zero mean. The advection
/// term is dealiased. Warns when u is not divergence-free to 1e-6 relative.
ScalarField pressure_reconstruct(const VectorField2& u);

/// Shell-binned spectrum, shells k = 1 .. max, nearest-integer radius.
struct SpectrumCurve {
  std::vector<int> shells;
  std::vector<double> values;
};

enum class SpectrumKind { enstrophy, energy };

/// Bins 1/2 |w(k)|^2 / (n_x n_y)^2 of the vorticity (or 1/2 |u(k)|^2 of the
/// velocity for the energy variant) into shells round(|k|). Shells run up to
/// the corner radius so the total reproduces the grid mean.
SpectrumCurve enstrophy_spectrum(const VectorField2& u);
SpectrumCurve energy_spectrum(const VectorField2& u);
SpectrumCurve shell_spectrum(const ScalarField& f);
SpectrumCurve spectrum(const VectorField2& u, SpectrumKind kind);

/// Least-squares slope of log(value) against log(k) over [k_min, k_max].
double spectral_slope(const SpectrumCurve& curve, int k_min, int k_max);

enum class Stage { prediction, short_term, long_term, custom };
std::string stage_name(Stage stage, std::size_t position);

struct FrameRange {
  std::size_t start;
  std::size_t end;  // inclusive
};

struct FrameMetrics {
  std::size_t frame;
  double u_mse;
  double v_mse;
  double div_mse;
};

struct StageReport {
  std::string stage;
  FrameRange frame_range;
  double u_mse = 0.0;
  double v_mse = 0.0;
  double div_mse = 0.0;
  double u_mse_std = 0.0;
  double v_mse_std = 0.0;
  double div_mse_std = 0.0;
  std::vector<FrameMetrics> frames;
};

/// Per-stage mean and population standard deviation of per-frame metrics.
/// div_mse is divergence_error of the prediction.
std::vector<StageReport> stage_report(const std::vector<VectorField2>& pred, const std::vector<VectorField2>& ref,
                                      const std::vector<FrameRange>& stages);
std::vector<StageReport> stage_report(const Trajectory& pred, const Trajectory& ref,
                                      const std::vector<FrameRange>& stages);

}  // namespace divfree
