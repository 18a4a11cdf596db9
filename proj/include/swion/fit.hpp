#pragma once

#include <array>
#include <span>
#include <vector>

#include "swion/crystal.hpp"

namespace swion {

struct ScanPoint {
  double distance = 0.0;    // m, two-ion spacing
  double power_mean = 0.0;  // counts^2
  double power_sem = 0.0;   // counts^2
  std::size_t n_runs = 1;

  void validate() const;
};

/// One beat-power measurement tagged with its scan point.
struct PowerSample {
  std::size_t point = 0;
  double distance = 0.0;
  double power = 0.0;
};

/// Groups samples by point index; sem is the sample standard deviation
/// over sqrt(n) (zero for single-run points). Sorted by point index.
std::vector<ScanPoint> aggregate_powers(std::span<const PowerSample> samples);

struct FitOptions {
  double lambda_guess = 267e-9;  // m
  /// Multistart candidates cover [guess / (1 + span), guess * (1 + span)],
  /// uniformly in wavenumber.
  double lambda_span = 0.5;
  std::vector<double> temperature_guesses = {0.3e-3, 1e-3, 2e-3, 4e-3, 8e-3, 16e-3};  // K
  std::size_t refine_candidates = 5;
  double gradient_tol = 1e-10;
  double step_tol = 1e-12;
  int max_iterations = 10000;
};

struct FitResult {
  double lambda_eff = 0.0;   // m
  double temperature = 0.0;  // K
  double scale = 0.0;        // counts^2
  double lambda_sigma = 0.0;
  double temperature_sigma = 0.0;
  double scale_sigma = 0.0;
  /// Weighted chi-square over (points - 3). With uniform weights the
  /// residuals are normalized by the largest measured power.
  double residual_norm = 0.0;
  bool weighted = false;
  bool converged = false;
  int iterations = 0;
  std::size_t n_points = 0;
};

struct DerivedQuantities {
  double omega0 = 0.0;  // rad/s
  double nbar_com = 0.0;
  double nbar_str = 0.0;
  double eta = 0.0;
};

/// Sum of squared COM and stretch widths of a two-ion crystal at
/// axial frequency omega0 and temperature T.
double two_ion_width_sq(double omega0, double temperature, const IonSpecies& species);

/// scale * [cos(pi d / lambda) exp(-(1/4)(2 pi/lambda)^2 (s0^2 + s1^2))]^2,
/// with omega0 recovered from the spacing d. cos(pi d / lambda) is
/// cos(dk l0) with l0 = d/2.
double model_power(double distance, double lambda_eff, double temperature, double scale,
                   const IonSpecies& species);

/// d model_power / d(lambda, T, scale).
std::array<double, 3> model_power_gradient(double distance, double lambda_eff, double temperature,
                                           double scale, const IonSpecies& species);

FitResult fit_scan(std::span<const ScanPoint> points, const IonSpecies& species,
                   const FitOptions& options = {});

DerivedQuantities derive_quantities(const FitResult& fit, double omega0, const IonSpecies& species);

}  // namespace swion
