#include "swion/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "swion/constants.hpp"

namespace swion {

using namespace constants;

void ScanPoint::validate() const {
  if (!(distance > 0.0)) throw std::invalid_argument("scan point distance must be positive");
  if (!(power_sem >= 0.0)) throw std::invalid_argument("scan point sem must be non-negative");
  if (n_runs < 1) throw std::invalid_argument("scan point needs at least one run");
  if (!std::isfinite(power_mean)) throw std::invalid_argument("scan point power must be finite");
}

std::vector<ScanPoint> aggregate_powers(std::span<const PowerSample> samples) {
  std::map<std::size_t, std::vector<const PowerSample*>> groups;
  for (const auto& s : samples) groups[s.point].push_back(&s);
  std::vector<ScanPoint> out;
  for (const auto& [idx, members] : groups) {
    ScanPoint p;
    p.distance = members.front()->distance;
    p.n_runs = members.size();
    double sum = 0.0;
    for (const auto* m : members) sum += m->power;
    p.power_mean = sum / static_cast<double>(p.n_runs);
    if (p.n_runs > 1) {
      double ss = 0.0;
      for (const auto* m : members) ss += (m->power - p.power_mean) * (m->power - p.power_mean);
      p.power_sem = std::sqrt(ss / static_cast<double>(p.n_runs - 1) / static_cast<double>(p.n_runs));
    }
    out.push_back(p);
  }
  return out;
}

double two_ion_width_sq(double omega0, double temperature, const IonSpecies& species) {
  double total = 0.0;
  for (double w : {omega0, std::sqrt(3.0) * omega0}) {
    const double s0 = ground_sigma(w, species);
    total += (mean_phonon_number(w, temperature) + 0.5) * s0 * s0;
  }
  return total;
}

double model_power(double distance, double lambda_eff, double temperature, double scale,
                   const IonSpecies& species) {
  const double omega0 = axial_freq_for_spacing(distance, species);
  const double k = kTwoPi / lambda_eff;
  const double c = std::cos(std::numbers::pi * distance / lambda_eff);
  const double amp = c * std::exp(-0.25 * k * k * two_ion_width_sq(omega0, temperature, species));
  return scale * amp * amp;
}

std::array<double, 3> model_power_gradient(double distance, double lambda_eff, double temperature,
                                           double scale, const IonSpecies& species) {
  const double omega0 = axial_freq_for_spacing(distance, species);
  const double omega1 = std::sqrt(3.0) * omega0;
  const double k = kTwoPi / lambda_eff;
  const double width_sq = two_ion_width_sq(omega0, temperature, species);
  const double dwidth_dT =
      kBoltzmann / (2.0 * species.mass) * (1.0 / (omega0 * omega0) + 1.0 / (omega1 * omega1));

  const double phase = std::numbers::pi * distance / lambda_eff;
  const double c = std::cos(phase);
  const double dc_dlambda = std::sin(phase) * phase / lambda_eff;
  const double e2 = std::exp(-0.5 * k * k * width_sq);  // squared thermal factor
  const double unit = c * c * e2;

  const double d_lambda = scale * e2 * (2.0 * c * dc_dlambda + c * c * k * k * width_sq / lambda_eff);
  const double d_temp = scale * unit * (-0.5 * k * k * dwidth_dT);
  return {d_lambda, d_temp, unit};
}

namespace {

constexpr double kLambdaUnit = 1e-9;
constexpr double kTempUnit = 1e-3;

// Least-squares problem in scaled parameters (nm, mK, scale / scale_ref).
struct Problem {
  std::span<const ScanPoint> points;
  IonSpecies species;
  std::vector<double> weights;
  double scale_ref = 1.0;

  std::array<double, 3> physical(const Eigen::Vector3d& theta) const {
    return {theta(0) * kLambdaUnit, theta(1) * kTempUnit, theta(2) * scale_ref};
  }

  Eigen::VectorXd residuals(const Eigen::Vector3d& theta) const {
    const auto [lambda, temp, scale] = physical(theta);
    Eigen::VectorXd r(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      r(static_cast<Eigen::Index>(i)) =
          weights[i] * (model_power(points[i].distance, lambda, temp, scale, species) -
                        points[i].power_mean);
    }
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::Vector3d& theta) const {
    const auto [lambda, temp, scale] = physical(theta);
    Eigen::MatrixXd j(static_cast<Eigen::Index>(points.size()), 3);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto g = model_power_gradient(points[i].distance, lambda, temp, scale, species);
      const auto row = static_cast<Eigen::Index>(i);
      j(row, 0) = weights[i] * g[0] * kLambdaUnit;
      j(row, 1) = weights[i] * g[1] * kTempUnit;
      j(row, 2) = weights[i] * g[2] * scale_ref;
    }
    return j;
  }
};

struct LmOutcome {
  Eigen::Vector3d theta = Eigen::Vector3d::Zero();
  double cost = 0.0;  // sum of squared residuals
  bool converged = false;
  int iterations = 0;
};

void clamp_feasible(Eigen::Vector3d& theta) {
  theta(1) = std::max(theta(1), 0.0);
  theta(2) = std::max(theta(2), 0.0);
}

LmOutcome levenberg_marquardt(const Problem& prob, Eigen::Vector3d theta, const FitOptions& opt) {
  clamp_feasible(theta);
  Eigen::VectorXd r = prob.residuals(theta);
  double cost = r.squaredNorm();
  double mu = -1.0;
  double nu = 2.0;

  LmOutcome out;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    out.iterations = iter + 1;
    const Eigen::MatrixXd j = prob.jacobian(theta);
    const Eigen::Vector3d g = j.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < opt.gradient_tol) {
      out.converged = true;
      break;
    }
    const Eigen::Matrix3d a = j.transpose() * j;
    if (mu < 0.0) mu = 1e-3 * a.diagonal().maxCoeff();

    Eigen::Matrix3d damped = a;
    for (int d = 0; d < 3; ++d) damped(d, d) += mu * std::max(a(d, d), 1e-12);
    const Eigen::Vector3d step = damped.ldlt().solve(-g);
    if (!step.allFinite()) break;
    if (step.norm() <= opt.step_tol * (theta.norm() + opt.step_tol)) {
      out.converged = true;
      break;
    }

    Eigen::Vector3d trial = theta + step;
    clamp_feasible(trial);
    const Eigen::VectorXd r_trial = prob.residuals(trial);
    const double cost_trial = r_trial.squaredNorm();
    const double predicted = -(2.0 * g.dot(step) + step.dot(a * step));
    if (std::isfinite(cost_trial) && cost_trial < cost) {
      const double rho = predicted > 0.0 ? (cost - cost_trial) / predicted : 1.0;
      theta = trial;
      r = r_trial;
      cost = cost_trial;
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
    } else {
      mu *= nu;
      nu *= 2.0;
      if (!std::isfinite(mu)) break;
    }
  }
  out.theta = theta;
  out.cost = cost;
  return out;
}

struct Candidate {
  double cost;
  double lambda;
  double temperature;
  double scale;
};

}  // namespace

FitResult fit_scan(std::span<const ScanPoint> points, const IonSpecies& species,
                   const FitOptions& options) {
  species.validate();
  if (points.size() < 4) {
    throw std::invalid_argument("scan fit is underdetermined: need at least 4 points, got " +
                                std::to_string(points.size()));
  }
  double d_min = std::numeric_limits<double>::infinity();
  double d_max = 0.0;
  double y_max = 0.0;
  for (const auto& p : points) {
    p.validate();
    d_min = std::min(d_min, p.distance);
    d_max = std::max(d_max, p.distance);
    y_max = std::max(y_max, std::abs(p.power_mean));
  }
  if (!(options.lambda_guess > 0.0) || !(options.lambda_span > 0.0)) {
    throw std::invalid_argument("lambda guess and span must be positive");
  }
  if (!(d_max - d_min > options.lambda_guess)) {
    throw std::invalid_argument("scan fit is underdetermined: distances must span more than one period");
  }

  Problem prob{points, species, {}, y_max > 0.0 ? y_max : 1.0};
  const bool weighted =
      std::all_of(points.begin(), points.end(), [](const ScanPoint& p) { return p.power_sem > 0.0; });
  for (const auto& p : points) prob.weights.push_back(weighted ? 1.0 / p.power_sem : 1.0 / prob.scale_ref);

  // Grid in wavenumber: phase pi d / lambda moves by pi/8 at the far end
  // of the scan between neighbouring candidates.
  const double k_lo = 1.0 / (options.lambda_guess * (1.0 + options.lambda_span));
  const double k_hi = (1.0 + options.lambda_span) / options.lambda_guess;
  const double dk = 1.0 / (8.0 * d_max);
  std::vector<Candidate> candidates;
  for (double k = k_lo; k <= k_hi; k += dk) {
    for (double t0 : options.temperature_guesses) {
      double num = 0.0;
      double den = 0.0;
      std::vector<double> unit(points.size());
      for (std::size_t i = 0; i < points.size(); ++i) {
        unit[i] = model_power(points[i].distance, 1.0 / k, t0, 1.0, species);
        const double w2 = prob.weights[i] * prob.weights[i];
        num += w2 * unit[i] * points[i].power_mean;
        den += w2 * unit[i] * unit[i];
      }
      const double scale = den > 0.0 ? std::max(num / den, 0.0) : 0.0;
      double cost = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double res = prob.weights[i] * (scale * unit[i] - points[i].power_mean);
        cost += res * res;
      }
      candidates.push_back({cost, 1.0 / k, t0, scale});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });

  // Refine the best candidates from distinct wavenumber basins.
  std::vector<Candidate> seeds;
  for (const auto& c : candidates) {
    if (seeds.size() >= options.refine_candidates) break;
    const bool same_basin = std::any_of(seeds.begin(), seeds.end(), [&](const Candidate& s) {
      return std::abs(1.0 / c.lambda - 1.0 / s.lambda) < 0.5 / d_max;
    });
    if (!same_basin) seeds.push_back(c);
  }

  LmOutcome best;
  best.cost = std::numeric_limits<double>::infinity();
  for (const auto& s : seeds) {
    const Eigen::Vector3d theta0(s.lambda / kLambdaUnit, s.temperature / kTempUnit,
                                 s.scale / prob.scale_ref);
    const LmOutcome o = levenberg_marquardt(prob, theta0, options);
    if (o.cost < best.cost) best = o;
  }

  FitResult res;
  const auto [lambda, temp, scale] = prob.physical(best.theta);
  res.lambda_eff = lambda;
  res.temperature = temp;
  res.scale = scale;
  res.converged = best.converged;
  res.iterations = best.iterations;
  res.weighted = weighted;
  res.n_points = points.size();
  const double dof = static_cast<double>(points.size() - 3);
  res.residual_norm = best.cost / dof;

  const Eigen::MatrixXd j = prob.jacobian(best.theta);
  Eigen::Matrix3d cov = (j.transpose() * j).completeOrthogonalDecomposition().pseudoInverse();
  if (!weighted) cov *= res.residual_norm;
  res.lambda_sigma = std::sqrt(std::max(cov(0, 0), 0.0)) * kLambdaUnit;
  res.temperature_sigma = std::sqrt(std::max(cov(1, 1), 0.0)) * kTempUnit;
  res.scale_sigma = std::sqrt(std::max(cov(2, 2), 0.0)) * prob.scale_ref;
  return res;
}

DerivedQuantities derive_quantities(const FitResult& fit, double omega0, const IonSpecies& species) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("trap frequency must be positive");
  if (!(fit.lambda_eff > 0.0)) throw std::invalid_argument("fit wavelength must be positive");
  DerivedQuantities d;
  d.omega0 = omega0;
  d.nbar_com = mean_phonon_number(omega0, fit.temperature);
  d.nbar_str = d.nbar_com / std::sqrt(3.0);
  d.eta = kTwoPi / fit.lambda_eff * ground_sigma(omega0, species);
  return d;
}

}  // namespace swion
