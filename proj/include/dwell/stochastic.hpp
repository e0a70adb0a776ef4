// stochastic.hpp: Gaussian white-noise unraveling of the singular-coupling dynamics
//
// Each trajectory evolves unitarily under H(t) = H_S + lambda sum_i V_i xi_i(t) with
// <xi_i(t) xi_j(s)> = G_ij delta(t - s). Noise is piecewise constant over a step and
// every step is exponentiated exactly (Wong-Zakai, i.e. Stratonovich), with a Strang
// split around the free Hamiltonian. The average over trajectories approaches the
// singular-coupling master equation with Kossakowski matrix kappa * G, where kappa is
// the calibration factor below.

#pragma once

#include "dwell/evolution.hpp"
#include "dwell/model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace dwell {

struct NoiseConfig {
    Eigen::Matrix4d G = Eigen::Matrix4d::Zero();
    double dt = 0.01;
    std::uint64_t seed = 0;
    int trajectories = 1;
    std::array<bool, 4> channels{true, true, true, true};

    void validate() const;
    // G with masked channels zeroed.
    Eigen::Matrix4d effective_G() const;
};

struct EnsembleResult {
    Trajectory mean;
    std::vector<double> j_stderr;  // sample stddev of <J> / sqrt(M)
    int trajectories = 0;
    std::uint64_t seed = 0;
    std::optional<double> dt_halving_shift;  // |<J(t_max)>_dt - <J(t_max)>_{dt/2}| when checked
};

class StepSizeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct EnsembleOptions {
    bool check_convergence = false;
    double convergence_tolerance = 1.0;  // allowed dt-halving shift, in standard errors
    unsigned threads = 0;                // 0: hardware concurrency
};

// Frozen white-noise -> Kossakowski factor, confirmed by calibrate_noise.
inline constexpr double kWhiteNoiseCalibration = 1.0;

EnsembleResult run_ensemble(const FockBasis& basis, const ModelParams& p, const NoiseConfig& noise,
                            const DensityMatrix& rho0, const std::vector<double>& t_grid,
                            const EnsembleOptions& options = {});

// With convention_probe, runs a single-channel two-level micro-ensemble, fits the decay
// of <sigma_z> and returns the measured factor; otherwise returns kWhiteNoiseCalibration.
double calibrate_noise(const Eigen::Matrix4d& G, bool convention_probe, std::uint64_t seed = 1,
                       int trajectories = 1'000'000);

// Delta-correlated model the ensemble converges to.
CorrelationModel calibrated_singular_model(const NoiseConfig& noise, double factor = kWhiteNoiseCalibration);

// Symmetric square root of a PSD matrix, negative round-off eigenvalues clipped.
Eigen::Matrix4d psd_sqrt(const Eigen::Matrix4d& G);

// Counter-based seed for trajectory `index` of a run.
std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index);

} // namespace dwell
