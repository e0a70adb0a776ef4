// analytics.hpp: closed-form initial current slopes for a Mott state |N,N>

#pragma once

#include "dwell/environment.hpp"
#include "dwell/generator.hpp"
#include "dwell/model.hpp"

#include <optional>

namespace dwell {

struct SlopeReport {
    double numeric = 0.0;
    double analytic = 0.0;
    std::optional<double> analytic_large_n;
    double abs_deviation = 0.0;
    double rel_deviation = 0.0;  // |numeric - analytic| / max(|analytic|, 1e-300)
    bool degenerate = false;     // analytic slope vanishes; judge by abs_deviation
};

inline constexpr double kDegenerateSlope = 1e-15;

// Individual weak-coupling Kossakowski entries as linear combinations of c_ij(omega).
Complex kossakowski_h13(const Matrix4c& c);
Complex kossakowski_h24(const Matrix4c& c);

// 2 lambda^2 [ (N+1)^2 Im h31(omega_N) + N^2 Im h24(-omega_{N-1}) ]
double slope_weak_exact(int N, const ModelParams& p, const CorrelationModel& model);

// 8 lambda^2 N^2 mu / (mu^2 + omega_N^2) Re(G14 - G23): fast-bath, large-N intermediate form.
double slope_weak_lorentzian(int N, const ModelParams& p, const CorrelationModel& model);

// 2 lambda^2 mu Re(G14 - G23) / U^2
double slope_weak_large_n(const ModelParams& p, const CorrelationModel& model);

// 2 lambda^2 [ (2N+1) Im(G31 + G42) + Re(G14 - G23) ]
double slope_singular(int N, double lambda, const Matrix4c& G);

SlopeReport compare(const LindbladGenerator& gen, const DensityMatrix& rho0, double analytic,
                    std::optional<double> analytic_large_n = std::nullopt);

} // namespace dwell
