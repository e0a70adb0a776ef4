// analytics.cpp: closed-form slopes

#include "dwell/analytics.hpp"

#include "dwell/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dwell {

namespace {

constexpr Complex kI{0.0, 1.0};

// 1-based access to keep the formulas readable.
Complex at(const Matrix4c& m, int i, int j) { return m(i - 1, j - 1); }

} // namespace

Complex kossakowski_h13(const Matrix4c& c)
{
    return at(c, 1, 3) + at(c, 2, 4) + kI * (at(c, 2, 3) - at(c, 1, 4));
}

Complex kossakowski_h24(const Matrix4c& c)
{
    return at(c, 1, 3) + at(c, 2, 4) + kI * (at(c, 1, 4) - at(c, 2, 3));
}

double slope_weak_exact(int N, const ModelParams& p, const CorrelationModel& model)
{
    if (N < 1) throw std::invalid_argument("slope_weak_exact requires N >= 1");
    const auto ladder = bohr_frequencies(p, N + 1);
    const double w_n = ladder[static_cast<std::size_t>(N)].omega;
    const double w_below = ladder[static_cast<std::size_t>(N - 1)].omega;

    const Complex h31 = std::conj(kossakowski_h13(fourier_c(model, w_n)));
    const Complex h24 = kossakowski_h24(fourier_c(model, -w_below));
    const double n = N;
    return 2.0 * p.lambda * p.lambda * ((n + 1) * (n + 1) * h31.imag() + n * n * h24.imag());
}

double slope_weak_lorentzian(int N, const ModelParams& p, const CorrelationModel& model)
{
    if (model.kind() != CorrelationKind::Exponential) {
        throw std::invalid_argument("Lorentzian slope needs an exponential model");
    }
    const auto ladder = bohr_frequencies(p, N + 1);
    const double w = ladder[static_cast<std::size_t>(N)].omega;
    const double mu = model.mu();
    const double dg = (at(model.G(), 1, 4) - at(model.G(), 2, 3)).real();
    return 8.0 * p.lambda * p.lambda * N * N * mu / (mu * mu + w * w) * dg;
}

double slope_weak_large_n(const ModelParams& p, const CorrelationModel& model)
{
    if (model.kind() != CorrelationKind::Exponential) {
        throw std::invalid_argument("large-N slope needs an exponential model");
    }
    const double dg = (at(model.G(), 1, 4) - at(model.G(), 2, 3)).real();
    return 2.0 * p.lambda * p.lambda * model.mu() * dg / (p.U * p.U);
}

double slope_singular(int N, double lambda, const Matrix4c& G)
{
    if (N < 0) throw std::invalid_argument("slope_singular requires N >= 0");
    const double im = (at(G, 3, 1) + at(G, 4, 2)).imag();
    const double re = (at(G, 1, 4) - at(G, 2, 3)).real();
    return 2.0 * lambda * lambda * ((2.0 * N + 1.0) * im + re);
}

SlopeReport compare(const LindbladGenerator& gen, const DensityMatrix& rho0, double analytic,
                    std::optional<double> analytic_large_n)
{
    SlopeReport r;
    r.numeric = current_slope(gen, rho0);
    r.analytic = analytic;
    r.analytic_large_n = analytic_large_n;
    r.abs_deviation = std::abs(r.numeric - r.analytic);
    r.rel_deviation = r.abs_deviation / std::max(std::abs(r.analytic), 1e-300);
    r.degenerate = std::abs(r.analytic) < kDegenerateSlope;
    return r;
}

} // namespace dwell
