// environment.hpp: bath two-point correlation models and their Fourier / Hilbert transforms

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace dwell {

using Matrix4c = Eigen::Matrix4cd;

enum class CorrelationKind { Exponential, Delta };

/// Correlation strengths G_ij for the four couplings V_i (x) B_i.
///
/// Exponential: G_ij(t) = G_ij exp(-mu t) for t >= 0, extended to t < 0 by
/// G_ij(-t) = conj(G_ji(t)).
/// Delta: G_ij(t) = G_ij delta(t), G real symmetric.
///
/// G is required Hermitian and positive semidefinite; the factories throw
/// std::invalid_argument otherwise.
class CorrelationModel {
public:
    static constexpr double kHermiticityTol = 1e-12;
    static constexpr double kPsdTol = -1e-10;

    static CorrelationModel exponential(const Matrix4c& G, double mu);
    static CorrelationModel delta(const Matrix4c& G);

    CorrelationKind kind() const noexcept { return kind_; }
    const Matrix4c& G() const noexcept { return G_; }
    double mu() const noexcept { return mu_; }

private:
    CorrelationModel(CorrelationKind kind, const Matrix4c& G, double mu);

    CorrelationKind kind_;
    Matrix4c G_;
    double mu_;
};

struct SpectralMatrix {
    double omega;
    Matrix4c c;
    Matrix4c s;
};

// c_ij(omega) = int dt exp(-i omega t) G_ij(t)
Matrix4c fourier_c(const CorrelationModel& model, double omega);

// s_ij(omega) = (1 / 2 pi) PV int dw c_ij(w) / (w - omega)
Matrix4c hilbert_s(const CorrelationModel& model, double omega);

SpectralMatrix spectral(const CorrelationModel& model, double omega);

/// Well-symmetric coupling B_1 = B_3, B_2 = B_4: G = [[A, A], [A, A]] with
/// A = [[g1, g12], [conj(g12), g2]]. mu is ignored for the Delta kind.
CorrelationModel equal_coupling_model(CorrelationKind kind, const Eigen::Vector2d& g_diag, double mu,
                                      std::complex<double> g12 = 0.0);

// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue4(const Matrix4c& m);

} // namespace dwell
