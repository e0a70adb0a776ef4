// environment.cpp: correlation models

#include "dwell/environment.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace dwell {

double min_eigenvalue4(const Matrix4c& m)
{
    const Matrix4c sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

CorrelationModel::CorrelationModel(CorrelationKind kind, const Matrix4c& G, double mu)
    : kind_(kind), G_(G), mu_(mu)
{
    if (!G.allFinite()) throw std::invalid_argument("G has non-finite entries");
    if ((G - G.adjoint()).cwiseAbs().maxCoeff() > kHermiticityTol) {
        throw std::invalid_argument("G must be Hermitian");
    }
    if (kind == CorrelationKind::Delta && G.imag().cwiseAbs().maxCoeff() > kHermiticityTol) {
        throw std::invalid_argument("delta-correlated G must be real symmetric");
    }
    if (min_eigenvalue4(G) < kPsdTol) {
        throw std::invalid_argument("G must be positive semidefinite");
    }
    if (kind == CorrelationKind::Exponential && !(mu > 0.0 && std::isfinite(mu))) {
        throw std::invalid_argument("exponential decay rate mu must be > 0");
    }
}

CorrelationModel CorrelationModel::exponential(const Matrix4c& G, double mu)
{
    return CorrelationModel(CorrelationKind::Exponential, G, mu);
}

CorrelationModel CorrelationModel::delta(const Matrix4c& G)
{
    return CorrelationModel(CorrelationKind::Delta, G, 0.0);
}

// With G = A + B, A Hermitian, B anti-Hermitian:
//   c(w) = G / (mu + i w) + G^dag / (mu - i w) = A 2mu / (mu^2 + w^2) - B 2i w / (mu^2 + w^2)
//   s(w) = -A w / (mu^2 + w^2) - B i mu / (mu^2 + w^2)
// B vanishes for every admissible model; it is kept so the formulas follow the
// declared negative-time extension exactly.
Matrix4c fourier_c(const CorrelationModel& model, double omega)
{
    if (model.kind() == CorrelationKind::Delta) return model.G();
    const double mu = model.mu();
    const double den = mu * mu + omega * omega;
    const Matrix4c herm = 0.5 * (model.G() + model.G().adjoint());
    const Matrix4c anti = 0.5 * (model.G() - model.G().adjoint());
    return herm * (2.0 * mu / den) - anti * std::complex<double>(0.0, 2.0 * omega / den);
}

Matrix4c hilbert_s(const CorrelationModel& model, double omega)
{
    if (model.kind() == CorrelationKind::Delta) return Matrix4c::Zero();
    const double mu = model.mu();
    const double den = mu * mu + omega * omega;
    const Matrix4c herm = 0.5 * (model.G() + model.G().adjoint());
    const Matrix4c anti = 0.5 * (model.G() - model.G().adjoint());
    return herm * (-omega / den) - anti * std::complex<double>(0.0, mu / den);
}

SpectralMatrix spectral(const CorrelationModel& model, double omega)
{
    return {omega, fourier_c(model, omega), hilbert_s(model, omega)};
}

CorrelationModel equal_coupling_model(CorrelationKind kind, const Eigen::Vector2d& g_diag, double mu,
                                      std::complex<double> g12)
{
    if (!(g_diag(0) > 0.0) || !(g_diag(1) > 0.0)) {
        throw std::invalid_argument("equal-coupling diagonal strengths must be positive");
    }
    Eigen::Matrix2cd a;
    a << g_diag(0), g12, std::conj(g12), g_diag(1);
    Matrix4c G;
    G << a, a, a, a;
    return kind == CorrelationKind::Delta ? CorrelationModel::delta(G)
                                          : CorrelationModel::exponential(G, mu);
}

} // namespace dwell
