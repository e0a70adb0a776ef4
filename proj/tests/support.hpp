// Shared fixtures and independent oracles for the test suites.

#pragma once

#include "dwell/analytics.hpp"
#include "dwell/environment.hpp"
#include "dwell/evolution.hpp"
#include "dwell/fock.hpp"
#include "dwell/generator.hpp"
#include "dwell/model.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <random>
#include <vector>

namespace dwell::testing {

inline ModelParams canonical_params() { return {0.01, 1.0, 0.5, 0.5, 0.05}; }

inline Matrix4c canonical_G()
{
    Matrix4c g = Matrix4c::Identity();
    g(0, 3) = g(3, 0) = 0.3;
    g(1, 2) = g(2, 1) = 0.1;
    return g;
}

inline constexpr int kCanonicalN = 2;
inline constexpr int kCanonicalNmax = 6;
inline constexpr double kCanonicalMu = 2.0;
inline constexpr double kCanonicalWeakSlope = 0.001 * (36.0 / 34.25 + 16.0 / 16.25);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    Complex cnormal() { return {normal(), normal()}; }

    Eigen::MatrixXcd ginibre(Eigen::Index rows, Eigen::Index cols)
    {
        Eigen::MatrixXcd m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j) {
            for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cnormal();
        }
        return m;
    }

    // Random density matrix of rank `rank`.
    OperatorMatrix density(Eigen::Index dim, Eigen::Index rank)
    {
        const Eigen::MatrixXcd a = ginibre(dim, rank);
        OperatorMatrix rho = a * a.adjoint();
        rho /= rho.trace().real();
        return 0.5 * (rho + rho.adjoint());
    }

    OperatorMatrix hermitian(Eigen::Index dim)
    {
        const Eigen::MatrixXcd a = ginibre(dim, dim);
        return 0.5 * (a + a.adjoint());
    }

    Matrix4c psd4()
    {
        const Eigen::MatrixXcd b = ginibre(4, 4);
        Matrix4c g = 0.25 * b * b.adjoint();
        return 0.5 * (g + g.adjoint());
    }

    Matrix4c real_psd4()
    {
        Eigen::Matrix4d b;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) b(i, j) = normal();
        }
        const Eigen::Matrix4d g = 0.25 * b * b.transpose();
        return (0.5 * (g + g.transpose())).cast<Complex>();
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// Dense superoperator of the weak-coupling generator built from first principles:
// Bohr-frequency components A_i(w) of the Hermitian couplings with respect to the
// uncoupled local Hamiltonian, rates c_ij(w) from the correlation model, and
//   D[rho] = sum_w sum_ij c_ij(w) (A_j(w) rho A_i(w)^dag - 1/2 {A_i(w)^dag A_j(w), rho}).
// Column-stacking convention vec(A X B) = (B^T kron A) vec X.
inline Eigen::MatrixXcd dense_weak_oracle(const FockBasis& basis, const ModelParams& p, const CorrelationModel& model)
{
    const Eigen::Index d = basis.dim();
    const OperatorMatrix id = OperatorMatrix::Identity(d, d);
    const OperatorMatrix h = bose_hubbard_hamiltonian(basis, p);
    ModelParams local = p;
    local.T = 0.0;
    const OperatorMatrix h0 = bose_hubbard_hamiltonian(basis, local);

    // V_i = (a1 + a1^dag, i(a1 - a1^dag), a2 + a2^dag, i(a2 - a2^dag)), written out directly.
    std::array<OperatorMatrix, 4> v;
    for (int well = 1; well <= 2; ++well) {
        OperatorMatrix a = OperatorMatrix::Zero(d, d);
        for (int n1 = 0; n1 <= basis.n_max(); ++n1) {
            for (int n2 = 0; n2 <= basis.n_max(); ++n2) {
                const int n = well == 1 ? n1 : n2;
                if (n == 0) continue;
                const int m1 = well == 1 ? n1 - 1 : n1;
                const int m2 = well == 1 ? n2 : n2 - 1;
                a(basis.index(m1, m2), basis.index(n1, n2)) = std::sqrt(static_cast<double>(n));
            }
        }
        const OperatorMatrix ad = a.adjoint();
        v[static_cast<std::size_t>(2 * (well - 1))] = a + ad;
        v[static_cast<std::size_t>(2 * (well - 1) + 1)] = Complex(0.0, 1.0) * (a - ad);
    }

    // Group matrix elements of each V_i by the energy drop E_in - E_out (h0 is diagonal).
    std::vector<double> freqs;
    auto key = [&](double w) {
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            if (std::abs(freqs[k] - w) < 1e-9) return k;
        }
        freqs.push_back(w);
        return freqs.size() - 1;
    };
    std::vector<std::array<OperatorMatrix, 4>> comps;
    for (int i = 0; i < 4; ++i) {
        const OperatorMatrix& vi = v[static_cast<std::size_t>(i)];
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) {
                if (vi(r, c) == Complex(0.0)) continue;
                const std::size_t k = key(h0(c, c).real() - h0(r, r).real());
                while (comps.size() <= k) {
                    std::array<OperatorMatrix, 4> z;
                    for (auto& m : z) m = OperatorMatrix::Zero(d, d);
                    comps.push_back(z);
                }
                comps[k][static_cast<std::size_t>(i)](r, c) = vi(r, c);
            }
        }
    }

    const Complex I(0.0, 1.0);
    Eigen::MatrixXcd L = -I * (Eigen::kroneckerProduct(id, h) - Eigen::kroneckerProduct(h.transpose(), id)).eval();
    const double l2 = p.lambda * p.lambda;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const Matrix4c c = fourier_c(model, freqs[k]);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const Complex cij = c(i, j);
                if (cij == Complex(0.0)) continue;
                const OperatorMatrix& ai = comps[k][static_cast<std::size_t>(i)];
                const OperatorMatrix& aj = comps[k][static_cast<std::size_t>(j)];
                const OperatorMatrix aiaj = ai.adjoint() * aj;
                L += l2 * cij *
                     (Eigen::kroneckerProduct(ai.conjugate(), aj) -
                      0.5 * Eigen::kroneckerProduct(id, aiaj) - 0.5 * Eigen::kroneckerProduct(aiaj.transpose(), id))
                         .eval();
            }
        }
    }
    return L;
}

inline Eigen::VectorXcd vec(const OperatorMatrix& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

// tr(J L[rho0]) from a dense superoperator.
inline double dense_slope(const Eigen::MatrixXcd& L, const FockBasis& basis, int N)
{
    const Eigen::VectorXcd out = L * vec(fock_state(basis, N, N).matrix());
    const OperatorMatrix drho = Eigen::Map<const OperatorMatrix>(out.data(), basis.dim(), basis.dim());
    return (current_operator(basis) * drho).trace().real();
}

} // namespace dwell::testing
