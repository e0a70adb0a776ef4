// fock.cpp: truncated two-mode bosonic Fock space

#include "dwell/fock.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace dwell {

namespace {

void check_well(int well)
{
    if (well != 1 && well != 2) {
        throw std::invalid_argument("well must be 1 or 2, got " + std::to_string(well));
    }
}

void check_occupation(const FockBasis& basis, int n, const char* what)
{
    if (n < 0 || n > basis.n_max()) {
        throw std::invalid_argument(std::string(what) + " = " + std::to_string(n) +
                                    " outside [0, " + std::to_string(basis.n_max()) + "]");
    }
}

} // namespace

FockBasis::FockBasis(int n_max) : n_max_(n_max)
{
    if (n_max < 1) {
        throw std::invalid_argument("n_max must be >= 1, got " + std::to_string(n_max));
    }
}

Eigen::Index FockBasis::index(int n1, int n2) const
{
    check_occupation(*this, n1, "n1");
    check_occupation(*this, n2, "n2");
    return static_cast<Eigen::Index>(n1) * levels() + n2;
}

std::pair<int, int> FockBasis::occupations(Eigen::Index flat) const
{
    if (flat < 0 || flat >= dim()) {
        throw std::out_of_range("flat index outside basis");
    }
    const auto l = static_cast<Eigen::Index>(levels());
    return {static_cast<int>(flat / l), static_cast<int>(flat % l)};
}

FockBasis build_basis(int n_max) { return FockBasis(n_max); }

OperatorMatrix mode_annihilator(int n_max)
{
    OperatorMatrix a = OperatorMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

OperatorMatrix mode_projector(int n_max, int n)
{
    OperatorMatrix p = OperatorMatrix::Zero(n_max + 1, n_max + 1);
    p(n, n) = 1.0;
    return p;
}

OperatorMatrix embed(const FockBasis& basis, const OperatorMatrix& single_mode, int well)
{
    check_well(well);
    const Eigen::Index l = basis.levels();
    if (single_mode.rows() != l || single_mode.cols() != l) {
        throw std::invalid_argument("single-mode operator does not match basis levels");
    }
    OperatorMatrix out = OperatorMatrix::Zero(basis.dim(), basis.dim());
    for (Eigen::Index i = 0; i < l; ++i) {
        for (Eigen::Index j = 0; j < l; ++j) {
            const Complex v = single_mode(i, j);
            if (v == Complex(0.0)) continue;
            for (Eigen::Index k = 0; k < l; ++k) {
                if (well == 1) {
                    out(i * l + k, j * l + k) = v;
                } else {
                    out(k * l + i, k * l + j) = v;
                }
            }
        }
    }
    return out;
}

OperatorMatrix identity(const FockBasis& basis)
{
    return OperatorMatrix::Identity(basis.dim(), basis.dim());
}

OperatorMatrix annihilator(const FockBasis& basis, int well)
{
    return embed(basis, mode_annihilator(basis.n_max()), well);
}

OperatorMatrix creator(const FockBasis& basis, int well)
{
    return annihilator(basis, well).adjoint();
}

OperatorMatrix number_operator(const FockBasis& basis, int well)
{
    check_well(well);
    OperatorMatrix n = OperatorMatrix::Zero(basis.dim(), basis.dim());
    for (Eigen::Index k = 0; k < basis.dim(); ++k) {
        const auto [n1, n2] = basis.occupations(k);
        n(k, k) = static_cast<double>(well == 1 ? n1 : n2);
    }
    return n;
}

OperatorMatrix number_projector(const FockBasis& basis, int well, int n)
{
    check_well(well);
    check_occupation(basis, n, "projector level");
    return embed(basis, mode_projector(basis.n_max(), n), well);
}

StateVector fock_vector(const FockBasis& basis, int n1, int n2)
{
    StateVector psi = StateVector::Zero(basis.dim());
    psi(basis.index(n1, n2)) = 1.0;
    return psi;
}

DensityMatrix::DensityMatrix(const FockBasis& basis, OperatorMatrix rho)
    : basis_(basis), rho_(std::move(rho))
{
    if (rho_.rows() != basis_.dim() || rho_.cols() != basis_.dim()) {
        throw std::invalid_argument("density matrix dimension does not match basis");
    }
    if (hermiticity_error(rho_) > kHermiticityTol) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - Complex(1.0)) > kTraceTol) {
        throw std::invalid_argument("density matrix trace differs from 1");
    }
    if (min_eigenvalue(rho_) < kMinEigenvalue) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(const FockBasis& basis, const StateVector& psi)
{
    const double norm = psi.norm();
    if (norm == 0.0) {
        throw std::invalid_argument("zero state vector");
    }
    const StateVector v = psi / norm;
    return DensityMatrix(basis, v * v.adjoint());
}

double DensityMatrix::purity() const
{
    return (rho_ * rho_).trace().real();
}

DensityMatrix fock_state(const FockBasis& basis, int n1, int n2)
{
    return DensityMatrix::pure(basis, fock_vector(basis, n1, n2));
}

double hermiticity_error(const OperatorMatrix& a)
{
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const OperatorMatrix& a)
{
    const OperatorMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalue solver failed");
    }
    return solver.eigenvalues().minCoeff();
}

double edge_leakage(const FockBasis& basis, const OperatorMatrix& rho)
{
    double leak = 0.0;
    for (Eigen::Index k = 0; k < basis.dim(); ++k) {
        const auto [n1, n2] = basis.occupations(k);
        if (n1 == basis.n_max() || n2 == basis.n_max()) {
            leak += rho(k, k).real();
        }
    }
    return leak;
}

} // namespace dwell
