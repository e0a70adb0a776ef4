// fock.hpp: truncated two-mode bosonic Fock space and its operator algebra

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <utility>

namespace dwell {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

// Per-well occupation cutoff n_max, flat index (n1, n2) -> n1 * (n_max + 1) + n2.
// Well 1 is the slow index, so a well-1 operator embeds as A (x) 1.
class FockBasis {
public:
    explicit FockBasis(int n_max);

    int n_max() const noexcept { return n_max_; }
    int levels() const noexcept { return n_max_ + 1; }
    Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(levels()) * levels(); }

    Eigen::Index index(int n1, int n2) const;
    std::pair<int, int> occupations(Eigen::Index flat) const;

    bool operator==(const FockBasis& other) const noexcept { return n_max_ == other.n_max_; }

private:
    int n_max_;
};

FockBasis build_basis(int n_max);

// Single-mode matrices on {0..n_max}.
OperatorMatrix mode_annihilator(int n_max);
OperatorMatrix mode_projector(int n_max, int n);

// A (x) 1 for well 1, 1 (x) A for well 2.
OperatorMatrix embed(const FockBasis& basis, const OperatorMatrix& single_mode, int well);

OperatorMatrix identity(const FockBasis& basis);
OperatorMatrix annihilator(const FockBasis& basis, int well);
OperatorMatrix creator(const FockBasis& basis, int well);
OperatorMatrix number_operator(const FockBasis& basis, int well);
OperatorMatrix number_projector(const FockBasis& basis, int well, int n);

StateVector fock_vector(const FockBasis& basis, int n1, int n2);

/// Hermitian, unit-trace, positive-semidefinite matrix. Construction validates all three.
class DensityMatrix {
public:
    static constexpr double kHermiticityTol = 1e-12;
    static constexpr double kTraceTol = 1e-12;
    static constexpr double kMinEigenvalue = -1e-10;

    DensityMatrix(const FockBasis& basis, OperatorMatrix rho);

    static DensityMatrix pure(const FockBasis& basis, const StateVector& psi);

    const FockBasis& basis() const noexcept { return basis_; }
    const OperatorMatrix& matrix() const noexcept { return rho_; }
    double purity() const;

private:
    FockBasis basis_;
    OperatorMatrix rho_;
};

DensityMatrix fock_state(const FockBasis& basis, int n1, int n2);

// Max |A - A^dagger|.
double hermiticity_error(const OperatorMatrix& a);
// Smallest eigenvalue of (A + A^dagger) / 2.
double min_eigenvalue(const OperatorMatrix& a);

// Population sitting on the cutoff level of either well.
double edge_leakage(const FockBasis& basis, const OperatorMatrix& rho);

} // namespace dwell
