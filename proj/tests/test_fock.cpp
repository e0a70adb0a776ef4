#include "support.hpp"

#include <gtest/gtest.h>

using namespace dwell;
using dwell::testing::max_abs;

TEST(FockBasis, Dimension)
{
    EXPECT_EQ(FockBasis(1).dim(), 4);
    EXPECT_EQ(FockBasis(6).dim(), 49);
    EXPECT_THROW(FockBasis(0), std::invalid_argument);
    EXPECT_THROW(build_basis(-3), std::invalid_argument);
}

TEST(FockBasis, IndexRoundTrip)
{
    const FockBasis b(5);
    for (Eigen::Index k = 0; k < b.dim(); ++k) {
        const auto [n1, n2] = b.occupations(k);
        EXPECT_EQ(b.index(n1, n2), k);
    }
    EXPECT_EQ(b.index(1, 0), b.levels());  // well 1 is the slow index
}

TEST(Ladder, AnnihilatorAction)
{
    const FockBasis b(2);
    const StateVector out = annihilator(b, 1) * fock_vector(b, 2, 0);
    EXPECT_NEAR(max_abs(out - std::sqrt(2.0) * fock_vector(b, 1, 0)), 0.0, 1e-15);

    for (int k = 0; k <= 2; ++k) {
        EXPECT_EQ(max_abs(annihilator(b, 1) * fock_vector(b, 0, k)), 0.0);
    }
}

TEST(Ladder, DistinctModesCommute)
{
    const FockBasis b(4);
    const OperatorMatrix a1 = annihilator(b, 1);
    const OperatorMatrix a2d = creator(b, 2);
    EXPECT_EQ(max_abs(a1 * a2d - a2d * a1), 0.0);
    const OperatorMatrix a2 = annihilator(b, 2);
    EXPECT_EQ(max_abs(a1 * a2 - a2 * a1), 0.0);
}

TEST(Ladder, CanonicalCommutatorAwayFromEdge)
{
    const FockBasis b(5);
    const OperatorMatrix a = annihilator(b, 2);
    const OperatorMatrix comm = a * a.adjoint() - a.adjoint() * a;
    for (Eigen::Index k = 0; k < b.dim(); ++k) {
        const auto [n1, n2] = b.occupations(k);
        EXPECT_NEAR(comm(k, k).real(), n2 < b.n_max() ? 1.0 : -b.n_max(), 1e-14) << n1 << "," << n2;
    }
}

TEST(Ladder, NumberOperatorIsCreatorTimesAnnihilator)
{
    const FockBasis b(4);
    for (int well = 1; well <= 2; ++well) {
        EXPECT_NEAR(max_abs(number_operator(b, well) - creator(b, well) * annihilator(b, well)), 0.0, 1e-14);
    }
    EXPECT_THROW(annihilator(b, 3), std::invalid_argument);
}

TEST(Projector, Completeness)
{
    const FockBasis b(4);
    for (int well = 1; well <= 2; ++well) {
        OperatorMatrix sum = OperatorMatrix::Zero(b.dim(), b.dim());
        for (int n = 0; n <= b.n_max(); ++n) sum += number_projector(b, well, n);
        EXPECT_EQ(max_abs(sum - identity(b)), 0.0);
    }
}

TEST(Projector, Action)
{
    const FockBasis b(4);
    const OperatorMatrix p = number_projector(b, 1, 2);
    EXPECT_EQ(max_abs(p * fock_vector(b, 2, 1) - fock_vector(b, 2, 1)), 0.0);
    EXPECT_EQ(max_abs(p * fock_vector(b, 1, 1)), 0.0);
    EXPECT_NEAR(number_projector(b, 2, 3).trace().real(), b.n_max() + 1, 0.0);
}

TEST(DensityMatrix, FockState)
{
    const FockBasis b(4);
    const DensityMatrix rho = fock_state(b, 2, 2);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-15);
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> eig(rho.matrix());
    EXPECT_EQ((eig.eigenvalues().array() > 1e-12).count(), 1);

    const DensityMatrix r21 = fock_state(b, 2, 1);
    EXPECT_NEAR(expectation(r21, number_operator(b, 1)).real(), 2.0, 1e-15);
    EXPECT_NEAR(expectation(r21, number_operator(b, 2)).real(), 1.0, 1e-15);
    EXPECT_THROW(fock_state(b, 5, 0), std::invalid_argument);
}

TEST(DensityMatrix, Validation)
{
    const FockBasis b(2);
    OperatorMatrix m = fock_state(b, 1, 1).matrix();
    EXPECT_NO_THROW(DensityMatrix(b, m));

    OperatorMatrix bad_trace = 2.0 * m;
    EXPECT_THROW(DensityMatrix(b, bad_trace), std::invalid_argument);

    OperatorMatrix non_herm = m;
    non_herm(0, 1) = Complex(0.0, 0.1);
    EXPECT_THROW(DensityMatrix(b, non_herm), std::invalid_argument);

    OperatorMatrix negative = OperatorMatrix::Zero(b.dim(), b.dim());
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix(b, negative), std::invalid_argument);

    EXPECT_THROW(DensityMatrix(FockBasis(3), m), std::invalid_argument);
}

TEST(DensityMatrix, PureNormalizes)
{
    const FockBasis b(3);
    StateVector psi = fock_vector(b, 1, 0) + Complex(0.0, 1.0) * fock_vector(b, 0, 1);
    const DensityMatrix rho = DensityMatrix::pure(b, psi);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-14);
}

TEST(Diagnostics, EdgeLeakage)
{
    const FockBasis b(3);
    EXPECT_EQ(edge_leakage(b, fock_state(b, 1, 2).matrix()), 0.0);
    EXPECT_NEAR(edge_leakage(b, fock_state(b, 3, 0).matrix()), 1.0, 1e-15);
    EXPECT_NEAR(edge_leakage(b, fock_state(b, 0, 3).matrix()), 1.0, 1e-15);
}

TEST(Diagnostics, HermiticityAndMinEigenvalue)
{
    OperatorMatrix m(2, 2);
    m << 1.0, Complex(0.0, 0.5), Complex(0.0, 0.5), -2.0;
    EXPECT_NEAR(hermiticity_error(m), 1.0, 1e-15);
    EXPECT_NEAR(min_eigenvalue(OperatorMatrix(Eigen::Vector2cd(3.0, -1.0).asDiagonal())), -1.0, 1e-15);
}
