// generator.hpp: GKSL generators for the double well in the weak- and singular-coupling limits
//
// Every generator is stored in the same shape: a list of Kraus operators, a list of
// 4x4 Kossakowski blocks each referring to four of them, the system Hamiltonian, an
// optional Lamb-shift Hamiltonian and the coupling lambda. The action is
//
//   L[rho]  = -i[H, rho] + lambda^2 sum_b sum_ij h_ij (V_j^dag rho V_i - 1/2 {V_i V_j^dag, rho})
//   L*[X]   = +i[H, X]   + lambda^2 sum_b sum_ij h_ij (V_i X V_j^dag  - 1/2 {V_i V_j^dag, X})
//
// with H = H_S + H^(2).

#pragma once

#include "dwell/environment.hpp"
#include "dwell/fock.hpp"
#include "dwell/model.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dwell {

using SparseOperator = Eigen::SparseMatrix<Complex>;

struct KrausLabel {
    std::optional<int> n;          // ladder level (weak coupling only)
    std::optional<double> omega;   // Bohr frequency of the block (symmetric weak coupling only)
    int component;                 // 1..4

    std::string to_string() const;
};

struct KrausOperator {
    KrausLabel label;
    OperatorMatrix op;
};

using KrausSet = std::vector<KrausOperator>;

struct KossakowskiBlock {
    std::optional<int> n;
    std::optional<double> omega;
    std::array<std::size_t, 4> kraus;  // indices into the generator's KrausSet
    Matrix4c h;
};

// Raised when a Kossakowski block fails the Hermitian / PSD check.
class KossakowskiNotPositive : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class LambShift { Off, On };

// Singular coupling can be written with the Hermitian couplings V_i and c = G directly,
// or in the ladder basis (a1, a1^dag, a2, a2^dag) with h = M^T G conj(M). Both give the
// same superoperator.
enum class SingularForm { Ladder, Hermitian };

enum class Picture { Schrodinger, Heisenberg };

class LindbladGenerator {
public:
    static constexpr double kPsdTol = -1e-10;
    static constexpr double kHermiticityTol = 1e-12;

    LindbladGenerator(FockBasis basis, OperatorMatrix system_hamiltonian,
                      std::optional<OperatorMatrix> lamb_shift, double lambda, KrausSet kraus,
                      std::vector<KossakowskiBlock> blocks);

    const FockBasis& basis() const noexcept { return basis_; }
    const OperatorMatrix& system_hamiltonian() const noexcept { return system_hamiltonian_; }
    const std::optional<OperatorMatrix>& lamb_shift() const noexcept { return lamb_shift_; }
    double lambda() const noexcept { return lambda_; }
    const KrausSet& kraus() const noexcept { return kraus_; }
    const std::vector<KossakowskiBlock>& blocks() const noexcept { return blocks_; }

    OperatorMatrix apply_schrodinger(const OperatorMatrix& rho) const;
    OperatorMatrix apply_dual(const OperatorMatrix& x) const;

    // Column-stacking vectorization: vec(L[rho]) = S vec(rho).
    SparseOperator superoperator(Picture picture = Picture::Schrodinger) const;

private:
    struct Term {
        std::size_t i;
        std::size_t j;
        Complex coef;  // lambda^2 h_ij
    };

    void check_dim(const OperatorMatrix& m) const;

    FockBasis basis_;
    OperatorMatrix system_hamiltonian_;
    std::optional<OperatorMatrix> lamb_shift_;
    double lambda_;
    KrausSet kraus_;
    std::vector<KossakowskiBlock> blocks_;

    SparseOperator hamiltonian_;        // H_S + H^(2)
    SparseOperator anticommutator_;     // lambda^2 sum h_ij V_i V_j^dag
    std::vector<SparseOperator> ops_;
    std::vector<SparseOperator> adj_;
    std::vector<Term> terms_;
};

// h = M^T c conj(M) where V = M (a1, a1^dag, a2, a2^dag): h11 = c11 + c22 + i(c21 - c12), ...
Matrix4c ladder_kossakowski(const Matrix4c& c);

// Kraus quadruple (P_n a1, a1^dag P_n, P_n a2, a2^dag P_n).
std::array<OperatorMatrix, 4> ladder_kraus(const FockBasis& basis, int n);

// (a1 + a1^dag, i(a1 - a1^dag), a2 + a2^dag, i(a2 - a2^dag))
std::array<OperatorMatrix, 4> hermitian_couplings(const FockBasis& basis);

LindbladGenerator weak_coupling_generator(const FockBasis& basis, const ModelParams& p,
                                          const CorrelationModel& model,
                                          LambShift lamb = LambShift::Off);

LindbladGenerator asymmetric_weak_coupling_generator(const FockBasis& basis, const ModelParams& p,
                                                     const CorrelationModel& model,
                                                     LambShift lamb = LambShift::Off);

LindbladGenerator singular_coupling_generator(const FockBasis& basis, const ModelParams& p,
                                              const CorrelationModel& model,
                                              SingularForm form = SingularForm::Ladder);

OperatorMatrix apply_schrodinger(const LindbladGenerator& gen, const OperatorMatrix& rho);
OperatorMatrix apply_schrodinger(const LindbladGenerator& gen, const DensityMatrix& rho);
OperatorMatrix apply_dual(const LindbladGenerator& gen, const OperatorMatrix& x);

inline constexpr Eigen::Index kSuperoperatorDimGuard = 100;

// Dense dim^2 x dim^2 superoperator. Throws std::length_error above the guard unless allowed.
Eigen::MatrixXcd superoperator_matrix(const LindbladGenerator& gen, bool allow_large = false);

// Column-stacking helpers.
Eigen::VectorXcd vectorize(const OperatorMatrix& m);
OperatorMatrix unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim);

} // namespace dwell
