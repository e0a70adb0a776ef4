// generator.cpp: GKSL generator assembly and action

#include "dwell/generator.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <sstream>
#include <stdexcept>

namespace dwell {

namespace {

constexpr Complex kI{0.0, 1.0};

// Rows: V_i of the Hermitian couplings; columns: (a1, a1^dag, a2, a2^dag).
Matrix4c coupling_to_ladder()
{
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = 1.0;
    m(0, 1) = 1.0;
    m(1, 0) = kI;
    m(1, 1) = -kI;
    m(2, 2) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = kI;
    m(3, 3) = -kI;
    return m;
}

void check_block(const KossakowskiBlock& block, std::size_t kraus_count)
{
    for (auto idx : block.kraus) {
        if (idx >= kraus_count) throw std::invalid_argument("Kossakowski block refers to missing Kraus operator");
    }
    if ((block.h - block.h.adjoint()).cwiseAbs().maxCoeff() > LindbladGenerator::kHermiticityTol) {
        throw KossakowskiNotPositive("Kossakowski block is not Hermitian");
    }
    const double lo = min_eigenvalue4(block.h);
    if (lo < LindbladGenerator::kPsdTol) {
        std::ostringstream os;
        os << "Kossakowski block";
        if (block.n) os << " n=" << *block.n;
        os << " has eigenvalue " << lo;
        throw KossakowskiNotPositive(os.str());
    }
}

// Keep the (1,3) sub-block of `plus` and the (2,4) sub-block of `minus`.
Matrix4c weak_pattern(const Matrix4c& plus, const Matrix4c& minus)
{
    Matrix4c h = Matrix4c::Zero();
    for (int r : {0, 2}) {
        for (int c : {0, 2}) h(r, c) = plus(r, c);
    }
    for (int r : {1, 3}) {
        for (int c : {1, 3}) h(r, c) = minus(r, c);
    }
    return h;
}

OperatorMatrix lamb_from_blocks(const KrausSet& kraus, const std::vector<KossakowskiBlock>& k_blocks,
                                double lambda, Eigen::Index dim)
{
    OperatorMatrix h2 = OperatorMatrix::Zero(dim, dim);
    for (const auto& b : k_blocks) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (b.h(i, j) == Complex(0.0)) continue;
                h2 += b.h(i, j) * kraus[b.kraus[i]].op * kraus[b.kraus[j]].op.adjoint();
            }
        }
    }
    h2 *= lambda * lambda;
    // Remove round-off anti-Hermitian part.
    return 0.5 * (h2 + h2.adjoint());
}

SparseOperator sparse(const OperatorMatrix& m)
{
    SparseOperator s = m.sparseView();
    s.makeCompressed();
    return s;
}

} // namespace

std::string KrausLabel::to_string() const
{
    std::ostringstream os;
    if (n) os << "n=" << *n << ",";
    if (omega) os << "omega=" << *omega << ",";
    os << "component=" << component;
    return os.str();
}

LindbladGenerator::LindbladGenerator(FockBasis basis, OperatorMatrix system_hamiltonian,
                                     std::optional<OperatorMatrix> lamb_shift, double lambda,
                                     KrausSet kraus, std::vector<KossakowskiBlock> blocks)
    : basis_(basis),
      system_hamiltonian_(std::move(system_hamiltonian)),
      lamb_shift_(std::move(lamb_shift)),
      lambda_(lambda),
      kraus_(std::move(kraus)),
      blocks_(std::move(blocks))
{
    const Eigen::Index dim = basis_.dim();
    check_dim(system_hamiltonian_);
    if (hermiticity_error(system_hamiltonian_) > kHermiticityTol) {
        throw std::invalid_argument("system Hamiltonian is not Hermitian");
    }
    if (lamb_shift_) {
        check_dim(*lamb_shift_);
        if (hermiticity_error(*lamb_shift_) > kHermiticityTol) {
            throw std::invalid_argument("Lamb shift is not Hermitian");
        }
    }
    if (!(lambda_ >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    for (const auto& k : kraus_) check_dim(k.op);
    for (const auto& b : blocks_) check_block(b, kraus_.size());

    OperatorMatrix h = system_hamiltonian_;
    if (lamb_shift_) h += *lamb_shift_;
    hamiltonian_ = sparse(h);

    ops_.reserve(kraus_.size());
    adj_.reserve(kraus_.size());
    for (const auto& k : kraus_) {
        ops_.push_back(sparse(k.op));
        adj_.push_back(sparse(k.op.adjoint()));
    }

    const double l2 = lambda_ * lambda_;
    SparseOperator anti(dim, dim);
    for (const auto& b : blocks_) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const Complex hij = b.h(i, j);
                if (hij == Complex(0.0) || l2 == 0.0) continue;
                const std::size_t ki = b.kraus[i];
                const std::size_t kj = b.kraus[j];
                terms_.push_back({ki, kj, l2 * hij});
                SparseOperator prod = ops_[ki] * adj_[kj];
                anti += (l2 * hij) * prod;
            }
        }
    }
    anticommutator_ = anti;
    anticommutator_.makeCompressed();
}

void LindbladGenerator::check_dim(const OperatorMatrix& m) const
{
    if (m.rows() != basis_.dim() || m.cols() != basis_.dim()) {
        throw std::invalid_argument("operator dimension " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + " does not match basis dimension " +
                                    std::to_string(basis_.dim()));
    }
}

OperatorMatrix LindbladGenerator::apply_schrodinger(const OperatorMatrix& rho) const
{
    check_dim(rho);
    const OperatorMatrix h_rho = hamiltonian_ * rho;
    const OperatorMatrix rho_h = rho * hamiltonian_;
    const OperatorMatrix k_rho = anticommutator_ * rho;
    const OperatorMatrix rho_k = rho * anticommutator_;
    OperatorMatrix out = -kI * (h_rho - rho_h) - 0.5 * (k_rho + rho_k);
    for (const auto& t : terms_) {
        const OperatorMatrix left = adj_[t.j] * rho;
        out.noalias() += t.coef * (left * ops_[t.i]);
    }
    return out;
}

OperatorMatrix LindbladGenerator::apply_dual(const OperatorMatrix& x) const
{
    check_dim(x);
    const OperatorMatrix h_x = hamiltonian_ * x;
    const OperatorMatrix x_h = x * hamiltonian_;
    const OperatorMatrix k_x = anticommutator_ * x;
    const OperatorMatrix x_k = x * anticommutator_;
    OperatorMatrix out = kI * (h_x - x_h) - 0.5 * (k_x + x_k);
    for (const auto& t : terms_) {
        const OperatorMatrix left = ops_[t.i] * x;
        out.noalias() += t.coef * (left * adj_[t.j]);
    }
    return out;
}

// vec(A X B) = (B^T (x) A) vec(X)
SparseOperator LindbladGenerator::superoperator(Picture picture) const
{
    const Eigen::Index dim = basis_.dim();
    SparseOperator id(dim, dim);
    id.setIdentity();

    const SparseOperator h_t = hamiltonian_.transpose();
    const SparseOperator k_t = anticommutator_.transpose();
    const Complex sign = picture == Picture::Schrodinger ? -kI : kI;

    SparseOperator s = sign * (SparseOperator(Eigen::kroneckerProduct(id, hamiltonian_)) -
                               SparseOperator(Eigen::kroneckerProduct(h_t, id)));
    s -= 0.5 * (SparseOperator(Eigen::kroneckerProduct(id, anticommutator_)) +
                SparseOperator(Eigen::kroneckerProduct(k_t, id)));
    for (const auto& t : terms_) {
        if (picture == Picture::Schrodinger) {
            const SparseOperator vi_t = ops_[t.i].transpose();
            s += t.coef * SparseOperator(Eigen::kroneckerProduct(vi_t, adj_[t.j]));
        } else {
            const SparseOperator vj_conj = ops_[t.j].conjugate();
            s += t.coef * SparseOperator(Eigen::kroneckerProduct(vj_conj, ops_[t.i]));
        }
    }
    s.prune(Complex(0.0));
    s.makeCompressed();
    return s;
}

Matrix4c ladder_kossakowski(const Matrix4c& c)
{
    const Matrix4c m = coupling_to_ladder();
    return m.transpose() * c * m.conjugate();
}

std::array<OperatorMatrix, 4> ladder_kraus(const FockBasis& basis, int n)
{
    if (n < 0 || n >= basis.n_max()) {
        throw std::invalid_argument("ladder level outside 0 .. n_max - 1");
    }
    const OperatorMatrix a = mode_annihilator(basis.n_max());
    const OperatorMatrix p = mode_projector(basis.n_max(), n);
    const OperatorMatrix lower = p * a;
    const OperatorMatrix raise = a.adjoint() * p;
    return {embed(basis, lower, 1), embed(basis, raise, 1), embed(basis, lower, 2), embed(basis, raise, 2)};
}

std::array<OperatorMatrix, 4> hermitian_couplings(const FockBasis& basis)
{
    const OperatorMatrix a1 = annihilator(basis, 1);
    const OperatorMatrix a2 = annihilator(basis, 2);
    return {a1 + a1.adjoint(), kI * (a1 - a1.adjoint()), a2 + a2.adjoint(), kI * (a2 - a2.adjoint())};
}

namespace {

// Shared by the symmetric and asymmetric weak-coupling builders: for each ladder
// level n, `pattern(n)` returns the (h, k) pair for that block.
template <typename Pattern>
LindbladGenerator build_weak(const FockBasis& basis, const ModelParams& p, LambShift lamb,
                             bool with_omega, Pattern pattern)
{
    KrausSet kraus;
    std::vector<KossakowskiBlock> blocks;
    std::vector<KossakowskiBlock> k_blocks;
    for (int n = 0; n < basis.n_max(); ++n) {
        const auto quad = ladder_kraus(basis, n);
        const auto [h, k, omega] = pattern(n);
        const std::optional<double> label_omega = with_omega ? std::optional<double>(omega) : std::nullopt;
        std::array<std::size_t, 4> idx{};
        for (int c = 0; c < 4; ++c) {
            idx[c] = kraus.size();
            kraus.push_back({{n, label_omega, c + 1}, quad[c]});
        }
        blocks.push_back({n, label_omega, idx, h});
        k_blocks.push_back({n, label_omega, idx, k});
    }
    std::optional<OperatorMatrix> h2;
    if (lamb == LambShift::On) h2 = lamb_from_blocks(kraus, k_blocks, p.lambda, basis.dim());
    return LindbladGenerator(basis, bose_hubbard_hamiltonian(basis, p), std::move(h2), p.lambda,
                             std::move(kraus), std::move(blocks));
}

struct BlockData {
    Matrix4c h;
    Matrix4c k;
    double omega;
};

} // namespace

LindbladGenerator weak_coupling_generator(const FockBasis& basis, const ModelParams& p,
                                          const CorrelationModel& model, LambShift lamb)
{
    p.validate();
    const auto ladder = bohr_frequencies(p, basis.n_max());
    return build_weak(basis, p, lamb, true, [&](int n) {
        const double w = ladder[static_cast<std::size_t>(n)].omega;
        const Matrix4c h = weak_pattern(ladder_kossakowski(fourier_c(model, w)),
                                        ladder_kossakowski(fourier_c(model, -w)));
        const Matrix4c k = weak_pattern(ladder_kossakowski(hilbert_s(model, w)),
                                        ladder_kossakowski(hilbert_s(model, -w)));
        return BlockData{h, k, w};
    });
}

LindbladGenerator asymmetric_weak_coupling_generator(const FockBasis& basis, const ModelParams& p,
                                                     const CorrelationModel& model, LambShift lamb)
{
    p.validate();
    if (p.symmetric_trap()) {
        throw std::invalid_argument("asymmetric generator requested for a symmetric trap (eps1 == eps2)");
    }
    return build_weak(basis, p, lamb, false, [&](int n) {
        const double w1 = well_bohr_frequency(p, 1, n);
        const double w2 = well_bohr_frequency(p, 2, n);
        Matrix4c h = Matrix4c::Zero();
        Matrix4c k = Matrix4c::Zero();
        h(0, 0) = ladder_kossakowski(fourier_c(model, w1))(0, 0);
        h(1, 1) = ladder_kossakowski(fourier_c(model, -w1))(1, 1);
        h(2, 2) = ladder_kossakowski(fourier_c(model, w2))(2, 2);
        h(3, 3) = ladder_kossakowski(fourier_c(model, -w2))(3, 3);
        k(0, 0) = ladder_kossakowski(hilbert_s(model, w1))(0, 0);
        k(1, 1) = ladder_kossakowski(hilbert_s(model, -w1))(1, 1);
        k(2, 2) = ladder_kossakowski(hilbert_s(model, w2))(2, 2);
        k(3, 3) = ladder_kossakowski(hilbert_s(model, -w2))(3, 3);
        return BlockData{h, k, 0.0};
    });
}

LindbladGenerator singular_coupling_generator(const FockBasis& basis, const ModelParams& p,
                                              const CorrelationModel& model, SingularForm form)
{
    p.validate();
    if (model.kind() != CorrelationKind::Delta) {
        throw std::invalid_argument("singular coupling requires a delta-correlated model");
    }
    KrausSet kraus;
    Matrix4c h;
    if (form == SingularForm::Ladder) {
        const OperatorMatrix a1 = annihilator(basis, 1);
        const OperatorMatrix a2 = annihilator(basis, 2);
        const std::array<OperatorMatrix, 4> ops{a1, a1.adjoint(), a2, a2.adjoint()};
        for (int c = 0; c < 4; ++c) kraus.push_back({{std::nullopt, std::nullopt, c + 1}, ops[c]});
        h = ladder_kossakowski(model.G());
    } else {
        const auto ops = hermitian_couplings(basis);
        for (int c = 0; c < 4; ++c) kraus.push_back({{std::nullopt, std::nullopt, c + 1}, ops[c]});
        h = model.G();
    }
    std::vector<KossakowskiBlock> blocks{{std::nullopt, std::nullopt, {0, 1, 2, 3}, h}};
    return LindbladGenerator(basis, bose_hubbard_hamiltonian(basis, p), std::nullopt, p.lambda,
                             std::move(kraus), std::move(blocks));
}

OperatorMatrix apply_schrodinger(const LindbladGenerator& gen, const OperatorMatrix& rho)
{
    return gen.apply_schrodinger(rho);
}

OperatorMatrix apply_schrodinger(const LindbladGenerator& gen, const DensityMatrix& rho)
{
    return gen.apply_schrodinger(rho.matrix());
}

OperatorMatrix apply_dual(const LindbladGenerator& gen, const OperatorMatrix& x)
{
    return gen.apply_dual(x);
}

Eigen::MatrixXcd superoperator_matrix(const LindbladGenerator& gen, bool allow_large)
{
    if (gen.basis().dim() > kSuperoperatorDimGuard && !allow_large) {
        throw std::length_error("superoperator for dim " + std::to_string(gen.basis().dim()) +
                                " exceeds guard " + std::to_string(kSuperoperatorDimGuard) +
                                "; pass allow_large to override");
    }
    return Eigen::MatrixXcd(gen.superoperator(Picture::Schrodinger));
}

Eigen::VectorXcd vectorize(const OperatorMatrix& m)
{
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

OperatorMatrix unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim)
{
    if (v.size() != dim * dim) throw std::invalid_argument("vector length is not dim^2");
    return Eigen::Map<const OperatorMatrix>(v.data(), dim, dim);
}

} // namespace dwell
