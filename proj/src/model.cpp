// model.cpp: Bose-Hubbard double well

#include "dwell/model.hpp"

#include <cmath>
#include <string>

namespace dwell {

void ModelParams::validate() const
{
    if (!(U > 0.0)) throw std::invalid_argument("U must be > 0");
    if (!(T >= 0.0)) throw std::invalid_argument("T must be >= 0");
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    if (!std::isfinite(eps1) || !std::isfinite(eps2)) {
        throw std::invalid_argument("well depths must be finite");
    }
}

OperatorMatrix bose_hubbard_hamiltonian(const FockBasis& basis, const ModelParams& p)
{
    p.validate();
    const OperatorMatrix a1 = annihilator(basis, 1);
    const OperatorMatrix a2 = annihilator(basis, 2);
    const OperatorMatrix hop = a1.adjoint() * a2;

    OperatorMatrix h = -p.T * (hop + hop.adjoint());
    for (Eigen::Index k = 0; k < basis.dim(); ++k) {
        const auto [n1, n2] = basis.occupations(k);
        h(k, k) += p.U * (n1 * n1 + n2 * n2) + p.eps1 * n1 + p.eps2 * n2;
    }
    return h;
}

OperatorMatrix current_operator(const FockBasis& basis)
{
    const OperatorMatrix hop = creator(basis, 1) * annihilator(basis, 2);
    return Complex(0.0, 1.0) * (hop - hop.adjoint());
}

OperatorMatrix barycenter_operator(const FockBasis& basis, int N)
{
    if (N < 1) throw std::invalid_argument("barycenter filling N must be >= 1");
    return (number_operator(basis, 1) - number_operator(basis, 2)) / (2.0 * N);
}

std::vector<BohrFrequency> bohr_frequencies(const ModelParams& p, int n_max)
{
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (!p.symmetric_trap()) {
        throw AsymmetricTrap("Bohr ladder requires eps1 == eps2; use the diagonal Kossakowski path");
    }
    std::vector<BohrFrequency> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 0; n < n_max; ++n) {
        out.push_back({n, p.eps1 + p.U + 2.0 * p.U * n});
    }
    return out;
}

double well_bohr_frequency(const ModelParams& p, int well, int n)
{
    if (well != 1 && well != 2) throw std::invalid_argument("well must be 1 or 2");
    const double eps = well == 1 ? p.eps1 : p.eps2;
    return eps + p.U + 2.0 * p.U * n;
}

double closed_current_derivative(const FockBasis& basis, const ModelParams& p, int N)
{
    if (N < 0 || N > basis.n_max() - 1) {
        throw std::invalid_argument("N = " + std::to_string(N) +
                                    " touches the truncation edge (need N <= n_max - 1)");
    }
    const OperatorMatrix h = bose_hubbard_hamiltonian(basis, p);
    const OperatorMatrix j = current_operator(basis);
    const OperatorMatrix rate = Complex(0.0, 1.0) * (h * j - j * h);
    const Eigen::Index k = basis.index(N, N);
    return rate(k, k).real();
}

} // namespace dwell
