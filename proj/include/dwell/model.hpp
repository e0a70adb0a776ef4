// model.hpp: double-well Bose-Hubbard Hamiltonian, current and barycenter observables,
// and the single-well Bohr-frequency ladder.

#pragma once

#include "dwell/fock.hpp"

#include <stdexcept>
#include <vector>

namespace dwell {

// Energies in one unit, hbar = 1.
struct ModelParams {
    double T = 0.0;       // tunneling amplitude
    double U = 1.0;       // on-site repulsion
    double eps1 = 0.0;    // well depths
    double eps2 = 0.0;
    double lambda = 0.0;  // system-environment coupling

    void validate() const;
    bool symmetric_trap() const noexcept { return eps1 == eps2; }
};

struct BohrFrequency {
    int n;
    double omega;
};

// Raised when the symmetric-trap ladder is requested for eps1 != eps2.
class AsymmetricTrap : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// H = -T (a1^dag a2 + a2^dag a1) + U (n1^2 + n2^2) + eps1 n1 + eps2 n2
OperatorMatrix bose_hubbard_hamiltonian(const FockBasis& basis, const ModelParams& p);

// J = i (a1^dag a2 - a2^dag a1)
OperatorMatrix current_operator(const FockBasis& basis);

// Z = (n1 - n2) / (2N); N is a filling label only.
OperatorMatrix barycenter_operator(const FockBasis& basis, int N);

// omega_n = eps + U + 2 U n for n = 0 .. n_max - 1 (transition n -> n + 1 in one well).
std::vector<BohrFrequency> bohr_frequencies(const ModelParams& p, int n_max);

// Same ladder for one well of a possibly asymmetric trap: eps_well + U + 2 U n.
double well_bohr_frequency(const ModelParams& p, int well, int n);

// <N,N| i[H, J] |N,N>; requires N <= n_max - 1.
double closed_current_derivative(const FockBasis& basis, const ModelParams& p, int N);

} // namespace dwell
