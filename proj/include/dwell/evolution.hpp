// evolution.hpp: time propagation of states and observables, trajectory diagnostics

#pragma once

#include "dwell/generator.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dwell {

// Base for failures of a numerical procedure (as opposed to invalid input).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationFailure : public NumericalError {
public:
    IntegrationFailure(const std::string& what, double time);
    double time() const noexcept { return time_; }

private:
    double time_;
};

enum class Method { ExpProp, RK };

inline constexpr double kTraceFlagTol = 1e-8;

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> observable_names;
    std::vector<std::vector<Complex>> values;  // values[observable][time]
    std::vector<double> trace_dev;
    std::vector<double> min_eig;
    std::vector<double> leakage;
    std::vector<double> hermiticity;
    std::vector<bool> flagged;                 // trace_dev >= kTraceFlagTol
    std::vector<OperatorMatrix> states;        // only when requested

    const std::vector<Complex>& observable(const std::string& name) const;
    std::vector<double> real_series(const std::string& name) const;
    std::size_t size() const noexcept { return times.size(); }
};

struct EvolveOptions {
    Method method = Method::ExpProp;
    // Recorded observables; empty means {"J": current_operator}.
    std::vector<std::pair<std::string, OperatorMatrix>> observables;
    bool keep_states = false;
    double rk_tolerance = 1e-10;
};

// 0 = t_0 < t_1 < ... ; throws std::invalid_argument otherwise.
void validate_time_grid(const std::vector<double>& grid);
std::vector<double> uniform_grid(double t_max, int points);

Trajectory evolve(const LindbladGenerator& gen, const DensityMatrix& rho0, const std::vector<double>& t_grid,
                  const EvolveOptions& options = {});

// tr(rho X)
Complex expectation(const OperatorMatrix& rho, const OperatorMatrix& x);
Complex expectation(const DensityMatrix& rho, const OperatorMatrix& x);

// tr(rho0 L*[J]) = d<J>/dt at t = 0.
double current_slope(const LindbladGenerator& gen, const DensityMatrix& rho0);

// exp(t A) applied to each column of v, by scaled Taylor series run to double precision.
Eigen::MatrixXcd expmv(const SparseOperator& a, double t, const Eigen::MatrixXcd& v);

// Evolved states rho(t_k) for a batch of initial states (exact exponential).
std::vector<std::vector<OperatorMatrix>> propagate_states(const LindbladGenerator& gen,
                                                          const std::vector<OperatorMatrix>& initial,
                                                          const std::vector<double>& t_grid);

// Heisenberg-picture X(t_k) = exp(t_k L*)[X].
std::vector<OperatorMatrix> evolve_observable(const LindbladGenerator& gen, const OperatorMatrix& x,
                                              const std::vector<double>& t_grid);

} // namespace dwell
