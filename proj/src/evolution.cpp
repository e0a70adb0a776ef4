// evolution.cpp: exact-exponential and Dormand-Prince propagation

#include "dwell/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace dwell {

IntegrationFailure::IntegrationFailure(const std::string& what, double time)
    : NumericalError(what), time_(time)
{
}

const std::vector<Complex>& Trajectory::observable(const std::string& name) const
{
    for (std::size_t k = 0; k < observable_names.size(); ++k) {
        if (observable_names[k] == name) return values[k];
    }
    throw std::out_of_range("trajectory has no observable '" + name + "'");
}

std::vector<double> Trajectory::real_series(const std::string& name) const
{
    const auto& v = observable(name);
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](Complex z) { return z.real(); });
    return out;
}

void validate_time_grid(const std::vector<double>& grid)
{
    if (grid.empty()) throw std::invalid_argument("time grid is empty");
    if (grid.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1]) || !std::isfinite(grid[k])) {
            throw std::invalid_argument("time grid must be strictly increasing");
        }
    }
}

std::vector<double> uniform_grid(double t_max, int points)
{
    if (points < 2) throw std::invalid_argument("time grid needs at least 2 points");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = t_max * k / (points - 1);
    grid.back() = t_max;
    return grid;
}

Complex expectation(const OperatorMatrix& rho, const OperatorMatrix& x)
{
    if (rho.rows() != x.rows() || rho.cols() != x.cols() || rho.rows() != rho.cols()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    // tr(rho X) = sum_ij rho_ij X_ji
    return rho.cwiseProduct(x.transpose()).sum();
}

Complex expectation(const DensityMatrix& rho, const OperatorMatrix& x)
{
    return expectation(rho.matrix(), x);
}

double current_slope(const LindbladGenerator& gen, const DensityMatrix& rho0)
{
    if (!(rho0.basis() == gen.basis())) throw std::invalid_argument("current_slope: basis mismatch");
    const OperatorMatrix dj = gen.apply_dual(current_operator(gen.basis()));
    return expectation(rho0, dj).real();
}

namespace {

double sparse_norm1(const SparseOperator& a)
{
    double best = 0.0;
    for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
        double col = 0.0;
        for (SparseOperator::InnerIterator it(a, c); it; ++it) col += std::abs(it.value());
        best = std::max(best, col);
    }
    return best;
}

double inf_norm(const Eigen::MatrixXcd& m)
{
    return m.size() == 0 ? 0.0 : std::sqrt(m.cwiseAbs2().maxCoeff());
}

struct Diagnostics {
    double trace_dev;
    double min_eig;
    double leakage;
    double hermiticity;
};

Diagnostics diagnose(const FockBasis& basis, const OperatorMatrix& rho)
{
    return {std::abs(rho.trace() - Complex(1.0)), min_eigenvalue(rho), edge_leakage(basis, rho),
            hermiticity_error(rho)};
}

class Recorder {
public:
    Recorder(const FockBasis& basis, const EvolveOptions& options, std::size_t points) : basis_(basis), keep_(options.keep_states)
    {
        if (options.observables.empty()) {
            observables_.emplace_back("J", current_operator(basis));
        } else {
            observables_ = options.observables;
        }
        for (const auto& [name, op] : observables_) {
            if (op.rows() != basis.dim() || op.cols() != basis.dim()) {
                throw std::invalid_argument("observable '" + name + "' has wrong dimension");
            }
            traj_.observable_names.push_back(name);
        }
        traj_.values.assign(observables_.size(), {});
        traj_.times.reserve(points);
    }

    void record(double t, const OperatorMatrix& rho)
    {
        traj_.times.push_back(t);
        for (std::size_t k = 0; k < observables_.size(); ++k) {
            traj_.values[k].push_back(expectation(rho, observables_[k].second));
        }
        const Diagnostics d = diagnose(basis_, rho);
        traj_.trace_dev.push_back(d.trace_dev);
        traj_.min_eig.push_back(d.min_eig);
        traj_.leakage.push_back(d.leakage);
        traj_.hermiticity.push_back(d.hermiticity);
        traj_.flagged.push_back(!(d.trace_dev < kTraceFlagTol));
        if (keep_) traj_.states.push_back(rho);
    }

    Trajectory take() { return std::move(traj_); }

private:
    const FockBasis& basis_;
    bool keep_;
    std::vector<std::pair<std::string, OperatorMatrix>> observables_;
    Trajectory traj_;
};

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kB5{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr std::array<double, 7> kB4{5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640, -92097.0 / 339200,
                                    187.0 / 2100, 1.0 / 40};

// Integrates rho from t0 to t1 in place; `h` carries the step size between calls.
void dormand_prince(const LindbladGenerator& gen, OperatorMatrix& rho, double t0, double t1, double& h,
                    double tol)
{
    constexpr int kMaxSteps = 10'000'000;
    std::array<OperatorMatrix, 7> k;
    double t = t0;
    k[0] = gen.apply_schrodinger(rho);
    for (int step = 0; step < kMaxSteps; ++step) {
        if (t >= t1) return;
        const bool last = t + h >= t1;
        const double dt = last ? t1 - t : h;
        for (int s = 1; s < 7; ++s) {
            OperatorMatrix y = rho;
            for (int r = 0; r < s; ++r) {
                if (kA[s][r] != 0.0) y.noalias() += (dt * kA[s][r]) * k[static_cast<std::size_t>(r)];
            }
            k[static_cast<std::size_t>(s)] = gen.apply_schrodinger(y);
        }
        OperatorMatrix err = OperatorMatrix::Zero(rho.rows(), rho.cols());
        OperatorMatrix next = rho;
        for (int s = 0; s < 7; ++s) {
            const auto us = static_cast<std::size_t>(s);
            if (kB5[us] != 0.0) next.noalias() += (dt * kB5[us]) * k[us];
            err.noalias() += (dt * (kB5[us] - kB4[us])) * k[us];
        }
        const double e = inf_norm(err);
        if (!std::isfinite(e)) throw IntegrationFailure("non-finite state in RK integration", t);
        if (e <= tol) {
            t = last ? t1 : t + dt;
            rho = std::move(next);
            k[0] = k[6];  // first-same-as-last
        }
        const double factor = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(tol / e, 0.2), 0.2, 5.0);
        const double proposal = dt * factor;
        if (!last || e > tol) h = proposal;
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            std::ostringstream os;
            os << "RK step size underflow at t = " << t;
            throw IntegrationFailure(os.str(), t);
        }
    }
    throw IntegrationFailure("RK step budget exhausted", t);
}

} // namespace

Eigen::MatrixXcd expmv(const SparseOperator& a, double t, const Eigen::MatrixXcd& v)
{
    if (a.rows() != a.cols() || a.cols() != v.rows()) throw std::invalid_argument("expmv: dimension mismatch");
    if (t == 0.0 || v.size() == 0) return v;
    constexpr int kMaxTerms = 80;
    constexpr double kTheta = 4.0;
    const double scaled = sparse_norm1(a) * std::abs(t);
    const int substeps = std::max(1, static_cast<int>(std::ceil(scaled / kTheta)));
    const double h = t / substeps;
    const double eps = std::numeric_limits<double>::epsilon();
    const Eigen::SparseMatrix<Complex, Eigen::RowMajor> rows = a;

    Eigen::MatrixXcd out = v;
    Eigen::MatrixXcd term(v.rows(), v.cols());
    Eigen::MatrixXcd next(v.rows(), v.cols());
    for (int s = 0; s < substeps; ++s) {
        term = out;
        const double start = inf_norm(out);
        double prev = start;
        bool converged = false;
        for (int k = 1; k <= kMaxTerms; ++k) {
            next.noalias() = rows * term;
            next *= h / k;
            term.swap(next);
            out += term;
            const double now = inf_norm(term);
            if (prev + now <= eps * 1e-2 * start && prev + now <= eps * 1e-2 * inf_norm(out)) {
                converged = true;
                break;
            }
            prev = now;
        }
        if (!converged || !out.allFinite()) throw NumericalError("expmv: Taylor series did not converge");
    }
    return out;
}

std::vector<std::vector<OperatorMatrix>> propagate_states(const LindbladGenerator& gen,
                                                          const std::vector<OperatorMatrix>& initial,
                                                          const std::vector<double>& t_grid)
{
    validate_time_grid(t_grid);
    const Eigen::Index dim = gen.basis().dim();
    const SparseOperator s = gen.superoperator(Picture::Schrodinger);
    Eigen::MatrixXcd block(dim * dim, static_cast<Eigen::Index>(initial.size()));
    for (std::size_t c = 0; c < initial.size(); ++c) {
        if (initial[c].rows() != dim || initial[c].cols() != dim) {
            throw std::invalid_argument("propagate_states: dimension mismatch");
        }
        block.col(static_cast<Eigen::Index>(c)) = vectorize(initial[c]);
    }
    std::vector<std::vector<OperatorMatrix>> out(initial.size());
    double t_prev = 0.0;
    for (double t : t_grid) {
        block = expmv(s, t - t_prev, block);
        t_prev = t;
        for (std::size_t c = 0; c < initial.size(); ++c) {
            out[c].push_back(unvectorize(block.col(static_cast<Eigen::Index>(c)), dim));
        }
    }
    return out;
}

std::vector<OperatorMatrix> evolve_observable(const LindbladGenerator& gen, const OperatorMatrix& x,
                                              const std::vector<double>& t_grid)
{
    validate_time_grid(t_grid);
    const Eigen::Index dim = gen.basis().dim();
    if (x.rows() != dim || x.cols() != dim) throw std::invalid_argument("evolve_observable: dimension mismatch");
    const SparseOperator s = gen.superoperator(Picture::Heisenberg);
    Eigen::MatrixXcd v = vectorize(x);
    std::vector<OperatorMatrix> out;
    double t_prev = 0.0;
    for (double t : t_grid) {
        v = expmv(s, t - t_prev, v);
        t_prev = t;
        out.push_back(unvectorize(v.col(0), dim));
    }
    return out;
}

Trajectory evolve(const LindbladGenerator& gen, const DensityMatrix& rho0, const std::vector<double>& t_grid,
                  const EvolveOptions& options)
{
    validate_time_grid(t_grid);
    if (!(rho0.basis() == gen.basis())) throw std::invalid_argument("evolve: basis mismatch");
    const FockBasis& basis = gen.basis();
    Recorder rec(basis, options, t_grid.size());

    if (options.method == Method::ExpProp) {
        const SparseOperator s = gen.superoperator(Picture::Schrodinger);
        Eigen::MatrixXcd v = vectorize(rho0.matrix());
        double t_prev = 0.0;
        for (double t : t_grid) {
            v = expmv(s, t - t_prev, v);
            t_prev = t;
            rec.record(t, unvectorize(v.col(0), basis.dim()));
        }
    } else {
        if (!(options.rk_tolerance > 0.0)) throw std::invalid_argument("RK tolerance must be > 0");
        OperatorMatrix rho = rho0.matrix();
        double h = std::min(1e-2, t_grid.size() > 1 ? t_grid[1] : 1e-2);
        double t_prev = 0.0;
        for (double t : t_grid) {
            if (t > t_prev) dormand_prince(gen, rho, t_prev, t, h, options.rk_tolerance);
            t_prev = t;
            rec.record(t, rho);
        }
    }
    return rec.take();
}

} // namespace dwell
