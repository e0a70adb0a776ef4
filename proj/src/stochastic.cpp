// stochastic.cpp: white-noise trajectory ensembles

#include "dwell/stochastic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace dwell {

namespace {

constexpr Complex kI{0.0, 1.0};
// Fixed reduction partition; independent of the thread count so sums are bit-reproducible.
constexpr int kReductionBlocks = 16;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Normal deviates via Box-Muller on raw 64-bit draws; std::normal_distribution is
// implementation-defined, this keeps the stream identical across standard libraries.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
        double u1 = 0.0;
        do {
            u1 = static_cast<double>(engine_() >> 11) * kScale;
        } while (u1 == 0.0);
        const double u2 = static_cast<double>(engine_() >> 11) * kScale;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct BlockSums {
    std::vector<OperatorMatrix> rho;  // per grid time
    std::vector<double> j_sum;
    std::vector<double> j_sq;
};

struct RunShape {
    int path_level;  // Brownian increments drawn on dt / 2^path_level
    int step_level;  // integrator step dt / 2^step_level, step_level <= path_level
};

class Engine {
public:
    Engine(const FockBasis& basis, const ModelParams& p, const NoiseConfig& noise, const DensityMatrix& rho0,
           const std::vector<double>& t_grid)
        : basis_(basis), noise_(noise), grid_(t_grid), lambda_(p.lambda)
    {
        const OperatorMatrix hs = bose_hubbard_hamiltonian(basis, p);
        Eigen::SelfAdjointEigenSolver<OperatorMatrix> eig(hs);
        if (eig.info() != Eigen::Success) throw NumericalError("Hamiltonian diagonalization failed");
        energies_ = eig.eigenvalues();
        vectors_ = eig.eigenvectors();

        for (int n = 0; n <= basis.n_max(); ++n) sqrt_n_.push_back(std::sqrt(static_cast<double>(n)));
        sqrt_g_ = psd_sqrt(noise.effective_G());
        current_ = current_operator(basis);

        // rho0 = Psi Psi^dag from its eigen-decomposition; a pure state gives one column.
        Eigen::SelfAdjointEigenSolver<OperatorMatrix> re(0.5 * (rho0.matrix() + rho0.matrix().adjoint()));
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < re.eigenvalues().size(); ++k) {
            if (re.eigenvalues()(k) > 1e-14) keep.push_back(k);
        }
        psi0_.resize(basis.dim(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c) {
            psi0_.col(static_cast<Eigen::Index>(c)) = std::sqrt(re.eigenvalues()(keep[c])) * re.eigenvectors().col(keep[c]);
        }

        for (double t : grid_) {
            const double steps = t / noise.dt;
            const double rounded = std::round(steps);
            if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
                throw std::invalid_argument("time grid points must be integer multiples of the noise step dt");
            }
            grid_steps_.push_back(static_cast<long>(rounded));
        }
    }

    BlockSums run_block(int first, int last, RunShape shape) const
    {
        const double h = noise_.dt / std::ldexp(1.0, shape.step_level);
        const int draws = 1 << (shape.path_level - shape.step_level);
        const double draw_scale = std::sqrt(noise_.dt / std::ldexp(1.0, shape.path_level));
        const OperatorMatrix half = propagator(0.5 * h);
        const OperatorMatrix full = propagator(h);
        const long per_dt = 1L << shape.step_level;

        BlockSums sums;
        sums.rho.assign(grid_.size(), OperatorMatrix::Zero(basis_.dim(), basis_.dim()));
        sums.j_sum.assign(grid_.size(), 0.0);
        sums.j_sq.assign(grid_.size(), 0.0);

        Eigen::MatrixXcd psi;
        Eigen::MatrixXcd scratch;
        Eigen::MatrixXcd term;
        Eigen::MatrixXcd next;
        for (int traj = first; traj < last; ++traj) {
            NormalStream normal(trajectory_seed(noise_.seed, static_cast<std::uint64_t>(traj)));
            psi = psi0_;
            long done = 0;
            for (std::size_t k = 0; k < grid_.size(); ++k) {
                const long target = grid_steps_[k] * per_dt;
                const long n = target - done;
                if (n > 0) {
                    scratch.noalias() = half * psi;
                    psi.swap(scratch);
                    for (long s = 0; s < n; ++s) {
                        Eigen::Vector4d z = Eigen::Vector4d::Zero();
                        for (int d = 0; d < draws; ++d) {
                            for (int c = 0; c < 4; ++c) z(c) += normal.next();
                        }
                        const Eigen::Vector4d dw = sqrt_g_ * (z * draw_scale);
                        apply_noise(dw, psi, term, next);
                        scratch.noalias() = (s + 1 < n ? full : half) * psi;
                        psi.swap(scratch);
                    }
                    done = target;
                }
                sums.rho[k].noalias() += psi * psi.adjoint();
                const double j = (psi.adjoint() * current_ * psi).trace().real();
                sums.j_sum[k] += j;
                sums.j_sq[k] += j * j;
            }
        }
        return sums;
    }

    const FockBasis& basis() const { return basis_; }
    const std::vector<double>& grid() const { return grid_; }

private:
    OperatorMatrix propagator(double tau) const
    {
        const Eigen::VectorXcd phases = (energies_.cast<Complex>() * (-kI * tau)).array().exp();
        return vectors_ * phases.asDiagonal() * vectors_.adjoint();
    }

    // psi <- exp(-i lambda sum_c dw_c V_c) psi by Taylor series to double precision.
    // sum_c dw_c V_c = z1 a1 + conj(z1) a1^dag + z2 a2 + conj(z2) a2^dag with
    // z1 = dw_1 + i dw_2, z2 = dw_3 + i dw_4.
    void apply_noise(const Eigen::Vector4d& dw, Eigen::MatrixXcd& psi, Eigen::MatrixXcd& term,
                     Eigen::MatrixXcd& next) const
    {
        if (lambda_ == 0.0 || dw.isZero(0.0)) return;
        const Complex z1(dw(0), dw(1));
        const Complex z2(dw(2), dw(3));
        const int levels = basis_.levels();
        const double base = psi.cwiseAbs().maxCoeff();
        term = psi;
        next.resize(psi.rows(), psi.cols());
        for (int k = 1; k <= 60; ++k) {
            const Complex scale = -kI * lambda_ / static_cast<double>(k);
            next.setZero();
            for (Eigen::Index col = 0; col < psi.cols(); ++col) {
                const Complex* x = term.col(col).data();
                Complex* y = next.col(col).data();
                for (int n1 = 0; n1 < levels; ++n1) {
                    for (int n2 = 0; n2 < levels; ++n2) {
                        const int i = n1 * levels + n2;
                        const Complex v = scale * x[i];
                        if (n1 > 0) y[i - levels] += z1 * sqrt_n_[n1] * v;
                        if (n1 + 1 < levels) y[i + levels] += std::conj(z1) * sqrt_n_[n1 + 1] * v;
                        if (n2 > 0) y[i - 1] += z2 * sqrt_n_[n2] * v;
                        if (n2 + 1 < levels) y[i + 1] += std::conj(z2) * sqrt_n_[n2 + 1] * v;
                    }
                }
            }
            term.swap(next);
            psi += term;
            if (term.cwiseAbs().maxCoeff() <= 1e-18 * base) return;
        }
        throw NumericalError("noise propagator series did not converge; reduce dt");
    }

    const FockBasis& basis_;
    NoiseConfig noise_;
    std::vector<double> grid_;
    std::vector<long> grid_steps_;
    double lambda_;
    Eigen::VectorXd energies_;
    OperatorMatrix vectors_;
    std::vector<double> sqrt_n_;
    Eigen::Matrix4d sqrt_g_;
    OperatorMatrix current_;
    Eigen::MatrixXcd psi0_;
};

BlockSums simulate(const Engine& engine, int trajectories, RunShape shape, unsigned threads)
{
    const int blocks = std::min(kReductionBlocks, trajectories);
    std::vector<BlockSums> results(static_cast<std::size_t>(blocks));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int b = next++; b < blocks; b = next++) {
            const int first = static_cast<int>(static_cast<long>(trajectories) * b / blocks);
            const int last = static_cast<int>(static_cast<long>(trajectories) * (b + 1) / blocks);
            results[static_cast<std::size_t>(b)] = engine.run_block(first, last, shape);
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(blocks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    BlockSums total = std::move(results.front());
    for (std::size_t b = 1; b < results.size(); ++b) {
        for (std::size_t k = 0; k < total.rho.size(); ++k) {
            total.rho[k] += results[b].rho[k];
            total.j_sum[k] += results[b].j_sum[k];
            total.j_sq[k] += results[b].j_sq[k];
        }
    }
    return total;
}

EnsembleResult summarize(const Engine& engine, const BlockSums& sums, const NoiseConfig& noise)
{
    const double m = noise.trajectories;
    EnsembleResult out;
    out.trajectories = noise.trajectories;
    out.seed = noise.seed;
    Trajectory& tr = out.mean;
    tr.times = engine.grid();
    tr.observable_names = {"J"};
    tr.values.assign(1, {});
    for (std::size_t k = 0; k < sums.rho.size(); ++k) {
        const OperatorMatrix rho = sums.rho[k] / m;
        const double mean_j = sums.j_sum[k] / m;
        tr.values[0].push_back(mean_j);
        const double trace_dev = std::abs(rho.trace() - Complex(1.0));
        tr.trace_dev.push_back(trace_dev);
        tr.min_eig.push_back(min_eigenvalue(rho));
        tr.leakage.push_back(edge_leakage(engine.basis(), rho));
        tr.hermiticity.push_back(hermiticity_error(rho));
        tr.flagged.push_back(!(trace_dev < kTraceFlagTol));
        double se = 0.0;
        if (noise.trajectories > 1) {
            const double var = std::max(0.0, (sums.j_sq[k] - m * mean_j * mean_j) / (m - 1.0));
            se = std::sqrt(var / m);
        }
        out.j_stderr.push_back(se);
    }
    return out;
}

} // namespace

void NoiseConfig::validate() const
{
    if (!G.allFinite()) throw std::invalid_argument("noise covariance has non-finite entries");
    if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("noise covariance must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(G, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("noise covariance must be positive semidefinite");
    }
    if (!(dt > 0.0 && std::isfinite(dt))) throw std::invalid_argument("noise step dt must be > 0");
    if (trajectories < 1) throw std::invalid_argument("trajectory count must be >= 1");
}

Eigen::Matrix4d NoiseConfig::effective_G() const
{
    Eigen::Matrix4d g = G;
    for (int c = 0; c < 4; ++c) {
        if (!channels[static_cast<std::size_t>(c)]) {
            g.row(c).setZero();
            g.col(c).setZero();
        }
    }
    return g;
}

Eigen::Matrix4d psd_sqrt(const Eigen::Matrix4d& G)
{
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(0.5 * (G + G.transpose()));
    const Eigen::Vector4d roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index)
{
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

CorrelationModel calibrated_singular_model(const NoiseConfig& noise, double factor)
{
    return CorrelationModel::delta((factor * noise.effective_G()).cast<Complex>());
}

EnsembleResult run_ensemble(const FockBasis& basis, const ModelParams& p, const NoiseConfig& noise,
                            const DensityMatrix& rho0, const std::vector<double>& t_grid,
                            const EnsembleOptions& options)
{
    p.validate();
    noise.validate();
    validate_time_grid(t_grid);
    if (!(rho0.basis() == basis)) throw std::invalid_argument("run_ensemble: basis mismatch");

    const Engine engine(basis, p, noise, rho0, t_grid);
    if (!options.check_convergence) {
        return summarize(engine, simulate(engine, noise.trajectories, {0, 0}, options.threads), noise);
    }

    // Same Brownian paths at dt and dt/2.
    const EnsembleResult coarse =
        summarize(engine, simulate(engine, noise.trajectories, {1, 0}, options.threads), noise);
    EnsembleResult fine = summarize(engine, simulate(engine, noise.trajectories, {1, 1}, options.threads), noise);
    const double shift = std::abs(fine.mean.values[0].back().real() - coarse.mean.values[0].back().real());
    fine.dt_halving_shift = shift;
    const double allowed = options.convergence_tolerance * fine.j_stderr.back();
    if (shift > allowed) {
        std::ostringstream os;
        os << "dt halving moved <J(t_max)> by " << shift << " > " << allowed << "; reduce dt";
        throw StepSizeError(os.str());
    }
    return fine;
}

double calibrate_noise(const Eigen::Matrix4d& G, bool convention_probe, std::uint64_t seed, int trajectories)
{
    NoiseConfig check;
    check.G = G;
    check.validate();
    if (!convention_probe) return kWhiteNoiseCalibration;
    if (trajectories < 2) throw std::invalid_argument("calibration needs at least 2 trajectories");

    // Two-level truncation of the strongest channel: V = sigma_x (position-like) or
    // sigma_y (momentum-like), H_S = 0, start in |0>, so <sigma_z>(t) = exp(-2 lambda^2 kappa g t).
    int channel = 0;
    G.diagonal().maxCoeff(&channel);
    const double g = G(channel, channel);
    if (!(g > 0.0)) throw NumericalError("calibration fit failure: noise covariance has no active channel");
    const bool momentum_like = channel % 2 == 1;

    constexpr double kLambda = 1.0;
    constexpr int kSteps = 16;
    const double t_end = 1.0 / (2.0 * kLambda * kLambda * g);  // unit decay exponent at kappa = 1
    const double dt = t_end / kSteps;
    const double sd = std::sqrt(g * dt);

    double sum = 0.0;
    for (int traj = 0; traj < trajectories; ++traj) {
        NormalStream normal(trajectory_seed(seed, static_cast<std::uint64_t>(traj)));
        Eigen::Vector2cd psi(1.0, 0.0);
        for (int s = 0; s < kSteps; ++s) {
            const double phi = kLambda * sd * normal.next();
            // exp(-i phi sigma) = cos(phi) - i sin(phi) sigma
            const Complex c = std::cos(phi);
            const Complex is = kI * std::sin(phi);
            Eigen::Vector2cd out;
            if (momentum_like) {
                // sigma_y = [[0, -i], [i, 0]]
                out(0) = c * psi(0) - is * (-kI * psi(1));
                out(1) = c * psi(1) - is * (kI * psi(0));
            } else {
                out(0) = c * psi(0) - is * psi(1);
                out(1) = c * psi(1) - is * psi(0);
            }
            psi = out;
        }
        sum += std::norm(psi(0)) - std::norm(psi(1));
    }
    const double mean = sum / trajectories;
    if (!(mean > 0.0)) throw NumericalError("calibration fit failure: <sigma_z> did not decay to a positive value");
    return -std::log(mean) / (2.0 * kLambda * kLambda * g * t_end);
}

} // namespace dwell
