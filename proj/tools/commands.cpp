// commands.cpp

#include "commands.hpp"

#include "output.hpp"

#include "dwell/analytics.hpp"
#include "dwell/generator.hpp"
#include "dwell/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

namespace dwell::cli {

namespace {

using nlohmann::json;

class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : engine_(seed) {}
    double operator()(double lo, double hi)
    {
        return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

private:
    std::mt19937_64 engine_;
};

Matrix4c random_psd(Uniform& u)
{
    Matrix4c b;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) b(i, j) = Complex(u(-1.0, 1.0), u(-1.0, 1.0));
    }
    Matrix4c g = 0.25 * b * b.adjoint();
    return 0.5 * (g + g.adjoint());
}

json complex_matrix(const Matrix4c& m)
{
    json re = json::array();
    json im = json::array();
    for (int i = 0; i < 4; ++i) {
        json rr = json::array();
        json ri = json::array();
        for (int j = 0; j < 4; ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return {{"re", re}, {"im", im}};
}

ModelParams symmetrized(ModelParams p)
{
    p.eps2 = p.eps1;
    return p;
}

json header(const RunContext& ctx, const std::string& command)
{
    return {{"build_id", ctx.build_id},
            {"command", command},
            {"config", ctx.config.echo},
            {"config_text", ctx.config.text},
            {"seed", ctx.config.seed}};
}

std::string path_in(const RunContext& ctx, const std::string& name)
{
    return (std::filesystem::path(ctx.out_dir) / name).string();
}

LindbladGenerator generator_for(const RunConfig& c, const FockBasis& basis, Limit limit)
{
    const LambShift lamb = c.lamb_shift ? LambShift::On : LambShift::Off;
    if (limit == Limit::Singular) return singular_coupling_generator(basis, c.model, c.singular_correlation());
    if (c.model.symmetric_trap()) return weak_coupling_generator(basis, c.model, c.correlation(), lamb);
    return asymmetric_weak_coupling_generator(basis, c.model, c.correlation(), lamb);
}

double analytic_slope(const RunConfig& c, Limit limit)
{
    if (limit == Limit::Singular) return slope_singular(c.N, c.model.lambda, c.G);
    if (!c.model.symmetric_trap()) return 0.0;
    return slope_weak_exact(c.N, c.model, c.correlation());
}

bool report_passes(const SlopeReport& r)
{
    return r.degenerate ? r.abs_deviation < kNullTolerance : r.rel_deviation < kRelativeTolerance;
}

json report_json(const SlopeReport& r)
{
    json j = {{"numeric", r.numeric},
              {"analytic", r.analytic},
              {"abs_deviation", r.abs_deviation},
              {"rel_deviation", r.rel_deviation},
              {"degenerate", r.degenerate},
              {"pass", report_passes(r)}};
    j["analytic_large_n"] = r.analytic_large_n ? json(*r.analytic_large_n) : json(nullptr);
    return j;
}

SlopeReport slope_report(const RunConfig& c, Limit limit)
{
    const FockBasis basis(c.n_max);
    const LindbladGenerator gen = generator_for(c, basis, limit);
    std::optional<double> large_n;
    if (limit == Limit::Weak && c.model.symmetric_trap() && c.kind == CorrelationKind::Exponential) {
        large_n = slope_weak_large_n(c.model, c.correlation());
    }
    return compare(gen, fock_state(basis, c.N, c.N), analytic_slope(c, limit), large_n);
}

json null_case(const std::string& label, double value)
{
    return {{"label", label}, {"value", value}, {"pass", std::abs(value) < kNullTolerance}};
}

void prepare_out_dir(const RunContext& ctx)
{
    std::error_code ec;
    std::filesystem::create_directories(ctx.out_dir, ec);
    if (ec) throw OutputError("cannot create output directory " + ctx.out_dir + ": " + ec.message());
}

} // namespace

json compare_suite(const RunConfig& c, bool& all_pass)
{
    const FockBasis basis(c.n_max);
    const DensityMatrix rho0 = fock_state(basis, c.N, c.N);
    Uniform u(c.seed);

    // Weak-coupling slope identity on the configured G and on random Hermitian PSD draws.
    json weak_cases = json::array();
    bool weak_pass = true;
    {
        RunConfig sym = c;
        sym.model = symmetrized(c.model);
        auto add = [&](const std::string& label, const Matrix4c& G) {
            RunConfig run = sym;
            run.G = G;
            const SlopeReport r = slope_report(run, Limit::Weak);
            json j = report_json(r);
            j["label"] = label;
            if (label != "config") j["G"] = complex_matrix(G);
            weak_pass = weak_pass && report_passes(r);
            weak_cases.push_back(j);
        };
        add("config", c.G);
        for (int k = 0; k < 10; ++k) add("random_G_" + std::to_string(k), random_psd(u));
    }

    // Singular-coupling slope identity and its independence of the system parameters.
    json singular_cases = json::array();
    bool singular_pass = true;
    {
        const SlopeReport base = slope_report(c, Limit::Singular);
        json j = report_json(base);
        j["label"] = "config";
        singular_pass = report_passes(base);
        singular_cases.push_back(j);
        for (int k = 0; k < 5; ++k) {
            RunConfig run = c;
            run.model.T = u(0.0, 0.1);
            run.model.U = u(0.5, 2.0);
            run.model.eps1 = u(0.0, 1.0);
            run.model.eps2 = u(0.0, 1.0);
            const FockBasis b(run.n_max);
            const double numeric = current_slope(generator_for(run, b, Limit::Singular), fock_state(b, run.N, run.N));
            const double shift = std::abs(numeric - base.numeric);
            const bool ok = shift < kNullTolerance;
            singular_pass = singular_pass && ok;
            singular_cases.push_back({{"label", "random_params_" + std::to_string(k)},
                                      {"T", run.model.T},
                                      {"U", run.model.U},
                                      {"eps1", run.model.eps1},
                                      {"eps2", run.model.eps2},
                                      {"numeric", numeric},
                                      {"abs_shift", shift},
                                      {"pass", ok}});
        }
    }

    // Vanishing currents.
    json null_cases = json::array();
    {
        const ModelParams sym = symmetrized(c.model);
        const CorrelationModel eq_exp =
            equal_coupling_model(CorrelationKind::Exponential, Eigen::Vector2d(1.0, 0.5), c.mu, Complex(0.3, 0.2));
        const CorrelationModel eq_delta =
            equal_coupling_model(CorrelationKind::Delta, Eigen::Vector2d(1.0, 0.5), c.mu, Complex(0.3, 0.0));
        null_cases.push_back(
            null_case("equal_coupling_weak", current_slope(weak_coupling_generator(basis, sym, eq_exp), rho0)));
        null_cases.push_back(null_case("equal_coupling_singular",
                                       current_slope(singular_coupling_generator(basis, sym, eq_delta), rho0)));

        ModelParams asym = sym;
        asym.eps2 = sym.eps1 + 0.3;
        null_cases.push_back(null_case(
            "asymmetric_trap_weak", current_slope(asymmetric_weak_coupling_generator(basis, asym, c.correlation()), rho0)));
        null_cases.push_back(null_case("closed_system", closed_current_derivative(basis, c.model, c.N)));
    }
    bool null_pass = true;
    for (const auto& j : null_cases) null_pass = null_pass && j["pass"].get<bool>();

    all_pass = weak_pass && singular_pass && null_pass;
    return {{"weak_slope_identity", {{"pass", weak_pass}, {"cases", weak_cases}}},
            {"singular_slope_identity", {{"pass", singular_pass}, {"cases", singular_cases}}},
            {"null_results", {{"pass", null_pass}, {"cases", null_cases}}}};
}

CommandResult run_slope(const RunContext& ctx)
{
    prepare_out_dir(ctx);
    CommandResult res;
    json doc = header(ctx, "slope");
    doc["N"] = ctx.config.N;
    bool pass = true;
    for (Limit limit : ctx.config.limits()) {
        const SlopeReport r = slope_report(ctx.config, limit);
        doc["reports"][to_string(limit)] = report_json(r);
        pass = pass && report_passes(r);
        res.summary.push_back(to_string(limit) + " slope numeric " + format_number(r.numeric) + " analytic " +
                              format_number(r.analytic) + " rel_dev " + format_number(r.rel_deviation));
    }
    doc["pass"] = pass;
    const std::string path = path_in(ctx, "slope.json");
    write_text(path, dump_json(doc));
    res.written.push_back(path);
    res.code = pass ? kOk : kTolerance;
    return res;
}

CommandResult run_evolve(const RunContext& ctx)
{
    prepare_out_dir(ctx);
    const RunConfig& c = ctx.config;
    const FockBasis basis(c.n_max);
    const DensityMatrix rho0 = fock_state(basis, c.N, c.N);
    const std::vector<double> grid = c.grid();
    CommandResult res;
    bool pass = true;
    for (Limit limit : c.limits()) {
        const LindbladGenerator gen = generator_for(c, basis, limit);
        EvolveOptions opt;
        opt.method = c.method;
        const Trajectory traj = evolve(gen, rho0, grid, opt);

        const std::string stem = "evolve_" + to_string(limit);
        const std::string csv = path_in(ctx, stem + ".csv");
        write_text(csv, trajectory_csv(traj));

        const auto flagged = std::count(traj.flagged.begin(), traj.flagged.end(), true);
        json doc = header(ctx, "evolve");
        doc["limit"] = to_string(limit);
        doc["method"] = c.method == Method::ExpProp ? "expprop" : "rk";
        doc["csv"] = std::filesystem::path(csv).filename().string();
        doc["points"] = traj.size();
        doc["max_trace_dev"] = *std::max_element(traj.trace_dev.begin(), traj.trace_dev.end());
        doc["min_eigenvalue"] = *std::min_element(traj.min_eig.begin(), traj.min_eig.end());
        doc["max_leakage"] = *std::max_element(traj.leakage.begin(), traj.leakage.end());
        doc["max_hermiticity_error"] = *std::max_element(traj.hermiticity.begin(), traj.hermiticity.end());
        doc["flagged_points"] = flagged;
        doc["initial_slope"] = current_slope(gen, rho0);
        doc["analytic_slope"] = analytic_slope(c, limit);
        doc["pass"] = flagged == 0;
        pass = pass && flagged == 0;

        const std::string diag = path_in(ctx, stem + ".json");
        write_text(diag, dump_json(doc));
        res.written.push_back(csv);
        res.written.push_back(diag);
        res.summary.push_back(to_string(limit) + " J(t_max) " + format_number(traj.real_series("J").back()) +
                              " flagged " + std::to_string(flagged));
    }
    res.code = pass ? kOk : kTolerance;
    return res;
}

CommandResult run_unravel(const RunContext& ctx)
{
    const RunConfig& c = ctx.config;
    if (!c.noise) throw ConfigError("unravel needs a noise section");
    if (c.G.imag().cwiseAbs().maxCoeff() != 0.0) throw ConfigError("unravel needs a real environment.G");
    prepare_out_dir(ctx);

    NoiseConfig noise;
    noise.G = c.G.real();
    noise.dt = c.noise->dt;
    noise.seed = c.seed;
    noise.trajectories = c.noise->trajectories;
    noise.channels = c.noise->channels;

    const FockBasis basis(c.n_max);
    const DensityMatrix rho0 = fock_state(basis, c.N, c.N);
    const std::vector<double> grid = c.grid();
    EnsembleOptions opt;
    opt.check_convergence = c.noise->check_convergence;
    const EnsembleResult ens = run_ensemble(basis, c.model, noise, rho0, grid, opt);

    const LindbladGenerator ref_gen = singular_coupling_generator(basis, c.model, calibrated_singular_model(noise));
    const Trajectory ref = evolve(ref_gen, rho0, grid);
    const std::vector<double> j_ens = ens.mean.real_series("J");
    const std::vector<double> j_ref = ref.real_series("J");

    json z = json::array();
    double max_z = 0.0;
    bool pass = true;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double diff = std::abs(j_ens[k] - j_ref[k]);
        const double se = ens.j_stderr[k];
        pass = pass && diff <= kEnsembleSigmas * se + 1e-14;
        const double zk = se > 0.0 ? diff / se : 0.0;
        max_z = std::max(max_z, zk);
        z.push_back(zk);
    }

    CommandResult res;
    const std::string csv = path_in(ctx, "unravel.csv");
    write_text(csv, trajectory_csv(ens.mean, &ens.j_stderr));

    json doc = header(ctx, "unravel");
    doc["csv"] = "unravel.csv";
    doc["trajectories"] = ens.trajectories;
    doc["dt"] = noise.dt;
    doc["calibration_factor"] = kWhiteNoiseCalibration;
    doc["lindblad_J"] = j_ref;
    doc["abs_z"] = z;
    doc["max_abs_z"] = max_z;
    doc["dt_halving_shift"] = ens.dt_halving_shift ? json(*ens.dt_halving_shift) : json(nullptr);
    doc["pass"] = pass;
    const std::string report = path_in(ctx, "unravel.json");
    write_text(report, dump_json(doc));

    res.written = {csv, report};
    res.summary.push_back("ensemble of " + std::to_string(ens.trajectories) + " trajectories, max |z| " +
                          format_number(max_z));
    res.code = pass ? kOk : kTolerance;
    return res;
}

CommandResult run_compare(const RunContext& ctx)
{
    prepare_out_dir(ctx);
    bool all_pass = false;
    json doc = header(ctx, "compare");
    doc["checks"] = compare_suite(ctx.config, all_pass);
    doc["all_pass"] = all_pass;

    CommandResult res;
    const std::string path = path_in(ctx, "compare.json");
    write_text(path, dump_json(doc));
    res.written.push_back(path);
    for (const char* name : {"weak_slope_identity", "singular_slope_identity", "null_results"}) {
        res.summary.push_back(std::string(name) + (doc["checks"][name]["pass"].get<bool>() ? ": pass" : ": FAIL"));
    }
    res.code = all_pass ? kOk : kTolerance;
    return res;
}

} // namespace dwell::cli
