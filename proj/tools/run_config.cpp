// run_config.cpp

#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace dwell::cli {

namespace {

using nlohmann::json;

// Wraps a JSON object and reports unknown or mistyped keys with their full path.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path))
    {
        if (!node_.is_object()) throw ConfigError(where() + " must be an object");
    }

    bool has(const std::string& key)
    {
        seen_.insert(key);
        return node_.contains(key);
    }

    const json& at(const std::string& key)
    {
        seen_.insert(key);
        if (!node_.contains(key)) throw ConfigError("missing key " + child(key));
        return node_.at(key);
    }

    double number(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError(child(key) + " must be a number");
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    int integer(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number_integer()) throw ConfigError(child(key) + " must be an integer");
        return v.get<int>();
    }

    int integer_or(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

    bool boolean_or(const std::string& key, bool fallback)
    {
        if (!has(key)) return fallback;
        const json& v = node_.at(key);
        if (!v.is_boolean()) throw ConfigError(child(key) + " must be a boolean");
        return v.get<bool>();
    }

    std::string string(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError(child(key) + " must be a string");
        return v.get<std::string>();
    }

    std::string string_or(const std::string& key, const std::string& fallback)
    {
        return has(key) ? string(key) : fallback;
    }

    Section section(const std::string& key) { return Section(at(key), child(key)); }

    void finish() const
    {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError("unknown key " + child(it.key()));
        }
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    std::string where() const { return path_.empty() ? "config" : path_; }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

Eigen::Matrix4d real_matrix(const json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 4) throw ConfigError(path + " must be a 4x4 array");
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i) {
        const json& row = v[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != 4) throw ConfigError(path + " must be a 4x4 array");
        for (int j = 0; j < 4; ++j) {
            const json& x = row[static_cast<std::size_t>(j)];
            if (!x.is_number()) throw ConfigError(path + " entries must be numbers");
            m(i, j) = x.get<double>();
        }
    }
    return m;
}

void require_positive(double value, const std::string& name)
{
    if (!(value > 0.0)) throw ConfigError(name + " must be positive");
}

} // namespace

std::string to_string(Limit limit) { return limit == Limit::Weak ? "weak" : "singular"; }

std::vector<Limit> RunConfig::limits() const
{
    if (scenario.ends_with("-weak")) return {Limit::Weak};
    if (scenario.ends_with("-singular") || scenario == "unravel") return {Limit::Singular};
    return {Limit::Weak, Limit::Singular};
}

std::string RunConfig::default_command() const
{
    if (scenario == "compare-all") return "compare";
    if (scenario == "unravel") return "unravel";
    return scenario.substr(0, scenario.find('-'));
}

CorrelationModel RunConfig::correlation() const
{
    return kind == CorrelationKind::Exponential ? CorrelationModel::exponential(G, mu) : CorrelationModel::delta(G);
}

CorrelationModel RunConfig::singular_correlation() const { return CorrelationModel::delta(G); }

std::vector<double> RunConfig::grid() const { return uniform_grid(t_max, points); }

RunConfig parse_config(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }

    RunConfig c;
    c.text = text;
    c.echo = doc;
    Section root(doc, "");

    {
        Section m = root.section("model");
        c.model.T = m.number("T");
        c.model.U = m.number("U");
        c.model.eps1 = m.number("eps1");
        c.model.eps2 = m.number("eps2");
        c.model.lambda = m.number("lambda");
        m.finish();
    }
    {
        Section b = root.section("basis");
        c.n_max = b.integer("n_max");
        b.finish();
    }
    {
        Section s = root.section("initial_state");
        c.N = s.integer("N");
        s.finish();
    }
    {
        Section e = root.section("environment");
        const std::string kind = e.string("kind");
        if (kind == "exponential") {
            c.kind = CorrelationKind::Exponential;
        } else if (kind == "delta") {
            c.kind = CorrelationKind::Delta;
        } else {
            throw ConfigError("environment.kind must be \"exponential\" or \"delta\"");
        }
        c.mu = e.number_or("mu", 1.0);
        if (c.kind == CorrelationKind::Exponential) require_positive(c.mu, "environment.mu");
        c.lamb_shift = e.boolean_or("lamb_shift", false);

        Section g = e.section("G");
        const Eigen::Matrix4d re = real_matrix(g.at("re"), "environment.G.re");
        const Eigen::Matrix4d im = g.has("im") ? real_matrix(g.at("im"), "environment.G.im") : Eigen::Matrix4d::Zero();
        g.finish();
        c.G = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
        e.finish();
    }

    c.scenario = root.string_or("scenario", "compare-all");
    if (std::find(kScenarios.begin(), kScenarios.end(), c.scenario) == kScenarios.end()) {
        throw ConfigError("unknown scenario \"" + c.scenario + "\"");
    }

    {
        Section t = root.section("time_grid");
        c.t_max = t.number("t_max");
        c.points = t.integer("points");
        t.finish();
        require_positive(c.t_max, "time_grid.t_max");
        if (c.points < 2) throw ConfigError("time_grid.points must be at least 2");
    }

    if (root.has("evolution")) {
        Section ev = root.section("evolution");
        const std::string method = ev.string_or("method", "expprop");
        if (method == "expprop") {
            c.method = Method::ExpProp;
        } else if (method == "rk") {
            c.method = Method::RK;
        } else {
            throw ConfigError("evolution.method must be \"expprop\" or \"rk\"");
        }
        ev.finish();
    }

    if (root.has("seed")) {
        const json& s = root.at("seed");
        if (!s.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }

    if (root.has("noise")) {
        Section n = root.section("noise");
        NoiseBlock nb;
        nb.dt = n.number_or("dt", nb.dt);
        nb.trajectories = n.integer_or("trajectories", nb.trajectories);
        nb.check_convergence = n.boolean_or("check_convergence", false);
        if (n.has("channels")) {
            const json& ch = n.at("channels");
            if (!ch.is_array() || ch.size() != 4) throw ConfigError("noise.channels must be 4 booleans");
            for (std::size_t i = 0; i < 4; ++i) {
                if (!ch[i].is_boolean()) throw ConfigError("noise.channels must be 4 booleans");
                nb.channels[i] = ch[i].get<bool>();
            }
        }
        n.finish();
        require_positive(nb.dt, "noise.dt");
        if (nb.trajectories < 2) throw ConfigError("noise.trajectories must be at least 2");
        c.noise = nb;
    }

    if (root.has("output")) {
        Section o = root.section("output");
        c.output_dir = o.string_or("dir", c.output_dir);
        o.finish();
    }
    root.finish();

    if (c.n_max < 1) throw ConfigError("basis.n_max must be at least 1");
    if (c.N < 1 || c.N > c.n_max - 1) throw ConfigError("initial_state.N must lie in [1, n_max - 1]");
    try {
        c.model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    if (c.scenario == "unravel" && !c.noise) throw ConfigError("scenario unravel needs a noise section");
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace dwell::cli
