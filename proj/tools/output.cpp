// output.cpp

#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dwell::cli {

namespace {

void dump(const nlohmann::json& v, int depth, std::string& out)
{
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
    case nlohmann::json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + nlohmann::json(it.key()).dump() + ": ";
            dump(it.value(), depth + 1, out);
        }
        out += "\n" + close + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            dump(v[i], depth + 1, out);
        }
        out += "\n" + close + "]";
        return;
    }
    case nlohmann::json::value_t::number_float: {
        const double x = v.get<double>();
        out += std::isfinite(x) ? format_number(x) : "null";
        return;
    }
    default:
        out += v.dump();
    }
}

} // namespace

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string dump_json(const nlohmann::json& doc)
{
    std::string out;
    dump(doc, 0, out);
    out += "\n";
    return out;
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<double>* stderr_column)
{
    const std::vector<double> j = traj.real_series("J");
    if (stderr_column && stderr_column->size() != traj.size()) {
        throw std::invalid_argument("stderr column length does not match the trajectory");
    }
    std::string out = stderr_column ? "t,J,trace_dev,min_eig,leakage,stderr\n" : "t,J,trace_dev,min_eig,leakage\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out += format_number(traj.times[k]) + "," + format_number(j[k]) + "," + format_number(traj.trace_dev[k]) +
               "," + format_number(traj.min_eig[k]) + "," + format_number(traj.leakage[k]);
        if (stderr_column) out += "," + format_number((*stderr_column)[k]);
        out += "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + path);
    out << content;
    if (!out) throw OutputError("write failed: " + path);
}

} // namespace dwell::cli
