// output.hpp: CSV and JSON writers with 17-significant-digit numbers

#pragma once

#include "dwell/evolution.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dwell::cli {

// %.17g; non-finite values become nan / inf / -inf.
std::string format_number(double x);

// Pretty-printed JSON with sorted keys; floats as %.17g, non-finite floats as null.
std::string dump_json(const nlohmann::json& doc);

// Header t,J,trace_dev,min_eig,leakage[,stderr]; J is the real part of the "J" observable.
std::string trajectory_csv(const Trajectory& traj, const std::vector<double>* stderr_column = nullptr);

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& content);

} // namespace dwell::cli
