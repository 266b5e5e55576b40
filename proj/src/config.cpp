#include "sarg04/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sarg04 {

namespace {

std::string trim(const std::string& s) {
    size_t begin = 0;
    size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t consumed = 0;
        const double v = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": not a number: '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        size_t consumed = 0;
        const unsigned long long v = std::stoull(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": not an unsigned integer: '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t consumed = 0;
        const int v = std::stoi(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": not an integer: '" + value + "'");
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig::RunConfig() {
    channel.alpha_db_per_km = std::numeric_limits<double>::quiet_NaN();
}

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "d_r_mm") channel.d_r_mm = parse_double(key, value);
    else if (key == "d_t_mm") channel.d_t_mm = parse_double(key, value);
    else if (key == "divergence_mrad") channel.divergence_mrad = parse_double(key, value);
    else if (key == "alpha_db_per_km") channel.alpha_db_per_km = parse_double(key, value);
    else if (key == "eta_bob") channel.eta_bob = parse_double(key, value);
    else if (key == "p_dark") det.p_dark = parse_double(key, value);
    else if (key == "e_det") det.e_det = parse_double(key, value);
    else if (key == "f_ec") det.f_ec = parse_double(key, value);
    else if (key == "mu") mu = parse_double(key, value);
    else if (key == "mu_mode") {
        if (value == "fixed") mu_mode = MuMode::fixed;
        else if (value == "optimized") mu_mode = MuMode::optimized;
        else throw std::invalid_argument("mu_mode must be 'fixed' or 'optimized'");
    } else if (key == "mu_lo") mu_range.lo = parse_double(key, value);
    else if (key == "mu_hi") mu_range.hi = parse_double(key, value);
    else if (key == "axis") {
        if (value == "loss_db") axis = SweepAxis::loss_db;
        else if (value == "distance_km") axis = SweepAxis::distance_km;
        else throw std::invalid_argument("axis must be 'loss_db' or 'distance_km'");
    } else if (key == "start") start = parse_double(key, value);
    else if (key == "stop") stop = parse_double(key, value);
    else if (key == "steps") steps = parse_int(key, value);
    else if (key == "loss_convention") {
        if (value == "exclude_eta_bob") loss_convention = LossConvention::exclude_eta_bob;
        else if (value == "include_eta_bob") loss_convention = LossConvention::include_eta_bob;
        else throw std::invalid_argument(
            "loss_convention must be 'exclude_eta_bob' or 'include_eta_bob'");
    } else if (key == "loss_db") loss_db = parse_double(key, value);
    else if (key == "distance_km") distance_km = parse_double(key, value);
    else if (key == "pulses") pulses = parse_u64(key, value);
    else if (key == "seed") seed = parse_u64(key, value);
    else if (key == "batch_size") batch_size = parse_u64(key, value);
    else if (key == "threads") threads = parse_int(key, value);
    else if (key == "cutoff_lo_db") cutoff_lo_db = parse_double(key, value);
    else if (key == "cutoff_hi_db") cutoff_hi_db = parse_double(key, value);
    else if (key == "tol_db") tol_db = parse_double(key, value);
    else if (key == "out") out = value;
    else throw std::invalid_argument("unknown config key: '" + key + "'");
}

double RunConfig::evaluation_eta() const {
    if (distance_km) {
        if (std::isnan(channel.alpha_db_per_km))
            throw std::invalid_argument(
                "alpha_db_per_km must be set for distance-based evaluation");
        return overall_transmittance(channel, LinkPoint{*distance_km});
    }
    return eta_from_loss_db(loss_db, channel.eta_bob, loss_convention);
}

RunConfig parse_config(std::istream& in, RunConfig defaults) {
    RunConfig config = std::move(defaults);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key or value");
        try {
            config.apply(key, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": " + e.what());
        }
    }
    return config;
}

RunConfig parse_config_file(const std::string& path, RunConfig defaults) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse_config(in, std::move(defaults));
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "d_r_mm = " << format_double(c.channel.d_r_mm) << '\n'
       << "d_t_mm = " << format_double(c.channel.d_t_mm) << '\n'
       << "divergence_mrad = " << format_double(c.channel.divergence_mrad) << '\n';
    if (!std::isnan(c.channel.alpha_db_per_km))
        os << "alpha_db_per_km = " << format_double(c.channel.alpha_db_per_km) << '\n';
    os << "eta_bob = " << format_double(c.channel.eta_bob) << '\n'
       << "p_dark = " << format_double(c.det.p_dark) << '\n'
       << "e_det = " << format_double(c.det.e_det) << '\n'
       << "f_ec = " << format_double(c.det.f_ec) << '\n'
       << "mu = " << format_double(c.mu) << '\n'
       << "mu_mode = " << to_string(c.mu_mode) << '\n'
       << "mu_lo = " << format_double(c.mu_range.lo) << '\n'
       << "mu_hi = " << format_double(c.mu_range.hi) << '\n'
       << "axis = " << to_string(c.axis) << '\n'
       << "start = " << format_double(c.start) << '\n'
       << "stop = " << format_double(c.stop) << '\n'
       << "steps = " << c.steps << '\n'
       << "loss_convention = " << to_string(c.loss_convention) << '\n'
       << "loss_db = " << format_double(c.loss_db) << '\n';
    if (c.distance_km)
        os << "distance_km = " << format_double(*c.distance_km) << '\n';
    os << "pulses = " << c.pulses << '\n'
       << "seed = " << c.seed << '\n'
       << "batch_size = " << c.batch_size << '\n'
       << "threads = " << c.threads << '\n'
       << "cutoff_lo_db = " << format_double(c.cutoff_lo_db) << '\n'
       << "cutoff_hi_db = " << format_double(c.cutoff_hi_db) << '\n'
       << "tol_db = " << format_double(c.tol_db) << '\n'
       << "out = " << c.out << '\n';
    return os.str();
}

std::string to_string(MuMode mode) {
    return mode == MuMode::fixed ? "fixed" : "optimized";
}

std::string to_string(SweepAxis axis) {
    return axis == SweepAxis::loss_db ? "loss_db" : "distance_km";
}

std::string to_string(LossConvention convention) {
    return convention == LossConvention::exclude_eta_bob ? "exclude_eta_bob"
                                                         : "include_eta_bob";
}

}  // namespace sarg04
