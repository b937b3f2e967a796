#include <mlcp/solver_config.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace mlcp {
namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string &key, const std::string &text) {
    const std::string t = trim(text);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw InvalidArgument("config key '" + key + "': not a number: '" + text + "'");
    return v;
}

int parse_int(const std::string &key, const std::string &text) {
    const std::string t = trim(text);
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw InvalidArgument("config key '" + key + "': not an integer: '" + text + "'");
    return v;
}

bool parse_bool(const std::string &key, const std::string &text) {
    const std::string t = trim(text);
    if (t == "1" || t == "true" || t == "on" || t == "yes")
        return true;
    if (t == "0" || t == "false" || t == "off" || t == "no")
        return false;
    throw InvalidArgument("config key '" + key + "': not a boolean: '" + text + "'");
}

void require(bool ok, const std::string &msg) {
    if (!ok)
        throw InvalidArgument(msg);
}

} // namespace

std::string format_double(double v) {
    // Shortest form that reads back to the same bits.
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void SolverConfig::validate(std::size_t ndim) const {
    require(ndim >= 2, "solver needs a tensor with at least two modes");
    require(gamma > 0 && std::isfinite(gamma), "gamma must be positive");
    require(epsilon > 0 && std::isfinite(epsilon), "epsilon must be positive");
    require(mu0 > 0 && std::isfinite(mu0), "mu0 must be positive");
    require(rho0 > 0 && std::isfinite(rho0), "rho0 must be positive");
    require(gamma1 > 1 && std::isfinite(gamma1), "gamma1 must exceed 1");
    require(growth >= 1 && std::isfinite(growth), "growth must be >= 1");
    require(tol > 0, "tol must be positive");
    require(max_iter >= 0, "max_iter must be non-negative");
    require(tau1 >= 0 && tau2 >= 0 && tau1_scale >= 0, "tau1, tau2 and tau1_scale must be non-negative");
    require(penalty_tau0 > 0, "penalty_tau0 must be positive");
    const auto b = resolved_beta(ndim);
    for (double w : b)
        require(w >= 0 && std::isfinite(w), "beta weights must be non-negative");
    const double sum = std::accumulate(b.begin(), b.end(), 0.0);
    require(std::abs(sum - 1.0) <= 1e-12, "beta weights must sum to 1 (got " + format_double(sum) + ")");
}

std::vector<double> SolverConfig::resolved_beta(std::size_t ndim) const {
    const std::size_t pairs = ndim * (ndim - 1) / 2;
    if (beta.empty())
        return std::vector<double>(pairs, 1.0 / static_cast<double>(pairs));
    if (beta.size() != pairs)
        throw InvalidArgument("beta needs " + std::to_string(pairs) + " weights for a " +
                              std::to_string(ndim) + "-way tensor, got " + std::to_string(beta.size()));
    return beta;
}

double SolverConfig::resolved_tau1(const Shape &shape) const {
    if (tau1 > 0)
        return tau1;
    const double rest = static_cast<double>(shape_numel(shape)) / static_cast<double>(shape[0] * shape[1]);
    const double big = static_cast<double>(std::max(shape[0], shape[1]));
    return tau1_scale / std::sqrt(big * rest);
}

double SolverConfig::resolved_tau2(const Shape &shape) const {
    return tau2 > 0 ? tau2 : 10 * resolved_tau1(shape);
}

void SolverConfig::set(const std::string &key, const std::string &value) {
    if (key == "gamma")
        gamma = parse_double(key, value);
    else if (key == "epsilon")
        epsilon = parse_double(key, value);
    else if (key == "beta") {
        beta.clear();
        const std::string v = trim(value);
        if (v != "uniform" && !v.empty()) {
            std::stringstream ss(v);
            for (std::string item; std::getline(ss, item, ',');)
                beta.push_back(parse_double(key, item));
        }
    } else if (key == "mu0")
        mu0 = parse_double(key, value);
    else if (key == "rho0")
        rho0 = parse_double(key, value);
    else if (key == "gamma1")
        gamma1 = parse_double(key, value);
    else if (key == "growth")
        growth = parse_double(key, value);
    else if (key == "tol")
        tol = parse_double(key, value);
    else if (key == "max_iter")
        max_iter = parse_int(key, value);
    else if (key == "tau1")
        tau1 = parse_double(key, value);
    else if (key == "tau1_scale")
        tau1_scale = parse_double(key, value);
    else if (key == "tau2")
        tau2 = parse_double(key, value);
    else if (key == "penalty_tau0")
        penalty_tau0 = parse_double(key, value);
    else if (key == "strict_prox")
        strict_prox = parse_bool(key, value);
    else if (key == "check_descent")
        check_descent = parse_bool(key, value);
    else if (key == "exec") {
        const std::string v = trim(value);
        require(v == "serial" || v == "parallel", "config key 'exec' must be serial or parallel");
        exec = v == "serial" ? Exec::serial : Exec::parallel;
    } else
        throw InvalidArgument("unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> SolverConfig::to_key_values() const {
    std::string b;
    for (std::size_t i = 0; i < beta.size(); ++i)
        b += (i ? "," : "") + format_double(beta[i]);
    return {
        {"gamma", format_double(gamma)},
        {"epsilon", format_double(epsilon)},
        {"beta", beta.empty() ? "uniform" : b},
        {"mu0", format_double(mu0)},
        {"rho0", format_double(rho0)},
        {"gamma1", format_double(gamma1)},
        {"growth", format_double(growth)},
        {"tol", format_double(tol)},
        {"max_iter", std::to_string(max_iter)},
        {"tau1", format_double(tau1)},
        {"tau1_scale", format_double(tau1_scale)},
        {"tau2", format_double(tau2)},
        {"penalty_tau0", format_double(penalty_tau0)},
        {"strict_prox", strict_prox ? "true" : "false"},
        {"check_descent", check_descent ? "true" : "false"},
        {"exec", exec == Exec::serial ? "serial" : "parallel"},
    };
}

void apply_config_text(SolverConfig &cfg, const std::string &text, const std::string &origin) {
    std::istringstream in(text);
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        try {
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const InvalidArgument &e) {
            throw InvalidArgument(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void apply_config_file(SolverConfig &cfg, const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str(), path.string());
}

} // namespace mlcp
