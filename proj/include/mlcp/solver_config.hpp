#pragma once

#include <mlcp/penalty.hpp>
#include <mlcp/tensor.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace mlcp {

/// Every scalar knob of the two solvers. Defaults are the shipped values.
///
/// The TRPCA quadratic penalty on T = L + E + N is `penalty_tau0`; the factor
/// by which all penalties grow after each sweep is `growth`.
struct SolverConfig {
    double gamma = 1e4;
    double epsilon = 0.01;
    std::vector<double> beta; ///< one weight per mode pair, lexicographic; empty = uniform
    double mu0 = 1e-3;
    double rho0 = 1e-2;
    double gamma1 = 1.1; ///< rho1 = gamma1 * mu
    double growth = 1.05;
    double tol = 1e-5;
    int max_iter = 500;
    double tau1 = 0;       ///< sparse-term weight; 0 selects tau1_scale / sqrt(max(I1,I2) * I3)
    double tau1_scale = 1; ///< multiplier on the automatic tau1
    double tau2 = 0;       ///< Gaussian-term weight; 0 selects 10 * tau1
    double penalty_tau0 = 1e-3;
    bool strict_prox = true; ///< exact prox; false selects the two-case threshold rule
    bool check_descent = false; ///< evaluate each proximal subproblem before/after its update
    Exec exec = Exec::parallel;

    /// Throws InvalidArgument when a value is out of range for an N-way problem.
    void validate(std::size_t ndim) const;

    std::vector<double> resolved_beta(std::size_t ndim) const;
    double resolved_tau1(const Shape &shape) const;
    double resolved_tau2(const Shape &shape) const;
    ShrinkRule shrink_rule() const { return strict_prox ? ShrinkRule::strict : ShrinkRule::threshold; }

    /// Sets one field from its textual form; unknown keys throw.
    void set(const std::string &key, const std::string &value);
    /// All fields as key/value text, in a fixed order (beta empty = "uniform").
    std::vector<std::pair<std::string, std::string>> to_key_values() const;
};

/// Applies a `key = value` file on top of `cfg`. Blank lines and `#` comments
/// are ignored; keys use the same names as to_key_values().
void apply_config_file(SolverConfig &cfg, const std::filesystem::path &path);
void apply_config_text(SolverConfig &cfg, const std::string &text, const std::string &origin = "<text>");

std::string format_double(double v);

} // namespace mlcp
