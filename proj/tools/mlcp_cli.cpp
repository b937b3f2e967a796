// mlcp: synthesize instances, run tensor completion / robust PCA, score results.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error, 3 solver stopped at
// max_iter without meeting tol (suppressed by --allow-nonconverged).
#include <mlcp/eval_data.hpp>
#include <mlcp/lrtc.hpp>
#include <mlcp/solver_config.hpp>
#include <mlcp/tensor_core.hpp>
#include <mlcp/trpca.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

#ifndef MLCP_VERSION
#define MLCP_VERSION "dev"
#endif

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_error(const char *kind, const std::string &msg) {
    std::cerr << ordered_json{{"error", kind}, {"message", msg}}.dump() << '\n';
}

mlcp::Shape parse_shape(const std::string &text) {
    mlcp::Shape shape;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &pos);
        } catch (const std::exception &) {
            pos = 0;
        }
        if (pos != item.size() || item.empty() || item[0] == '-')
            throw UsageError("--shape: not a list of positive integers: '" + text + "'");
        shape.push_back(v);
    }
    if (shape.size() < 2)
        throw UsageError("--shape needs at least two extents");
    (void)mlcp::shape_numel(shape);
    return shape;
}

std::pair<double, double> parse_range(const std::string &text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw UsageError("--noniid expects lo,hi");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception &) {
        throw UsageError("--noniid expects two numbers, got '" + text + "'");
    }
}

// Solver flags, applied over defaults and the optional config file.
struct SolverFlags {
    std::string config;
    double gamma = 0, epsilon = 0, mu0 = 0, rho0 = 0, gamma1 = 0, growth = 0, tol = 0;
    double tau1 = 0, tau1_scale = 0, tau2 = 0, penalty_tau = 0;
    int max_iter = 0;
    std::string beta, exec, prox_rule;
    bool strict = false, check_descent = false;
    std::vector<std::pair<CLI::Option *, std::string>> numeric;
    CLI::Option *beta_opt = nullptr, *exec_opt = nullptr, *rule_opt = nullptr, *strict_opt = nullptr, *check_opt = nullptr;

    void attach(CLI::App &app, bool robust) {
        app.add_option("--config", config, "key = value config file")->check(CLI::ExistingFile);
        auto num = [&](const char *flag, double &dst, const char *key, const char *help) {
            numeric.emplace_back(app.add_option(flag, dst, help), key);
        };
        num("--gamma", gamma, "gamma", "concavity of the penalty");
        num("--epsilon", epsilon, "epsilon", "log offset");
        num("--mu0", mu0, "mu0", "initial coupling penalty");
        num("--rho0", rho0, "rho0", "initial proximal weight");
        num("--gamma1", gamma1, "gamma1", "linearization factor, rho1 = gamma1*mu");
        num("--growth", growth, "growth", "penalty growth factor per sweep");
        num("--tol", tol, "tol", "stop when the sup-norm change falls below this");
        numeric.emplace_back(app.add_option("--max-iter", max_iter, "sweep limit"), "max_iter");
        beta_opt = app.add_option("--beta", beta, "mode-pair weights w12,w13,...");
        exec_opt = app.add_option("--exec", exec, "serial or parallel kernels")
                       ->check(CLI::IsMember({"serial", "parallel"}));
        rule_opt = app.add_option("--prox-rule", prox_rule, "strict (exact minimizer) or threshold (two-case rule)")
                       ->check(CLI::IsMember({"strict", "threshold"}));
        strict_opt = app.add_flag("--strict-prox", strict, "same as --prox-rule strict")->excludes(rule_opt);
        check_opt = app.add_flag("--check-descent", check_descent, "count proximal subproblem increases");
        if (robust) {
            num("--tau1", tau1, "tau1", "sparse-term weight");
            num("--tau1-scale", tau1_scale, "tau1_scale", "scale of the automatic tau1");
            num("--tau2", tau2, "tau2", "Gaussian-term weight");
            num("--penalty-tau", penalty_tau, "penalty_tau0", "initial penalty on T = L + E + N");
        }
    }

    mlcp::SolverConfig resolve() const {
        mlcp::SolverConfig cfg;
        if (!config.empty())
            mlcp::apply_config_file(cfg, config);
        for (const auto &[opt, key] : numeric)
            if (opt->count())
                cfg.set(key, opt->as<std::string>());
        if (beta_opt->count())
            cfg.set("beta", beta);
        if (exec_opt->count())
            cfg.set("exec", exec);
        if (rule_opt->count())
            cfg.strict_prox = prox_rule == "strict";
        if (strict_opt->count())
            cfg.strict_prox = true;
        if (check_opt->count())
            cfg.check_descent = true;
        return cfg;
    }
};

ordered_json config_json(const mlcp::SolverConfig &cfg) {
    ordered_json j = ordered_json::object();
    for (const auto &[k, v] : cfg.to_key_values())
        j[k] = v;
    return j;
}

// Per-sweep prox decisions and descent checks, so a run can be audited.
void add_run_details(ordered_json &m, const mlcp::RecoveryReport &report, const mlcp::SolverConfig &cfg) {
    std::vector<std::size_t> overrides;
    for (const auto &row : report.trace)
        overrides.push_back(row.strict_overrides);
    m["prox_rule"] = cfg.strict_prox ? "strict" : "threshold";
    m["strict_overrides_per_sweep"] = overrides;
    if (cfg.check_descent) {
        m["subproblem_checks"] = report.subproblem_checks;
        m["subproblem_violations"] = report.subproblem_violations;
    }
    m["notes"] = report.notes;
}

void write_manifest(const fs::path &path, ordered_json manifest) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    os << manifest.dump(2) << '\n';
}

ordered_json manifest_base(const std::string &command, double seconds) {
    return ordered_json{{"command", command}, {"version", MLCP_VERSION}, {"wall_seconds", seconds}};
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    os << text;
}

double default_peak(const mlcp::DenseTensor &ref) {
    const double p = mlcp::inf_norm(ref);
    return p > 0 ? p : 1.0;
}

int solver_exit(const mlcp::RecoveryReport &report, const mlcp::SolverConfig &cfg, bool allow) {
    for (const auto &note : report.warnings)
        std::cerr << "warning: " << note << '\n';
    if (report.converged || cfg.max_iter == 0 || allow)
        return 0;
    std::cerr << ordered_json{{"error", "not_converged"},
                              {"message", "stopped after " + std::to_string(report.iterations) +
                                              " sweeps without meeting tol"}}
                     .dump()
              << '\n';
    return kExitNotConverged;
}

std::string csv_of(const mlcp::RecoveryReport &r, bool robust) {
    std::ostringstream os;
    mlcp::write_trace_csv(os, r, robust);
    return os.str();
}

std::string metrics_of(const std::vector<mlcp::MetricRow> &rows) {
    std::ostringstream os;
    mlcp::write_metrics_csv(os, rows);
    return os.str();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Minimax logarithmic concave penalty: tensor completion and robust PCA"};
    app.set_version_flag("--version", MLCP_VERSION);
    app.require_subcommand(1);

    // synth
    auto *synth = app.add_subcommand("synth", "generate a low tubal-rank tensor");
    std::string synth_shape, synth_out;
    std::size_t synth_rank = 0;
    std::uint64_t synth_seed = 0;
    bool synth_unit = false;
    synth->add_option("--shape", synth_shape, "extents, e.g. 30,30,20")->required();
    synth->add_option("--rank", synth_rank, "tubal rank of the factors")->required();
    synth->add_option("--seed", synth_seed, "RNG seed");
    synth->add_option("--out", synth_out, "output tensor file")->required();
    synth->add_flag("--unit-range", synth_unit, "rescale the result onto [0, 1]");

    // complete
    auto *complete = app.add_subcommand("complete", "low-rank tensor completion");
    std::string c_input, c_mask, c_truth, c_out;
    double c_sr = 0, c_peak = 0, c_ratio = 1;
    std::uint64_t c_seed = 0;
    bool c_allow = false;
    SolverFlags c_flags;
    complete->add_option("--input", c_input, "tensor whose observed entries are used")->required()->check(CLI::ExistingFile);
    auto *c_mask_opt = complete->add_option("--mask", c_mask, "mask tensor file (nonzero = observed)")->check(CLI::ExistingFile);
    auto *c_sr_opt = complete->add_option("--sr", c_sr, "sampling rate for a random mask")->check(CLI::Range(0.0, 1.0));
    c_mask_opt->excludes(c_sr_opt);
    complete->add_option("--seed", c_seed, "mask seed");
    complete->add_option("--truth", c_truth, "ground truth for metrics")->check(CLI::ExistingFile);
    complete->add_option("--out", c_out, "output directory")->required();
    auto *c_peak_opt = complete->add_option("--peak", c_peak, "PSNR/SSIM peak (default max |truth|)");
    complete->add_option("--ratio", c_ratio, "ERGAS resolution ratio");
    complete->add_flag("--allow-nonconverged", c_allow, "exit 0 even when max_iter is reached");
    c_flags.attach(*complete, false);

    // denoise
    auto *denoise = app.add_subcommand("denoise", "robust PCA: T = L + E + N");
    std::string d_input, d_truth, d_out, d_noniid;
    double d_sp = 0, d_gauss = 0, d_peak = 0, d_ratio = 1;
    std::uint64_t d_seed = 0;
    bool d_allow = false;
    SolverFlags d_flags;
    denoise->add_option("--input", d_input, "observed tensor (clean if noise flags are given)")->required()->check(CLI::ExistingFile);
    auto *d_sp_opt = denoise->add_option("--sp", d_sp, "salt-and-pepper fraction to inject, in [0, 1)");
    auto *d_gauss_opt = denoise->add_option("--gaussian", d_gauss, "Gaussian noise std to inject");
    auto *d_noniid_opt = denoise->add_option("--noniid", d_noniid, "per-slice salt-and-pepper range lo,hi");
    denoise->add_option("--seed", d_seed, "noise seed");
    denoise->add_option("--truth", d_truth, "ground truth for metrics")->check(CLI::ExistingFile);
    denoise->add_option("--out", d_out, "output directory")->required();
    auto *d_peak_opt = denoise->add_option("--peak", d_peak, "PSNR/SSIM peak (default max |truth|)");
    denoise->add_option("--ratio", d_ratio, "ERGAS resolution ratio");
    denoise->add_flag("--allow-nonconverged", d_allow, "exit 0 even when max_iter is reached");
    d_flags.attach(*denoise, true);

    // eval
    auto *eval = app.add_subcommand("eval", "PSNR / SSIM / ERGAS of a tensor against a reference");
    std::string e_input, e_ref, e_out, e_method = "input", e_setting = "-";
    double e_peak = 0, e_ratio = 1;
    eval->add_option("--input", e_input, "estimate")->required()->check(CLI::ExistingFile);
    eval->add_option("--ref", e_ref, "reference")->required()->check(CLI::ExistingFile);
    auto *e_peak_opt = eval->add_option("--peak", e_peak, "peak value (default max |ref|)");
    eval->add_option("--ratio", e_ratio, "ERGAS resolution ratio");
    eval->add_option("--method", e_method, "label for the method column");
    eval->add_option("--setting", e_setting, "label for the sr_or_noise column");
    eval->add_option("--out", e_out, "also write the CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        print_error("usage", e.what());
        return kExitUsage;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

    try {
        if (*synth) {
            const mlcp::Shape shape = parse_shape(synth_shape);
            mlcp::DenseTensor t = mlcp::gen_lowrank(shape, synth_rank, synth_seed);
            if (synth_unit)
                t = mlcp::normalize_unit(t);
            mlcp::save_tensor(synth_out, t);
            ordered_json m = manifest_base("synth", elapsed());
            m["shape"] = shape;
            m["rank"] = synth_rank;
            m["seed"] = synth_seed;
            m["unit_range"] = synth_unit;
            m["outputs"] = {synth_out};
            write_manifest(synth_out + ".manifest.json", m);
            std::cout << "wrote " << synth_out << " shape " << mlcp::shape_to_string(shape) << '\n';
            return 0;
        }

        if (*complete) {
            mlcp::SolverConfig cfg = c_flags.resolve();
            const mlcp::DenseTensor input = mlcp::load_tensor(c_input);
            if (!c_mask_opt->count() && !c_sr_opt->count())
                throw UsageError("complete needs --mask or --sr");
            if (c_sr_opt->count() && !(c_sr > 0))
                throw UsageError("--sr must be in (0, 1]");
            const mlcp::SamplingMask mask = c_mask_opt->count()
                                                ? mlcp::SamplingMask::from_tensor(mlcp::load_tensor(c_mask))
                                                : mlcp::gen_mask(input.shape(), c_sr, c_seed);
            fs::create_directories(c_out);
            const fs::path dir(c_out);
            mlcp::RecoveryReport report = mlcp::lrtc_solve(input, mask, cfg);

            std::vector<std::string> outputs{"recovered.tns", "trace.csv"};
            mlcp::save_tensor(dir / "recovered.tns", report.recovered);
            write_text(dir / "trace.csv", csv_of(report, false));
            if (!c_mask_opt->count()) {
                mlcp::save_tensor(dir / "mask.tns", mask.as_tensor());
                outputs.push_back("mask.tns");
            }
            ordered_json m = manifest_base("complete", 0);
            if (!c_truth.empty()) {
                const mlcp::DenseTensor truth = mlcp::load_tensor(c_truth);
                mlcp::require_same_shape(report.recovered, truth, "truth");
                const double peak = c_peak_opt->count() ? c_peak : default_peak(truth);
                const auto row = mlcp::evaluate(report.recovered, truth, peak, c_ratio, "EMLCPTC",
                                                mlcp::format_double(mask.sampling_rate));
                write_text(dir / "metrics.csv", metrics_of({row}));
                outputs.push_back("metrics.csv");
                m["peak"] = peak;
                m["ratio"] = c_ratio;
                m["relative_error"] =
                    mlcp::frobenius_norm(report.recovered - truth) / mlcp::frobenius_norm(truth);
                std::cout << metrics_of({row});
            }
            m["config"] = config_json(cfg);
            m["inputs"] = {{"input", c_input}, {"mask", c_mask}, {"truth", c_truth}, {"config", c_flags.config}};
            m["sampling_rate"] = mask.sampling_rate;
            m["observed"] = mask.count();
            m["seed"] = c_seed;
            m["outputs"] = outputs;
            m["iterations"] = report.iterations;
            m["converged"] = report.converged;
            add_run_details(m, report, cfg);
            m["wall_seconds"] = elapsed();
            write_manifest(dir / "manifest.json", m);
            std::cout << "sweeps " << report.iterations << (report.converged ? " (converged)" : " (max_iter reached)")
                      << '\n';
            return solver_exit(report, cfg, c_allow);
        }

        if (*denoise) {
            mlcp::SolverConfig cfg = d_flags.resolve();
            const mlcp::DenseTensor input = mlcp::load_tensor(d_input);
            const bool inject = d_sp_opt->count() || d_gauss_opt->count() || d_noniid_opt->count();
            mlcp::NoiseSpec spec;
            spec.sp_fraction = d_sp;
            spec.gaussian_sigma = d_gauss;
            spec.seed = d_seed;
            if (d_noniid_opt->count())
                spec.noniid = parse_range(d_noniid);
            if (inject) {
                try {
                    spec.validate();
                } catch (const mlcp::InvalidArgument &e) {
                    throw UsageError(e.what());
                }
            }
            const mlcp::DenseTensor observed = inject ? mlcp::add_mixed_noise(input, spec) : input;
            fs::create_directories(d_out);
            const fs::path dir(d_out);
            mlcp::RecoveryReport report = mlcp::trpca_solve(observed, cfg);

            std::vector<std::string> outputs{"L.tns", "E.tns", "N.tns", "trace.csv"};
            mlcp::save_tensor(dir / "L.tns", report.recovered);
            mlcp::save_tensor(dir / "E.tns", report.sparse);
            mlcp::save_tensor(dir / "N.tns", report.noise);
            write_text(dir / "trace.csv", csv_of(report, true));
            if (inject) {
                mlcp::save_tensor(dir / "noisy.tns", observed);
                outputs.push_back("noisy.tns");
            }
            ordered_json m = manifest_base("denoise", 0);
            const std::string truth_path = !d_truth.empty() ? d_truth : (inject ? d_input : "");
            if (!truth_path.empty()) {
                const mlcp::DenseTensor truth = mlcp::load_tensor(truth_path);
                mlcp::require_same_shape(report.recovered, truth, "truth");
                const double peak = d_peak_opt->count() ? d_peak : default_peak(truth);
                std::string setting = "sigma=" + mlcp::format_double(spec.sp_fraction) +
                                      " nu=" + mlcp::format_double(spec.gaussian_sigma);
                if (spec.noniid)
                    setting = "sigma~U(" + mlcp::format_double(spec.noniid->first) + "-" +
                              mlcp::format_double(spec.noniid->second) + ") nu=" +
                              mlcp::format_double(spec.gaussian_sigma);
                const auto row = mlcp::evaluate(report.recovered, truth, peak, d_ratio, "EMLCPTRPCA", setting);
                write_text(dir / "metrics.csv", metrics_of({row}));
                outputs.push_back("metrics.csv");
                m["peak"] = peak;
                m["ratio"] = d_ratio;
                m["relative_error"] =
                    mlcp::frobenius_norm(report.recovered - truth) / mlcp::frobenius_norm(truth);
                std::cout << metrics_of({row});
            }
            m["config"] = config_json(cfg);
            m["resolved_tau1"] = report.metrics.at("tau1");
            m["resolved_tau2"] = report.metrics.at("tau2");
            m["inputs"] = {{"input", d_input}, {"truth", d_truth}, {"config", d_flags.config}};
            m["noise"] = {{"sp", spec.sp_fraction}, {"gaussian", spec.gaussian_sigma}, {"noniid", d_noniid},
                          {"injected", inject}};
            m["seed"] = d_seed;
            m["outputs"] = outputs;
            m["iterations"] = report.iterations;
            m["converged"] = report.converged;
            add_run_details(m, report, cfg);
            m["wall_seconds"] = elapsed();
            write_manifest(dir / "manifest.json", m);
            std::cout << "sweeps " << report.iterations << (report.converged ? " (converged)" : " (max_iter reached)")
                      << '\n';
            return solver_exit(report, cfg, d_allow);
        }

        if (*eval) {
            const mlcp::DenseTensor x = mlcp::load_tensor(e_input);
            const mlcp::DenseTensor ref = mlcp::load_tensor(e_ref);
            mlcp::require_same_shape(x, ref, "eval");
            const double peak = e_peak_opt->count() ? e_peak : default_peak(ref);
            const std::string csv = metrics_of({mlcp::evaluate(x, ref, peak, e_ratio, e_method, e_setting)});
            std::cout << csv;
            if (!e_out.empty()) {
                write_text(e_out, csv);
                ordered_json m = manifest_base("eval", elapsed());
                m["inputs"] = {{"input", e_input}, {"ref", e_ref}};
                m["peak"] = peak;
                m["ratio"] = e_ratio;
                m["outputs"] = {e_out};
                write_manifest(e_out + ".manifest.json", m);
            }
            return 0;
        }
    } catch (const UsageError &e) {
        print_error("usage", e.what());
        return kExitUsage;
    } catch (const mlcp::InvalidArgument &e) {
        print_error("invalid_argument", e.what());
        return kExitRuntime;
    } catch (const mlcp::FormatError &e) {
        print_error("format", e.what());
        return kExitRuntime;
    } catch (const std::exception &e) {
        print_error("runtime", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
