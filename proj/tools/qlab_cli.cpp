#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlab/acceptance.hpp"
#include "qlab/catalog.hpp"
#include "qlab/fieldnum.hpp"
#include "qlab/report.hpp"

namespace {

struct CommonOpts {
    std::uint64_t seed = 20260814;
    double tol = -1.0; // < 0 keeps the per-quantity built-in tolerances
    std::string out_dir;
    std::vector<std::string> params;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_tol = true) {
    cmd->add_option("--seed", opts.seed, "root random seed; every stochastic sub-task derives "
                                         "its own stream from (seed, task label)")
        ->capture_default_str();
    if (with_tol)
        cmd->add_option("--tol", opts.tol,
                        "replace every reported quantity's pass tolerance with this value");
    cmd->add_option("--out", opts.out_dir,
                    "report output directory (default: $QLAB_OUT_DIR, else ./reports)");
    cmd->add_option("--param", opts.params, "entry parameter as key=value (repeatable)");
}

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("QLAB_OUT_DIR"); env != nullptr && *env != '\0')
        return env;
    return "reports";
}

std::map<std::string, std::string> param_map(const std::vector<std::string>& kvs) {
    std::map<std::string, std::string> out;
    for (const std::string& kv : kvs) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw qlab::catalog::config_error("--param expects key=value, got '" + kv + "'");
        out[kv.substr(0, eq)] = kv.substr(eq + 1); // repeated keys: last one wins
    }
    return out;
}

void apply_tol_override(qlab::scenarios::ScenarioReport& report, double tol) {
    if (tol < 0.0) return;
    for (auto& q : report.quantities) {
        q.tolerance = tol;
        q.pass = std::abs(q.predicted - q.expected) <= tol;
    }
}

int emit(qlab::scenarios::ScenarioReport report, const CommonOpts& opts) {
    apply_tol_override(report, opts.tol);
    const auto paths = qlab::report::write_files(report, resolve_out_dir(opts.out_dir));
    std::cout << qlab::report::to_text(report);
    for (const auto& path : paths) std::cout << "wrote " << path.string() << "\n";
    return report.all_pass() ? 0 : 1;
}

int run_sweep(const CommonOpts& opts) {
    using qlab::catalog::ParamSpec;
    using qlab::catalog::ParamType;
    const std::vector<ParamSpec> schema = {
        {"t_min", ParamType::real, "0.05", "smallest time separation"},
        {"t_max", ParamType::real, "0.95", "largest time separation"},
        {"n_t", ParamType::integer, "10", "time-axis grid points"},
        {"r_min", ParamType::real, "1.2", "smallest spatial separation"},
        {"r_max", ParamType::real, "2.4", "largest spatial separation"},
        {"n_r", ParamType::integer, "10", "space-axis grid points"},
        {"masses", ParamType::text, "0.5,1,2", "comma-separated mass values"},
        {"eps0", ParamType::real, "0.01", "largest regulator value of the ladder"},
        {"depth", ParamType::integer, "3", "regulator-ladder depth (>= 2)"},
    };
    const qlab::catalog::Params p(schema, param_map(opts.params));

    const int n_t = p.integer("n_t");
    const int n_r = p.integer("n_r");
    if (n_t < 1 || n_t > 1000) throw qlab::catalog::config_error("parameter 'n_t': need 1..1000");
    if (n_r < 1 || n_r > 1000) throw qlab::catalog::config_error("parameter 'n_r': need 1..1000");
    const double t_min = p.real("t_min");
    const double t_max = p.real("t_max");
    const double r_min = p.real("r_min");
    const double r_max = p.real("r_max");
    if (r_min <= std::max(std::abs(t_min), std::abs(t_max)))
        throw qlab::catalog::config_error(
            "parameters 'r_min'/'t_*': grid must be entirely spacelike (r > |t|)");
    if (r_max < r_min || t_max < t_min)
        throw qlab::catalog::config_error("parameter ranges: max must be >= min");

    std::vector<double> masses;
    {
        std::string text = p.text("masses");
        std::string current;
        auto flush = [&] {
            if (current.empty())
                throw qlab::catalog::config_error("parameter 'masses': empty element");
            std::size_t pos = 0;
            const double m = std::stod(current, &pos);
            if (pos != current.size() || m < 0.0)
                throw qlab::catalog::config_error("parameter 'masses': bad value '" + current +
                                                  "'");
            masses.push_back(m);
            current.clear();
        };
        for (char c : text) {
            if (c == ',')
                flush();
            else
                current.push_back(c);
        }
        flush();
    }

    auto linspace = [](double lo, double hi, int n) {
        std::vector<double> out;
        for (int i = 0; i < n; ++i)
            out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
        return out;
    };
    qlab::fieldnum::QuadratureParams q;
    q.eps0 = p.real("eps0");
    q.ladder_depth = p.integer("depth");
    if (q.eps0 <= 0.0) throw qlab::catalog::config_error("parameter 'eps0': must be > 0");
    if (q.ladder_depth < 2 || q.ladder_depth > 8)
        throw qlab::catalog::config_error("parameter 'depth': need 2..8");

    const auto rows = qlab::fieldnum::sweep_spacelike_grid(
        masses, linspace(t_min, t_max, n_t), linspace(r_min, r_max, n_r), q);
    const auto paths =
        qlab::report::write_sweep_files(rows, "delta_plus_sweep", resolve_out_dir(opts.out_dir));
    std::cout << qlab::report::sweep_to_text(rows);
    for (const auto& path : paths) std::cout << "wrote " << path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale quantum measurement and relativity checks"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "TOML config file; sections name subcommands ([run]); command-line flags "
                   "override file values");

    CommonOpts opts;
    std::string scenario;

    CLI::App* run_cmd = app.add_subcommand("run", "run one catalog entry and write its report");
    run_cmd->add_option("scenario", scenario, "catalog entry name (see `list`)")->required();
    add_common(run_cmd, opts);

    CLI::App* list_cmd =
        app.add_subcommand("list", "print the catalog with parameter schemas and defaults");

    CLI::App* suite_cmd = app.add_subcommand(
        "suite", "run the full acceptance suite and write its aggregated report");
    add_common(suite_cmd, opts, /*with_tol=*/false);

    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep-delta-plus",
        "tabulate the two-point-function commutator combinations over a spacelike grid");
    add_common(sweep_cmd, opts, /*with_tol=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // help/version exit cleanly; anything else is a usage error
    }

    try {
        if (list_cmd->parsed()) {
            std::cout << qlab::catalog::listing();
            return 0;
        }
        if (run_cmd->parsed()) {
            return emit(qlab::catalog::run_by_name(scenario, param_map(opts.params), opts.seed),
                        opts);
        }
        if (suite_cmd->parsed()) {
            if (!opts.params.empty())
                throw qlab::catalog::config_error("suite takes no --param values");
            const auto results = qlab::acceptance::run_all(opts.seed);
            std::cout << qlab::acceptance::summary_lines(results);
            auto report = qlab::acceptance::as_report(results);
            qlab::report::write_files(report, resolve_out_dir(opts.out_dir));
            return qlab::acceptance::all_pass(results) ? 0 : 1;
        }
        if (sweep_cmd->parsed()) return run_sweep(opts);
    } catch (const qlab::catalog::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n\ncatalog:\n"
                  << qlab::catalog::listing();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
