// Experiment CLI: seeded runs of the spectral-density comparison, the
// ground/Bell synchronization figures, the error sweep, the full protocol,
// and the two self-check gates. Configuration is a single JSON document;
// individual fields can be overridden with --set key=value.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qlsync/experiments.hpp"
#include "qlsync/io.hpp"

using namespace qlsync;

namespace {

ExperimentConfig load_config(const std::string& config_path,
                             const std::vector<std::string>& overrides,
                             ExperimentConfig fallback) {
    ExperimentConfig cfg = fallback;
    if (!config_path.empty()) cfg = ExperimentConfig::from_json_file(config_path);
    for (const std::string& kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got: " + kv);
        cfg.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.resource.validate();
    cfg.params.validate();
    return cfg;
}

ExperimentConfig desk_default() {
    // small seeded system usable without any config file
    ExperimentConfig cfg;
    cfg.resource.n_g = 6;
    cfg.resource.n_ql = 2;
    cfg.resource.k = {3, 3};
    cfg.resource.l = {2, 2};
    cfg.resource.seed = 1;
    cfg.seed = 1;
    return cfg;
}

int print_error(const std::exception& e) {
    nlohmann::json err;
    err["error_type"] = "runtime";
    err["message"] = e.what();
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QL network resources on synchronizing oscillator dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    int threads = 0;
    app.add_option("--config", config_path, "JSON experiment config")->capture_default_str();
    app.add_option("--set", overrides, "override a config field, key=value (repeatable)");
    app.add_option("--output-dir", output_dir, "override output directory");
    app.add_option("--threads", threads, "thread count (0 = runtime default)");

    auto* run = app.add_subcommand("run", "run the configured experiment");
    auto* validate =
        app.add_subcommand("validate", "report spectral isolation of one sampled resource");
    auto* oracle = app.add_subcommand(
        "oracle-check", "spectral vs direct-integration propagation gate");
    auto* partial = app.add_subcommand(
        "partial-eigs-check", "iterative top-k eigensolver vs full diagonalization");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig fallback = desk_default();
        if (oracle->parsed()) fallback.experiment = ExperimentKind::oracle_check;
        if (partial->parsed()) {
            fallback.experiment = ExperimentKind::partial_eigs_check;
            fallback.resource.n_g = 256;
            fallback.resource.n_ql = 1;
            fallback.resource.k = {12};
            fallback.resource.l = {20};
        }
        ExperimentConfig cfg = load_config(config_path, overrides, fallback);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (threads > 0) cfg.threads = threads;

        if (run->parsed()) {
            const nlohmann::json manifest = run_experiment(cfg);
            std::printf("%s\n", manifest["metrics"].dump(2).c_str());
            std::printf("outputs written to %s\n", cfg.output_dir.c_str());
            return 0;
        }
        if (validate->parsed()) {
            const nlohmann::json report = validate_resource(cfg);
            std::printf("%s\n", report.dump(2).c_str());
            if (!report["isolated"].get<bool>())
                std::printf("warning: spectral gap %.6g below threshold %.6g\n",
                            report["spectral_gap"].get<double>(),
                            report["isolation_threshold"].get<double>());
            return 0;
        }
        if (oracle->parsed()) {
            cfg.experiment = ExperimentKind::oracle_check;
            const OracleReport r = oracle_check(cfg);
            std::printf("oracle-check: %s (max deviation %.3e at t=%.3f, tolerance 1e-6)\n",
                        r.pass ? "PASS" : "FAIL", r.max_deviation, r.worst_time);
            return r.pass ? 0 : 1;
        }
        if (partial->parsed()) {
            cfg.experiment = ExperimentKind::partial_eigs_check;
            const PartialEigsReport r = partial_eigs_check(cfg);
            std::printf(
                "partial-eigs-check: %s (max eigenvalue diff %.3e, subspace angle %.3e)\n",
                r.pass ? "PASS" : "FAIL", r.max_eigenvalue_diff, r.subspace_angle_rad);
            return r.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        return print_error(e);
    }
    return 2;
}
