#pragma once

// Experiment runner: seeded, config-driven reproduction of the spectral
// density comparison, the ground/Bell synchronization runs, the error sweep,
// the end-to-end protocol, and the two self-check gates (spectral-vs-direct
// oracle, partial eigensolver). Every run emits CSVs plus a JSON manifest
// with a config echo, content hash, wall clock, and summary metrics.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlsync/dynamics.hpp"
#include "qlsync/emergent.hpp"
#include "qlsync/netgraph.hpp"
#include "qlsync/qlgates.hpp"

namespace qlsync {

enum class ExperimentKind {
    spectra_fig2,
    ground_fig3,
    bell_fig3,
    error_fig4,
    protocol_run,
    oracle_check,
    partial_eigs_check,
};

std::string experiment_name(ExperimentKind k);
ExperimentKind experiment_from_name(const std::string& name);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::ground_fig3;
    ResourceSpec resource;
    ModelParams params;
    std::vector<GateOp> circuit;  // protocol_run only; bell_fig3 implies the Bell circuit

    // ensemble (spectra_fig2)
    int ensemble_n_samp = 100;
    int bins = 60;

    // time grid / integrator
    double t_end = 20.0;
    int time_samples = 400;
    double dt = 1e-3;

    // sweep (error_fig4)
    std::vector<int> sweep_l_values{2, 4, 8, 12};
    std::vector<double> sweep_t_values{5.0, 10.0, 15.0, 20.0};
    int sweep_n_samp = 100;
    bool sweep_resample_graphs = true;

    // partial_eigs_check
    int k_top = 4;

    // validate
    double isolation_gap = 1.0;

    std::string output_dir = "out";
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = leave runtime default
    std::uint64_t memory_cap_bytes = kDefaultMemoryCapBytes;
    bool emit_binary = false;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_json_file(const std::string& path);

    // dotted-path override, e.g. ("resource.n-g", "16") or ("seed", "7")
    void apply_override(const std::string& key, const std::string& value);
};

// Executes the configured experiment; writes outputs + manifest.json under
// output_dir and returns the manifest. Throws on module errors after writing
// a machine-readable error.json.
nlohmann::json run_experiment(const ExperimentConfig& config);

// Report-only spectral isolation diagnostic (one sampled resource).
nlohmann::json validate_resource(const ExperimentConfig& config);

struct OracleReport {
    bool pass = false;
    double max_deviation = 0.0;
    double worst_time = 0.0;
};
// Spectral vs direct RK4 on a seeded system; pass iff deviation <= 1e-6.
OracleReport oracle_check(const ExperimentConfig& config);

struct PartialEigsReport {
    bool pass = false;
    double max_eigenvalue_diff = 0.0;
    double subspace_angle_rad = 0.0;
};
PartialEigsReport partial_eigs_check(const ExperimentConfig& config);

}  // namespace qlsync
