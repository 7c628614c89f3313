#include "qlsync/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "qlsync/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qlsync {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::spectra_fig2: return "spectra_fig2";
        case ExperimentKind::ground_fig3: return "ground_fig3";
        case ExperimentKind::bell_fig3: return "bell_fig3";
        case ExperimentKind::error_fig4: return "error_fig4";
        case ExperimentKind::protocol_run: return "protocol_run";
        case ExperimentKind::oracle_check: return "oracle_check";
        case ExperimentKind::partial_eigs_check: return "partial_eigs_check";
    }
    return "?";
}

ExperimentKind experiment_from_name(const std::string& name) {
    for (ExperimentKind k :
         {ExperimentKind::spectra_fig2, ExperimentKind::ground_fig3,
          ExperimentKind::bell_fig3, ExperimentKind::error_fig4,
          ExperimentKind::protocol_run, ExperimentKind::oracle_check,
          ExperimentKind::partial_eigs_check})
        if (experiment_name(k) == name) return k;
    throw ConfigError("unknown experiment: " + name);
}

json ExperimentConfig::to_json() const {
    json j;
    j["experiment"] = experiment_name(experiment);
    j["resource"] = json::parse(resource.to_json_string());
    j["params"] = {{"omega_bar", params.omega_bar}, {"coupling", params.coupling}};
    json circ = json::array();
    for (const GateOp& op : circuit)
        circ.push_back({{"gate", gate_name(op.kind)}, {"targets", op.targets}});
    j["circuit"] = circ;
    j["ensemble"] = {{"n_samp", ensemble_n_samp}, {"bins", bins}};
    j["time"] = {{"t_end", t_end}, {"n_samples", time_samples}, {"dt", dt}};
    j["sweep"] = {{"l_values", sweep_l_values},
                  {"t_values", sweep_t_values},
                  {"n_samp", sweep_n_samp},
                  {"resample_graphs", sweep_resample_graphs}};
    j["partial"] = {{"k_top", k_top}};
    j["validate"] = {{"isolation_gap", isolation_gap}};
    j["output_dir"] = output_dir;
    j["seed"] = seed;
    j["threads"] = threads;
    j["memory_cap_bytes"] = memory_cap_bytes;
    j["emit_binary"] = emit_binary;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    try {
        if (j.contains("experiment"))
            c.experiment = experiment_from_name(j.at("experiment").get<std::string>());
        if (!j.contains("resource")) throw ConfigError("config: missing resource");
        c.resource = ResourceSpec::from_json_string(j.at("resource").dump());
        if (j.contains("params")) {
            const json& p = j.at("params");
            if (p.contains("omega") || p.contains("omega_j") || p.contains("omegas"))
                throw ConfigError(
                    "config: heterogeneous oscillator frequencies are not supported; "
                    "use the scalar omega_bar");
            c.params.omega_bar = p.value("omega_bar", c.params.omega_bar);
            c.params.coupling = p.value("coupling", c.params.coupling);
        }
        c.params.validate();
        if (j.contains("circuit")) {
            for (const json& g : j.at("circuit")) {
                GateOp op;
                op.kind = gate_from_name(g.at("gate").get<std::string>());
                op.targets = g.at("targets").get<std::vector<int>>();
                op.validate(c.resource.n_ql);
                c.circuit.push_back(op);
            }
        }
        if (j.contains("ensemble")) {
            c.ensemble_n_samp = j.at("ensemble").value("n_samp", c.ensemble_n_samp);
            c.bins = j.at("ensemble").value("bins", c.bins);
        }
        if (j.contains("time")) {
            c.t_end = j.at("time").value("t_end", c.t_end);
            c.time_samples = j.at("time").value("n_samples", c.time_samples);
            c.dt = j.at("time").value("dt", c.dt);
        }
        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            if (s.contains("l_values")) c.sweep_l_values = s.at("l_values").get<std::vector<int>>();
            if (s.contains("t_values"))
                c.sweep_t_values = s.at("t_values").get<std::vector<double>>();
            c.sweep_n_samp = s.value("n_samp", c.sweep_n_samp);
            c.sweep_resample_graphs = s.value("resample_graphs", c.sweep_resample_graphs);
        }
        if (j.contains("partial")) c.k_top = j.at("partial").value("k_top", c.k_top);
        if (j.contains("validate"))
            c.isolation_gap = j.at("validate").value("isolation_gap", c.isolation_gap);
        c.output_dir = j.value("output_dir", c.output_dir);
        c.seed = j.value("seed", c.seed);
        c.threads = j.value("threads", c.threads);
        c.memory_cap_bytes = j.value("memory_cap_bytes", c.memory_cap_bytes);
        c.emit_binary = j.value("emit_binary", c.emit_binary);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    return from_json(json::parse(read_text_file(path)));
}

void ExperimentConfig::apply_override(const std::string& key, const std::string& value) {
    auto as_int = [&] { return std::stoi(value); };
    auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
    auto as_dbl = [&] { return std::stod(value); };
    std::string k = key;
    std::replace(k.begin(), k.end(), '-', '_');

    if (k == "experiment") experiment = experiment_from_name(value);
    else if (k == "resource.n_g") resource.n_g = as_int();
    else if (k == "resource.n_ql") resource.n_ql = as_int();
    else if (k == "resource.seed") resource.seed = as_u64();
    else if (k == "resource.k") resource.k.assign(std::max(resource.n_ql, 1), as_int());
    else if (k == "resource.l") resource.l.assign(std::max(resource.n_ql, 1), as_int());
    else if (k == "params.omega_bar") params.omega_bar = as_dbl();
    else if (k == "params.coupling") params.coupling = as_dbl();
    else if (k == "ensemble.n_samp") ensemble_n_samp = as_int();
    else if (k == "ensemble.bins") bins = as_int();
    else if (k == "time.t_end") t_end = as_dbl();
    else if (k == "time.n_samples") time_samples = as_int();
    else if (k == "time.dt") dt = as_dbl();
    else if (k == "sweep.n_samp") sweep_n_samp = as_int();
    else if (k == "partial.k_top") k_top = as_int();
    else if (k == "validate.isolation_gap") isolation_gap = as_dbl();
    else if (k == "output_dir") output_dir = value;
    else if (k == "seed") seed = as_u64();
    else if (k == "threads") threads = as_int();
    else if (k == "memory_cap_bytes") memory_cap_bytes = as_u64();
    else if (k == "emit_binary") emit_binary = (value == "1" || value == "true");
    else throw ConfigError("unknown override key: " + key);
}

namespace {

std::vector<double> uniform_grid(double t_end, int n_samples) {
    if (n_samples < 2 || !(t_end > 0.0))
        throw ConfigError("time grid needs t_end > 0 and n_samples >= 2");
    std::vector<double> t(n_samples);
    for (int i = 0; i < n_samples; ++i)
        t[i] = t_end * static_cast<double>(i) / (n_samples - 1);
    return t;
}

void apply_thread_config(const ExperimentConfig& cfg) {
#ifdef _OPENMP
    int threads = cfg.threads;
    if (threads <= 0)
        if (const char* env = std::getenv("QLSYNC_THREADS")) threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);
    if (threads == 1) set_default_exec(Exec::serial);
#else
    (void)cfg;
#endif
}

void guard_desk_scale(const ExperimentConfig& cfg) {
    // the dense product grows as (2 n_g)^{2 n_ql}; past three bits the default
    // cap cannot hold it, so fail with sizing advice instead of thrashing
    if (cfg.resource.n_ql > 3 && cfg.memory_cap_bytes == kDefaultMemoryCapBytes)
        throw ConfigError(
            "experiments refuse n_ql > 3 at the default memory cap; storage grows as "
            "(2*n_g)^(2*n_ql) — raise memory_cap_bytes explicitly to override");
}

struct ManifestBuilder {
    json manifest;
    fs::path dir;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit ManifestBuilder(const ExperimentConfig& cfg) : dir(cfg.output_dir) {
        fs::create_directories(dir);
        manifest["schema_version"] = 1;
        manifest["config"] = cfg.to_json();
        manifest["config_hash"] = "fnv1a64:" + fnv1a64_hex(cfg.to_json().dump());
        manifest["outputs"] = json::array();
        manifest["metrics"] = json::object();
    }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    void add_output(const std::string& name) { manifest["outputs"].push_back(name); }

    json finish() {
        manifest["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
        return manifest;
    }
};

json run_spectra_fig2(const ExperimentConfig& cfg, ManifestBuilder& mb) {
    ResourceSpec spec = cfg.resource;
    spec.seed = cfg.seed;
    const EnsembleSpectra ens = ensemble_spectra(spec, cfg.ensemble_n_samp);

    const DensityHistogram direct = density_histogram(ens.product_eigenvalues, cfg.bins);
    const DensityHistogram single = density_histogram(ens.factor_eigenvalues, cfg.bins);
    std::vector<DensityHistogram> factors(spec.n_ql, single);
    const DensityHistogram convolved = convolve_densities(factors);
    const DensityHistogram conv_on_grid =
        rebin(convolved, direct.bin_edges.front(), direct.width(), direct.bins());

    write_histogram_csv(mb.path("density_direct.csv"), direct);
    write_histogram_csv(mb.path("density_single.csv"), single);
    write_histogram_csv(mb.path("density_convolved.csv"), conv_on_grid);
    mb.add_output("density_direct.csv");
    mb.add_output("density_single.csv");
    mb.add_output("density_convolved.csv");

    const std::vector<double> markers = emergent_eigenvalues(spec);
    json marker_info = json::array();
    for (double v : markers) {
        const int b = direct.locate(v);
        marker_info.push_back({{"value", v},
                               {"bin", b},
                               {"bin_center", direct.center(b)},
                               {"mass", direct.mass[b]}});
    }
    mb.manifest["metrics"]["emergent_markers"] = marker_info;
    mb.manifest["metrics"]["l1_direct_vs_convolved"] = l1_distance(direct, conv_on_grid);
    mb.manifest["metrics"]["n_samp"] = cfg.ensemble_n_samp;
    return mb.finish();
}

json run_fig3(const ExperimentConfig& cfg, ManifestBuilder& mb, bool bell) {
    ResourceSpec spec = cfg.resource;
    spec.seed = cfg.seed;
    if (bell && spec.n_ql != 2) throw ConfigError("bell_fig3 requires n_ql == 2");

    RngStream master(cfg.seed);
    RngStream graph_stream = master.child(0);
    RngStream state_stream = master.child(1);

    const std::vector<Matrix> factors = sample_single_resources(spec, graph_stream);
    const Matrix ground = cartesian_product(factors, cfg.memory_cap_bytes);

    Matrix resource = ground;
    Circuit circuit;
    if (bell) {
        circuit = bell_circuit(spec);
        resource = conjugate_resource(ground, circuit);
    }

    auto spectrum = std::make_shared<Spectrum>(full_eigh(resource));
    const Generator gen = build_generator(spectrum, cfg.params);

    const CVec x0 = sample_initial_state(spec, state_stream);
    const std::vector<double> grid = uniform_grid(cfg.t_end, cfg.time_samples);

    const Trajectory full = propagate_spectral(gen, x0, grid);
    const Trajectory approx =
        emergent_approximation(gen, spectrum->eigenvector(0), x0, grid);

    write_trajectory_csv(mb.path("trajectory_full.csv"), full, cfg.params);
    write_trajectory_csv(mb.path("trajectory_emergent.csv"), approx, cfg.params);
    write_spectrum_csv(mb.path("spectrum.csv"), spectrum->eigenvalues);
    mb.add_output("trajectory_full.csv");
    mb.add_output("trajectory_emergent.csv");
    mb.add_output("spectrum.csv");
    if (cfg.emit_binary) {
        write_trajectory_binary(mb.path("trajectory_full.bin"),
                                mb.path("trajectory_full.bin.json"), full);
        mb.add_output("trajectory_full.bin");
        mb.add_output("trajectory_full.bin.json");
    }

    // target: U_g applied to the all-down basis state
    RVec target = ql_basis_state(spec.n_g, std::vector<bool>(spec.n_ql, false));
    CVec target_c = to_complex(target);
    if (bell) target_c = circuit.apply(target_c);

    const std::vector<double> deltas = delta_series(full, approx);
    const double final_alignment =
        steady_state_alignment(full.states.back(), target_c);

    mb.manifest["metrics"]["lambda1"] = spectrum->eigenvalues[0];
    mb.manifest["metrics"]["lambda2"] = spectrum->eigenvalues[1];
    mb.manifest["metrics"]["spectral_gap"] =
        spectrum->eigenvalues[0] - spectrum->eigenvalues[1];
    mb.manifest["metrics"]["final_alignment"] = final_alignment;
    mb.manifest["metrics"]["delta_final"] = deltas.back();
    mb.manifest["metrics"]["delta_mid"] = deltas[deltas.size() / 2];
    return mb.finish();
}

json run_error_fig4(const ExperimentConfig& cfg, ManifestBuilder& mb) {
    ResourceSpec spec = cfg.resource;
    spec.seed = cfg.seed;

    SweepOptions opts;
    opts.l_values = cfg.sweep_l_values;
    opts.t_values = cfg.sweep_t_values;
    opts.n_samp = cfg.sweep_n_samp;
    opts.resample_graphs = cfg.sweep_resample_graphs;
    const SweepResult sweep = error_sweep(spec, cfg.params, opts);

    std::ostringstream out;
    out << "circuit,l,t,mean_delta,std_delta,n_samp,seed\n";
    for (const ErrorRecord& r : sweep.records)
        out << r.circuit << ',' << r.l_value << ',' << format_double(r.t_value) << ','
            << format_double(r.mean_delta) << ',' << format_double(r.std_delta) << ','
            << r.n_samples << ',' << cfg.seed << '\n';
    write_text_file(mb.path("sweep.csv"), out.str());
    mb.add_output("sweep.csv");

    std::ostringstream det;
    det << "l,sample,t,delta_ground,delta_bell,lambda1,lambda2\n";
    for (const SweepSample& s : sweep.samples)
        for (std::size_t ti = 0; ti < opts.t_values.size(); ++ti)
            det << s.l_value << ',' << s.sample << ',' << format_double(opts.t_values[ti])
                << ',' << format_double(s.delta_ground[ti]) << ','
                << (s.delta_bell.empty() ? "" : format_double(s.delta_bell[ti])) << ','
                << format_double(s.lambda1) << ',' << format_double(s.lambda2) << '\n';
    write_text_file(mb.path("sweep_samples.csv"), det.str());
    mb.add_output("sweep_samples.csv");

    json delta_table = json::array();
    for (const ErrorRecord& r : sweep.records)
        delta_table.push_back({{"circuit", r.circuit},
                               {"l", r.l_value},
                               {"t", r.t_value},
                               {"mean_delta", r.mean_delta},
                               {"std_delta", r.std_delta}});
    mb.manifest["metrics"]["delta_table"] = delta_table;
    json skipped = json::array();
    for (const auto& [l, why] : sweep.skipped) skipped.push_back({{"l", l}, {"reason", why}});
    mb.manifest["metrics"]["skipped"] = skipped;
    return mb.finish();
}

json run_protocol(const ExperimentConfig& cfg, ManifestBuilder& mb) {
    ResourceSpec spec = cfg.resource;
    spec.seed = cfg.seed;
    RngStream master(cfg.seed);

    // steps 1-3: sample elementary graphs, build the product, and retry until
    // the leading emergent state is acceptably isolated
    const int max_attempts = 8;
    std::shared_ptr<Spectrum> spectrum;
    Matrix ground;
    int attempt = 0;
    double gap = 0.0;
    for (; attempt < max_attempts; ++attempt) {
        const std::vector<Matrix> factors =
            sample_single_resources(spec, master.child(attempt).child(0));
        ground = cartesian_product(factors, cfg.memory_cap_bytes);
        spectrum = std::make_shared<Spectrum>(full_eigh(ground));
        gap = spectrum->eigenvalues[0] - spectrum->eigenvalues[1];
        if (gap >= cfg.isolation_gap) break;
    }
    const bool isolated = gap >= cfg.isolation_gap;

    // step 4: encode the circuit in the network
    Circuit circuit = make_circuit(cfg.circuit, spec);
    std::shared_ptr<Spectrum> run_spectrum = spectrum;
    if (!cfg.circuit.empty()) {
        const Matrix transformed = conjugate_resource(ground, circuit);
        run_spectrum = std::make_shared<Spectrum>(full_eigh(transformed));
    }

    // step 5: let the network synchronize
    const Generator gen = build_generator(run_spectrum, cfg.params);
    const CVec x0 =
        sample_initial_state(spec, master.child(std::max(attempt, 0)).child(1));
    const std::vector<double> grid = uniform_grid(cfg.t_end, cfg.time_samples);
    const Trajectory traj = propagate_spectral(gen, x0, grid);
    const Trajectory approx =
        emergent_approximation(gen, run_spectrum->eigenvector(0), x0, grid);

    // step 6: read out the synchronized configuration
    RVec target = ql_basis_state(spec.n_g, std::vector<bool>(spec.n_ql, false));
    CVec target_c = circuit.apply(to_complex(target));
    const double alignment = steady_state_alignment(traj.states.back(), target_c);
    const std::vector<double> deltas = delta_series(traj, approx);

    write_trajectory_csv(mb.path("trajectory.csv"), traj, cfg.params);
    write_spectrum_csv(mb.path("spectrum.csv"), run_spectrum->eigenvalues);
    mb.add_output("trajectory.csv");
    mb.add_output("spectrum.csv");

    std::ostringstream readout;
    readout << "oscillator_index,angle,phase\n";
    const AngleSeries series = angles_and_phases(traj, cfg.params);
    for (std::size_t j = 0; j < series.angles.back().size(); ++j)
        readout << j << ',' << format_double(series.angles.back()[j]) << ','
                << format_double(series.phases.back()[j]) << '\n';
    write_text_file(mb.path("readout.csv"), readout.str());
    mb.add_output("readout.csv");

    mb.manifest["metrics"]["attempts"] = attempt + 1;
    mb.manifest["metrics"]["spectral_gap"] = gap;
    mb.manifest["metrics"]["isolated"] = isolated;
    mb.manifest["metrics"]["final_alignment"] = alignment;
    mb.manifest["metrics"]["delta_final"] = deltas.back();
    return mb.finish();
}

}  // namespace

OracleReport oracle_check(const ExperimentConfig& cfg) {
    if (cfg.resource.n_g > 8)
        throw ParameterError("oracle_check: n_g <= 8 enforced for runtime");
    ResourceSpec spec = cfg.resource;
    spec.seed = cfg.seed;

    RngStream master(cfg.seed);
    const std::vector<Matrix> factors = sample_single_resources(spec, master.child(0));
    const Matrix resource = cartesian_product(factors, cfg.memory_cap_bytes);
    auto spectrum = std::make_shared<Spectrum>(full_eigh(resource));
    const Generator gen = build_generator(spectrum, cfg.params);
    RngStream state_stream = master.child(1);
    const CVec x0 = sample_initial_state(spec, state_stream);

    // grid chosen so every gap is a whole number of dt steps
    std::vector<double> grid;
    const double horizon = std::min(cfg.t_end, 5.0);
    const int segments = 25;
    for (int i = 0; i <= segments; ++i) {
        const double raw = horizon * i / segments;
        grid.push_back(std::round(raw / cfg.dt) * cfg.dt);
    }

    const Trajectory spectral = propagate_spectral(gen, x0, grid);
    const Trajectory direct = integrate_direct(resource, cfg.params, x0, grid, cfg.dt);

    OracleReport report;
    for (int i = 0; i < spectral.size(); ++i) {
        const CVec a = spectral.normalized_state(i);
        const CVec b = direct.normalized_state(i);
        double s = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a[j] - b[j]);
        const double dev = std::sqrt(s);
        if (dev > report.max_deviation) {
            report.max_deviation = dev;
            report.worst_time = grid[i];
        }
    }
    report.pass = report.max_deviation <= 1e-6;
    return report;
}

PartialEigsReport partial_eigs_check(const ExperimentConfig& cfg) {
    ResourceSpec spec = cfg.resource;
    spec.seed = cfg.seed;
    RngStream master(cfg.seed);
    const std::vector<Matrix> factors = sample_single_resources(spec, master.child(0));
    const Matrix resource = cartesian_product(factors, cfg.memory_cap_bytes);

    const Spectrum full = full_eigh(resource);
    const Spectrum partial = top_k_eigs(resource, cfg.k_top);

    PartialEigsReport report;
    for (int i = 0; i < cfg.k_top; ++i)
        report.max_eigenvalue_diff = std::max(
            report.max_eigenvalue_diff,
            std::abs(full.eigenvalues[i] - partial.eigenvalues[i]));

    Matrix uf(full.source_dim, cfg.k_top), up(full.source_dim, cfg.k_top);
    for (int c = 0; c < cfg.k_top; ++c)
        for (int r = 0; r < full.source_dim; ++r) {
            uf(r, c) = full.eigenvectors(r, c);
            up(r, c) = partial.eigenvectors(r, c);
        }
    report.subspace_angle_rad = subspace_angle(uf, up);
    report.pass =
        report.max_eigenvalue_diff <= 1e-8 && report.subspace_angle_rad <= 1e-6;
    return report;
}

json validate_resource(const ExperimentConfig& cfg) {
    ResourceSpec spec = cfg.resource;
    spec.seed = cfg.seed;
    RngStream master(cfg.seed);
    const std::vector<Matrix> factors = sample_single_resources(spec, master.child(0));
    const Matrix resource = cartesian_product(factors, cfg.memory_cap_bytes);
    const Spectrum spectrum = full_eigh(resource);

    const double lambda1 = spectrum.eigenvalues[0];
    const double lambda2 = spectrum.eigenvalues[1];
    const double gap = lambda1 - lambda2;

    json report;
    report["lambda1"] = lambda1;
    report["lambda2"] = lambda2;
    report["spectral_gap"] = gap;
    report["gap_ratio"] = lambda1 != 0.0 ? gap / lambda1 : 0.0;
    report["isolation_threshold"] = cfg.isolation_gap;
    report["isolated"] = gap >= cfg.isolation_gap;
    bool degenerate_pair = false;
    for (int lq : spec.l) degenerate_pair |= (lq == 0);
    report["degenerate_emergent_pair"] = degenerate_pair;  // k+l == k-l when l == 0
    report["emergent_eigenvalues"] = emergent_eigenvalues(spec);
    return report;
}

json run_experiment(const ExperimentConfig& cfg) {
    cfg.resource.validate();
    cfg.params.validate();
    apply_thread_config(cfg);
    guard_desk_scale(cfg);
    ManifestBuilder mb(cfg);

    try {
        switch (cfg.experiment) {
            case ExperimentKind::spectra_fig2: return run_spectra_fig2(cfg, mb);
            case ExperimentKind::ground_fig3: return run_fig3(cfg, mb, false);
            case ExperimentKind::bell_fig3: return run_fig3(cfg, mb, true);
            case ExperimentKind::error_fig4: return run_error_fig4(cfg, mb);
            case ExperimentKind::protocol_run: return run_protocol(cfg, mb);
            case ExperimentKind::oracle_check: {
                const OracleReport r = oracle_check(cfg);
                mb.manifest["metrics"]["pass"] = r.pass;
                mb.manifest["metrics"]["max_deviation"] = r.max_deviation;
                mb.manifest["metrics"]["worst_time"] = r.worst_time;
                json m = mb.finish();
                if (!r.pass)
                    throw ValidationError(
                        "oracle_check failed: max deviation " +
                        std::to_string(r.max_deviation) + " at t=" +
                        std::to_string(r.worst_time));
                return m;
            }
            case ExperimentKind::partial_eigs_check: {
                const PartialEigsReport r = partial_eigs_check(cfg);
                mb.manifest["metrics"]["pass"] = r.pass;
                mb.manifest["metrics"]["max_eigenvalue_diff"] = r.max_eigenvalue_diff;
                mb.manifest["metrics"]["subspace_angle_rad"] = r.subspace_angle_rad;
                json m = mb.finish();
                if (!r.pass)
                    throw ValidationError("partial_eigs_check failed");
                return m;
            }
        }
        throw ConfigError("unhandled experiment kind");
    } catch (const CapacityError& e) {
        json err;
        err["error_type"] = "capacity";
        err["message"] = e.what();
        err["required_bytes"] = e.required_bytes;
        err["cap_bytes"] = e.cap_bytes;
        write_text_file((fs::path(cfg.output_dir) / "error.json").string(),
                        err.dump(2) + "\n");
        throw;
    } catch (const std::exception& e) {
        json err;
        err["error_type"] = "runtime";
        err["message"] = e.what();
        write_text_file((fs::path(cfg.output_dir) / "error.json").string(),
                        err.dump(2) + "\n");
        throw;
    }
}

}  // namespace qlsync
