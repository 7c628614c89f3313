#pragma once

// Emergent-state approximation and its error diagnostics.
//
// The approximation keeps a single mode of the spectral propagator:
//
//     xt(t) = e^{(i omega_bar + lambda_1 K / N_tot) t} v <v, x0>,   v = U_g Phi_1,
//
// and the relative error Delta_t = ||x - xt|| / ||x|| measures how well the
// synchronized steady state encodes the gate-transformed leading eigenvector.
// Both trajectories share the same log-scale offset, so Delta_t is evaluated
// without ever forming exponentially large norms. Asymptotically
// log Delta_t decays with slope -K (lambda_1 - lambda_2) / N_tot.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlsync/dynamics.hpp"
#include "qlsync/matrix.hpp"
#include "qlsync/qlgates.hpp"

namespace qlsync {

// Rank-1 trajectory built from the leading eigenpair of the (possibly
// gate-conjugated) resource. top_vector is U_g Phi_1; the generator supplies
// lambda_1 and the shared scaling offset.
Trajectory emergent_approximation(const Generator& gen, const RVec& top_vector,
                                  const CVec& x0, const std::vector<double>& times);

// Delta = ||x - xt|| / ||x||, both states at matched scaling offsets.
double relative_error(const CVec& x, const CVec& xt);

// Per-time Delta series of two trajectories on the same grid; insists the
// scaling offsets agree so the comparison is meaningful.
std::vector<double> delta_series(const Trajectory& full, const Trajectory& approx);

// |<target, x>| / (||target|| ||x||): scale- and phase-free cosine similarity.
double steady_state_alignment(const CVec& x, const CVec& target);
double steady_state_alignment(const CVec& x, const RVec& target);

// Least-squares slope of log(delta) against t.
double fit_log_slope(const std::vector<double>& times, const std::vector<double>& deltas);

struct ErrorRecord {
    std::string circuit;  // "ground" | "bell"
    int l_value = 0;
    double t_value = 0.0;
    double mean_delta = 0.0;
    double std_delta = 0.0;
    int n_samples = 0;
};

struct SweepSample {
    int l_value = 0;
    int sample = 0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::vector<double> delta_ground;  // aligned with t_values
    std::vector<double> delta_bell;    // empty when the Bell variant is off
};

struct SweepOptions {
    std::vector<int> l_values;
    std::vector<double> t_values;
    int n_samp = 100;
    bool include_bell = true;
    bool resample_graphs = true;  // fresh graphs per sample (fixed-graph mode off)
    Exec exec = default_exec();
};

struct SweepResult {
    std::vector<ErrorRecord> records;
    std::vector<SweepSample> samples;
    std::vector<std::pair<int, std::string>> skipped;  // (l, reason)
};

// Mean/std of Delta_t over seeded samples for each (circuit, l, t). Graphs are
// resampled per sample by default; the Bell variant propagates the related
// initial state U_g x0 under the conjugated resource. Sample slots are filled
// in parallel and reduced serially, so serial and OpenMP runs agree bitwise.
SweepResult error_sweep(const ResourceSpec& spec_template, const ModelParams& params,
                        const SweepOptions& options);

}  // namespace qlsync
