#pragma once

// Complex-embedded Kuramoto dynamics.
//
// The state is x = e^{i theta}; with uniform frequencies the equations of
// motion are linear, xdot = D x, with generator
//
//     D = i omega_bar 1 + (K / N_tot) R.
//
// Exact propagation uses the spectral decomposition of R:
//
//     x(t) = e^{i omega_bar t} sum_l e^{(K/N_tot) lambda_l t} Phi_l <Phi_l, x0>.
//
// To keep long horizons finite, stored states are scaled by
// e^{-mu t}, mu = max_l (K/N_tot) lambda_l, and the offset is tracked as
// log_scale; the true state is e^{log_scale} * state. The direct RK4
// integrator renormalizes each step and accumulates the log-norm, serving as
// the independent oracle for the spectral path.

#include <cmath>
#include <memory>
#include <vector>

#include "qlsync/matrix.hpp"
#include "qlsync/netgraph.hpp"
#include "qlsync/rng.hpp"
#include "qlsync/spectra.hpp"

namespace qlsync {

struct ModelParams {
    double omega_bar = 0.5;  // common oscillator frequency, radians/time
    double coupling = 10.0;  // global coupling K

    void validate() const {
        if (!(omega_bar > 0.0) || !std::isfinite(omega_bar))
            throw ParameterError("ModelParams: omega_bar must be positive");
        if (coupling == 0.0 || !std::isfinite(coupling))
            throw ParameterError("ModelParams: coupling must be finite and nonzero");
    }
};

struct Generator {
    ModelParams params;
    std::shared_ptr<const Spectrum> spectrum;  // spectrum of R

    int dim() const { return spectrum->source_dim; }
    double rate_scale() const { return params.coupling / dim(); }  // K / N_tot
    // growth rate of mode i: Re of the generator eigenvalue
    double mode_rate(int i) const { return rate_scale() * spectrum->eigenvalues[i]; }
    // largest growth rate (the scaling offset per unit time)
    double peak_rate() const;
};

Generator build_generator(std::shared_ptr<const Spectrum> spectrum_of_r,
                          const ModelParams& params);
inline Generator build_generator(const Matrix& r, const ModelParams& params) {
    return build_generator(std::make_shared<Spectrum>(full_eigh(r)), params);
}

struct Trajectory {
    std::vector<double> times;
    std::vector<CVec> states;       // scaled states, includes the e^{i omega t} phase
    std::vector<double> log_scale;  // true x(t) = e^{log_scale} * states
    std::vector<double> norms;      // norms of the scaled states
    bool degenerate_projection = false;  // set by the emergent approximation

    int size() const { return static_cast<int>(times.size()); }
    double log_norm(int i) const { return std::log(norms[i]) + log_scale[i]; }
    CVec normalized_state(int i) const;
};

// Per-bit initial angles, uniform on [0, 2pi).
std::vector<RVec> sample_initial_angles(const ResourceSpec& spec, RngStream& rng);
// x0 = (x) over bits of e^{i theta_0^(q)}; every entry has unit modulus.
CVec state_from_angles(const std::vector<RVec>& per_bit_angles);
CVec sample_initial_state(const ResourceSpec& spec, RngStream& rng);

// Exact propagation on the requested time grid. For a partial spectrum the
// truncation weight ||x0 - Proj x0|| / ||x0|| must stay below
// truncation_bound, else TruncationError.
Trajectory propagate_spectral(const Generator& gen, const CVec& x0,
                              const std::vector<double>& times,
                              double truncation_bound = 1e-6);

// Classical fixed-step RK4 on xdot = D x with per-step renormalization.
// Every gap between requested times must be a whole number of steps.
Trajectory integrate_direct(const Matrix& resource, const ModelParams& params,
                            const CVec& x0, const std::vector<double>& times,
                            double dt = 1e-3, Exec exec = default_exec());

struct AngleSeries {
    std::vector<double> times;
    std::vector<RVec> angles;  // theta(t) = arg x(t), entries in [-pi, pi]
    std::vector<RVec> phases;  // phi(t) = theta(t) - omega_bar t, wrapped to [-pi, pi)
};

AngleSeries angles_and_phases(const Trajectory& traj, const ModelParams& params);

// max over the grid of || x_a/||x_a|| - x_b/||x_b|| ||  (scale-free comparison)
double max_normalized_deviation(const Trajectory& a, const Trajectory& b);

}  // namespace qlsync
