#include "qlsync/emergent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qlsync {

Trajectory emergent_approximation(const Generator& gen, const RVec& top_vector,
                                  const CVec& x0, const std::vector<double>& times) {
    const int n = gen.dim();
    if (static_cast<int>(top_vector.size()) != n ||
        static_cast<int>(x0.size()) != n)
        throw ParameterError("emergent_approximation: dimension mismatch");
    if (times.empty()) throw ParameterError("emergent_approximation: empty time grid");

    const double lambda1 = gen.spectrum->eigenvalues.front();
    const double rate = gen.rate_scale();
    const double mu = gen.peak_rate();
    const double omega = gen.params.omega_bar;

    Cx amp(0.0, 0.0);
    for (int r = 0; r < n; ++r) amp += top_vector[r] * x0[r];

    Trajectory traj;
    traj.times = times;
    const double vnorm = norm2(top_vector);
    traj.degenerate_projection = std::abs(amp) <= 1e-14 * vnorm * norm2(x0);

    for (double t : times) {
        const double decay = std::exp((rate * lambda1 - mu) * t);  // 1 unless K < 0
        const Cx phase(std::cos(omega * t), std::sin(omega * t));
        const Cx factor = amp * decay * phase;
        CVec state(n);
        for (int r = 0; r < n; ++r) state[r] = factor * top_vector[r];
        traj.log_scale.push_back(mu * t);
        traj.norms.push_back(std::abs(factor) * vnorm);
        traj.states.push_back(std::move(state));
    }
    return traj;
}

double relative_error(const CVec& x, const CVec& xt) {
    if (x.size() != xt.size()) throw ParameterError("relative_error: dimension mismatch");
    const double nx = norm2(x);
    if (nx == 0.0) throw ParameterError("relative_error: ||x|| is zero");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(x[i] - xt[i]);
    return std::sqrt(s) / nx;
}

std::vector<double> delta_series(const Trajectory& full, const Trajectory& approx) {
    if (full.times.size() != approx.times.size())
        throw ParameterError("delta_series: grid mismatch");
    std::vector<double> out(full.times.size());
    for (int i = 0; i < full.size(); ++i) {
        if (std::abs(full.times[i] - approx.times[i]) > 1e-12 ||
            std::abs(full.log_scale[i] - approx.log_scale[i]) >
                1e-9 * std::max(1.0, std::abs(full.log_scale[i])))
            throw ParameterError("delta_series: trajectories use different scaling");
        out[i] = relative_error(full.states[i], approx.states[i]);
    }
    return out;
}

double steady_state_alignment(const CVec& x, const CVec& target) {
    const double nx = norm2(x), nt = norm2(target);
    if (nx == 0.0 || nt == 0.0)
        throw ParameterError("steady_state_alignment: zero vector");
    return std::abs(inner(target, x)) / (nx * nt);
}

double steady_state_alignment(const CVec& x, const RVec& target) {
    return steady_state_alignment(x, to_complex(target));
}

double fit_log_slope(const std::vector<double>& times, const std::vector<double>& deltas) {
    if (times.size() != deltas.size() || times.size() < 2)
        throw ParameterError("fit_log_slope: need >= 2 points");
    const int n = static_cast<int>(times.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!(deltas[i] > 0.0))
            throw ParameterError("fit_log_slope: deltas must be positive");
        const double y = std::log(deltas[i]);
        st += times[i];
        sy += y;
        stt += times[i] * times[i];
        sty += times[i] * y;
    }
    const double denom = n * stt - st * st;
    if (std::abs(denom) < 1e-30) throw ParameterError("fit_log_slope: degenerate grid");
    return (n * sty - st * sy) / denom;
}

SweepResult error_sweep(const ResourceSpec& spec_template, const ModelParams& params,
                        const SweepOptions& options) {
    spec_template.validate();
    params.validate();
    if (options.l_values.empty() || options.t_values.empty() || options.n_samp < 1)
        throw ParameterError("error_sweep: empty sweep grids");

    SweepResult result;
    const RngStream master(spec_template.seed);
    const bool bell_possible = options.include_bell && spec_template.n_ql == 2;
    if (options.include_bell && !bell_possible)
        result.skipped.emplace_back(-1, "bell variant needs n_ql == 2; circuit skipped");

    for (std::size_t li = 0; li < options.l_values.size(); ++li) {
        const int l = options.l_values[li];
        ResourceSpec spec_l = spec_template;
        std::fill(spec_l.l.begin(), spec_l.l.end(), l);
        try {
            spec_l.validate();
        } catch (const ParameterError& e) {
            std::fprintf(stderr, "error_sweep: skipping l=%d (%s)\n", l, e.what());
            result.skipped.emplace_back(l, e.what());
            continue;
        }

        Circuit bell;
        if (bell_possible) bell = bell_circuit(spec_l, /*materialize=*/false);

        // fixed-graph mode samples the graphs once from the stream of sample 0
        std::vector<Matrix> shared_factors;
        if (!options.resample_graphs)
            shared_factors = sample_single_resources(
                spec_l, master.child(static_cast<std::uint64_t>(l)).child(0).child(0));

        std::vector<SweepSample> slot(options.n_samp);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (options.exec == Exec::openmp)
#endif
        for (int s = 0; s < options.n_samp; ++s) {
            RngStream stream =
                master.child(static_cast<std::uint64_t>(l)).child(static_cast<std::uint64_t>(s));
            RngStream graph_stream = stream.child(0);
            RngStream state_stream = stream.child(1);

            std::vector<Matrix> factors =
                options.resample_graphs ? sample_single_resources(spec_l, graph_stream)
                                        : shared_factors;
            std::vector<Spectrum> fs;
            fs.reserve(factors.size());
            for (const Matrix& f : factors) fs.push_back(full_eigh(f));
            auto product = std::make_shared<Spectrum>(product_spectrum(fs));
            const Generator gen = build_generator(product, params);

            CVec x0 = sample_initial_state(spec_l, state_stream);
            const Trajectory full = propagate_spectral(gen, x0, options.t_values);
            const Trajectory approx =
                emergent_approximation(gen, product->eigenvector(0), x0, options.t_values);

            SweepSample rec;
            rec.l_value = l;
            rec.sample = s;
            rec.lambda1 = product->eigenvalues[0];
            rec.lambda2 = product->eigenvalues[1];
            rec.delta_ground = delta_series(full, approx);

            if (bell_possible) {
                // related initial state x0' = U_g x0 propagated under R_g;
                // e^{D_g t} = U_g e^{D t} U_g^T turns this into rotations of
                // the ground trajectory, computed with genuine applications of
                // the circuit at every requested time
                const CVec x0b = bell.apply(x0);
                const CVec back = bell.apply_adjoint(x0b);
                const Trajectory ground_b = propagate_spectral(gen, back, options.t_values);
                RVec top = product->eigenvector(0);
                CVec top_b = bell.apply(to_complex(top));
                Cx amp(0.0, 0.0);
                for (std::size_t r = 0; r < top_b.size(); ++r)
                    amp += std::conj(top_b[r]) * x0b[r];
                rec.delta_bell.resize(options.t_values.size());
                for (std::size_t ti = 0; ti < options.t_values.size(); ++ti) {
                    const double t = options.t_values[ti];
                    CVec xb = bell.apply(ground_b.states[ti]);
                    const double decay =
                        std::exp((gen.rate_scale() * rec.lambda1 - gen.peak_rate()) * t);
                    const Cx phase(std::cos(params.omega_bar * t),
                                   std::sin(params.omega_bar * t));
                    const Cx factor = amp * decay * phase;
                    CVec xtb(top_b.size());
                    for (std::size_t r = 0; r < top_b.size(); ++r)
                        xtb[r] = factor * top_b[r];
                    rec.delta_bell[ti] = relative_error(xb, xtb);
                }
            }
            slot[s] = std::move(rec);
        }

        // serial reduction keeps parallel and serial sweeps bit-identical
        for (std::size_t ti = 0; ti < options.t_values.size(); ++ti) {
            for (int variant = 0; variant < (bell_possible ? 2 : 1); ++variant) {
                double mean = 0.0;
                for (int s = 0; s < options.n_samp; ++s)
                    mean += (variant == 0 ? slot[s].delta_ground[ti]
                                          : slot[s].delta_bell[ti]);
                mean /= options.n_samp;
                double var = 0.0;
                for (int s = 0; s < options.n_samp; ++s) {
                    const double d = (variant == 0 ? slot[s].delta_ground[ti]
                                                   : slot[s].delta_bell[ti]) -
                                     mean;
                    var += d * d;
                }
                const double sd =
                    options.n_samp > 1 ? std::sqrt(var / (options.n_samp - 1)) : 0.0;
                result.records.push_back({variant == 0 ? "ground" : "bell", l,
                                          options.t_values[ti], mean, sd,
                                          options.n_samp});
            }
        }
        for (int s = 0; s < options.n_samp; ++s) result.samples.push_back(std::move(slot[s]));
    }
    return result;
}

}  // namespace qlsync
