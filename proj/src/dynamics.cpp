#include "qlsync/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace qlsync {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// wrap to [-pi, pi)
double wrap_phase(double x) {
    double y = std::remainder(x, kTwoPi);
    if (y >= 3.1415926535897931) y -= kTwoPi;
    return y;
}
}  // namespace

double Generator::peak_rate() const {
    // K may be negative, in which case the smallest eigenvalue grows fastest
    const double first = rate_scale() * spectrum->eigenvalues.front();
    const double last = rate_scale() * spectrum->eigenvalues.back();
    return std::max(first, last);
}

Generator build_generator(std::shared_ptr<const Spectrum> spectrum_of_r,
                          const ModelParams& params) {
    params.validate();
    if (!spectrum_of_r || spectrum_of_r->count() == 0)
        throw ParameterError("build_generator: missing spectrum");
    return Generator{params, std::move(spectrum_of_r)};
}

CVec Trajectory::normalized_state(int i) const {
    CVec y = states[i];
    const double n = norms[i];
    if (n == 0.0) throw ParameterError("normalized_state: zero-norm state");
    for (Cx& v : y) v /= n;
    return y;
}

std::vector<RVec> sample_initial_angles(const ResourceSpec& spec, RngStream& rng) {
    spec.validate();
    std::vector<RVec> out(spec.n_ql);
    for (int q = 0; q < spec.n_ql; ++q) {
        out[q].resize(2 * spec.n_g);
        for (double& a : out[q]) a = rng.next_angle();
    }
    return out;
}

CVec state_from_angles(const std::vector<RVec>& per_bit_angles) {
    if (per_bit_angles.empty()) throw ParameterError("state_from_angles: no bits");
    CVec x{Cx(1.0, 0.0)};
    for (const RVec& ang : per_bit_angles) {
        CVec bit(ang.size());
        for (std::size_t i = 0; i < ang.size(); ++i)
            bit[i] = Cx(std::cos(ang[i]), std::sin(ang[i]));
        x = kron(x, bit);
    }
    return x;
}

CVec sample_initial_state(const ResourceSpec& spec, RngStream& rng) {
    return state_from_angles(sample_initial_angles(spec, rng));
}

Trajectory propagate_spectral(const Generator& gen, const CVec& x0,
                              const std::vector<double>& times,
                              double truncation_bound) {
    const Spectrum& sp = *gen.spectrum;
    const int n = sp.source_dim;
    const int modes = sp.count();
    if (static_cast<int>(x0.size()) != n)
        throw ParameterError("propagate_spectral: state dimension mismatch");
    if (times.empty()) throw ParameterError("propagate_spectral: empty time grid");

    // expansion coefficients c_l = <Phi_l, x0> (conjugate-linear first slot;
    // eigenvectors are real so this is a plain projection)
    CVec coeff(modes);
    for (int l = 0; l < modes; ++l) {
        Cx acc(0.0, 0.0);
        for (int r = 0; r < n; ++r) acc += sp.eigenvectors(r, l) * x0[r];
        coeff[l] = acc;
    }

    if (!sp.complete) {
        CVec recon(n, Cx(0.0, 0.0));
        for (int l = 0; l < modes; ++l)
            for (int r = 0; r < n; ++r) recon[r] += sp.eigenvectors(r, l) * coeff[l];
        double miss = 0.0;
        for (int r = 0; r < n; ++r) miss += std::norm(x0[r] - recon[r]);
        const double weight = std::sqrt(miss) / norm2(x0);
        if (weight > truncation_bound)
            throw TruncationError(
                "propagate_spectral: partial spectrum drops weight " +
                    std::to_string(weight) + " of the initial state",
                weight);
    }

    const double rate = gen.rate_scale();
    const double mu = gen.peak_rate();
    const double omega = gen.params.omega_bar;

    Trajectory traj;
    traj.times = times;
    traj.states.resize(times.size());
    traj.log_scale.resize(times.size());
    traj.norms.resize(times.size());

    CVec weighted(modes);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        for (int l = 0; l < modes; ++l)
            weighted[l] = coeff[l] * std::exp((rate * sp.eigenvalues[l] - mu) * t);
        CVec state;
        matvec(sp.eigenvectors, weighted, state);
        const Cx phase(std::cos(omega * t), std::sin(omega * t));
        for (Cx& v : state) v *= phase;
        traj.log_scale[ti] = mu * t;
        traj.norms[ti] = norm2(state);
        traj.states[ti] = std::move(state);
    }
    return traj;
}

Trajectory integrate_direct(const Matrix& resource, const ModelParams& params,
                            const CVec& x0, const std::vector<double>& times,
                            double dt, Exec exec) {
    params.validate();
    if (!resource.square()) throw ParameterError("integrate_direct: R must be square");
    if (resource.rows() != static_cast<int>(x0.size()))
        throw ParameterError("integrate_direct: state dimension mismatch");
    if (!(dt > 0.0)) throw ParameterError("integrate_direct: dt must be positive");
    if (times.empty()) throw ParameterError("integrate_direct: empty time grid");

    const int n = resource.rows();
    const double rate = params.coupling / n;
    const double omega = params.omega_bar;

    // D x = i omega x + rate * (R x)
    CVec rx(n);
    auto rhs = [&](const CVec& x, CVec& out) {
        matvec(resource, x, rx, exec);
        out.resize(n);
        for (int i = 0; i < n; ++i)
            out[i] = Cx(0.0, omega) * x[i] + rate * rx[i];
    };

    Trajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());

    CVec x = x0;
    double log_acc = 0.0;
    double t = 0.0;
    CVec k1, k2, k3, k4, tmp(n);

    auto record = [&] {
        traj.states.push_back(x);
        traj.log_scale.push_back(log_acc);
        traj.norms.push_back(norm2(x));
    };

    std::size_t ti = 0;
    if (std::abs(times[0]) < 1e-12) {
        record();
        ++ti;
    } else if (times[0] < 0.0) {
        throw ParameterError("integrate_direct: times must be nonnegative");
    }

    for (; ti < times.size(); ++ti) {
        const double target = times[ti];
        const double gap = target - t;
        const long long steps = std::llround(gap / dt);
        if (steps < 0 || std::abs(steps * dt - gap) > 1e-9 * std::max(1.0, std::abs(gap)))
            throw ParameterError("integrate_direct: time grid must align with dt");
        for (long long s = 0; s < steps; ++s) {
            rhs(x, k1);
            for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
            rhs(tmp, k2);
            for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
            rhs(tmp, k3);
            for (int i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
            rhs(tmp, k4);
            for (int i = 0; i < n; ++i)
                x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

            const double nrm = norm2(x);
            if (!(nrm > 0.0) || !std::isfinite(nrm))
                throw IntegrationError("integrate_direct: non-finite state at t=" +
                                           std::to_string(t + dt),
                                       t + dt);
            for (Cx& v : x) v /= nrm;
            log_acc += std::log(nrm);
            t += dt;
        }
        t = target;  // absorb accumulated rounding
        record();
    }
    return traj;
}

AngleSeries angles_and_phases(const Trajectory& traj, const ModelParams& params) {
    if (traj.times.empty()) throw ParameterError("angles_and_phases: empty trajectory");
    AngleSeries out;
    out.times = traj.times;
    out.angles.resize(traj.times.size());
    out.phases.resize(traj.times.size());
    for (int ti = 0; ti < traj.size(); ++ti) {
        const CVec& x = traj.states[ti];
        RVec theta(x.size()), phi(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (x[j] == Cx(0.0, 0.0))
                throw UndefinedAngleError(
                    "angles_and_phases: zero-modulus oscillator " + std::to_string(j) +
                        " at t=" + std::to_string(traj.times[ti]),
                    static_cast<int>(j), traj.times[ti]);
            theta[j] = std::atan2(x[j].imag(), x[j].real());
            phi[j] = wrap_phase(theta[j] - params.omega_bar * traj.times[ti]);
        }
        out.angles[ti] = std::move(theta);
        out.phases[ti] = std::move(phi);
    }
    return out;
}

double max_normalized_deviation(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size())
        throw ParameterError("max_normalized_deviation: grid mismatch");
    double worst = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        if (std::abs(a.times[i] - b.times[i]) > 1e-12)
            throw ParameterError("max_normalized_deviation: grid mismatch");
        const CVec xa = a.normalized_state(i);
        const CVec xb = b.normalized_state(i);
        double s = 0.0;
        for (std::size_t j = 0; j < xa.size(); ++j) s += std::norm(xa[j] - xb[j]);
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

}  // namespace qlsync
