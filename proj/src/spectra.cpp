#include "qlsync/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "qlsync/rng.hpp"

namespace qlsync {

namespace {

// Largest-magnitude entry (lowest index on ties) made positive.
void fix_phase(Matrix& vecs, int col) {
    int arg = 0;
    double best = -1.0;
    for (int r = 0; r < vecs.rows(); ++r) {
        const double a = std::abs(vecs(r, col));
        if (a > best + 1e-15) {
            best = a;
            arg = r;
        }
    }
    if (vecs(arg, col) < 0.0)
        for (int r = 0; r < vecs.rows(); ++r) vecs(r, col) = -vecs(r, col);
}

}  // namespace

RVec Spectrum::eigenvector(int i) const {
    RVec v(source_dim);
    for (int r = 0; r < source_dim; ++r) v[r] = eigenvectors(r, i);
    return v;
}

Spectrum full_eigh(const Matrix& h, double hermitian_tol) {
    if (!h.square()) throw ValidationError("full_eigh: matrix not square");
    if (h.symmetry_defect() > hermitian_tol)
        throw ValidationError("full_eigh: matrix not Hermitian within tolerance");

    const int n = h.rows();
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        hm(h.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hm);
    if (solver.info() != Eigen::Success)
        throw ValidationError("full_eigh: dense eigensolver failed");

    Spectrum s;
    s.source_dim = n;
    s.complete = true;
    s.eigenvalues.resize(n);
    s.eigenvectors = Matrix(n, n);
    // Eigen returns ascending; flip to descending.
    for (int i = 0; i < n; ++i) {
        s.eigenvalues[i] = solver.eigenvalues()(n - 1 - i);
        for (int r = 0; r < n; ++r) s.eigenvectors(r, i) = solver.eigenvectors()(r, n - 1 - i);
        fix_phase(s.eigenvectors, i);
    }
    return s;
}

namespace {

struct LanczosWork {
    std::vector<RVec> locked;
    std::vector<double> locked_vals;
};

void orthogonalize(RVec& w, const std::vector<RVec>& basis) {
    for (const RVec& v : basis) {
        const double c = inner(v, w);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * v[i];
    }
}

}  // namespace

Spectrum top_k_eigs(const std::function<void(const RVec&, RVec&)>& apply, int dim,
                    int k_top, const LanczosOptions& opts) {
    if (k_top < 1 || k_top > dim)
        throw ParameterError("top_k_eigs: need 1 <= k_top <= dim");

    LanczosWork work;
    RngStream rng(opts.seed);
    const int depth = opts.block_size > 0
                          ? opts.block_size
                          : std::min(dim, std::max(2 * k_top + 20, 40));

    std::vector<double> last_residuals;
    for (int restart = 0; restart < opts.max_restarts; ++restart) {
        if (static_cast<int>(work.locked.size()) >= k_top) break;

        // start vector orthogonal to everything already locked
        RVec v(dim);
        for (double& x : v) x = 2.0 * rng.next_double() - 1.0;
        orthogonalize(v, work.locked);
        orthogonalize(v, work.locked);
        double nv = norm2(v);
        if (nv < 1e-12) continue;
        for (double& x : v) x /= nv;

        std::vector<RVec> basis{v};
        std::vector<double> alpha, beta;
        const int m = std::min(depth, dim - static_cast<int>(work.locked.size()));
        RVec w(dim);
        for (int j = 0; j < m; ++j) {
            apply(basis[j], w);
            if (j > 0)
                for (int i = 0; i < dim; ++i) w[i] -= beta[j - 1] * basis[j - 1][i];
            const double a = inner(basis[j], w);
            alpha.push_back(a);
            for (int i = 0; i < dim; ++i) w[i] -= a * basis[j][i];
            // full reorthogonalization, twice, against locked and current basis
            for (int pass = 0; pass < 2; ++pass) {
                orthogonalize(w, work.locked);
                orthogonalize(w, basis);
            }
            const double b = norm2(w);
            if (b < 1e-13 || j == m - 1) {
                beta.push_back(b);
                break;
            }
            beta.push_back(b);
            RVec next(dim);
            for (int i = 0; i < dim; ++i) next[i] = w[i] / b;
            basis.push_back(std::move(next));
        }

        const int t = static_cast<int>(alpha.size());
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(t, t);
        for (int i = 0; i < t; ++i) {
            tri(i, i) = alpha[i];
            if (i + 1 < t) tri(i, i + 1) = tri(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
        const double beta_last = beta.empty() ? 0.0 : beta[t - 1];

        // walk Ritz values from the top, locking converged ones
        last_residuals.clear();
        for (int idx = t - 1; idx >= 0; --idx) {
            if (static_cast<int>(work.locked.size()) >= k_top) break;
            const double theta = small.eigenvalues()(idx);
            const double resid = std::abs(beta_last * small.eigenvectors()(t - 1, idx));
            last_residuals.push_back(resid);
            if (resid > opts.tol * std::max(1.0, std::abs(theta))) break;
            RVec y(dim, 0.0);
            for (int j = 0; j < t; ++j) {
                const double c = small.eigenvectors()(j, idx);
                for (int i = 0; i < dim; ++i) y[i] += c * basis[j][i];
            }
            orthogonalize(y, work.locked);
            const double ny = norm2(y);
            if (ny < 1e-8) continue;  // collapsed onto locked space
            for (double& x : y) x /= ny;
            work.locked.push_back(std::move(y));
            work.locked_vals.push_back(theta);
        }
    }

    if (static_cast<int>(work.locked.size()) < k_top)
        throw ConvergenceError("top_k_eigs: not converged after " +
                                   std::to_string(opts.max_restarts) + " restarts",
                               last_residuals);

    // order descending
    std::vector<int> order(work.locked.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return work.locked_vals[a] > work.locked_vals[b];
    });

    Spectrum s;
    s.source_dim = dim;
    s.complete = (k_top == dim);
    s.eigenvectors = Matrix(dim, k_top);
    for (int i = 0; i < k_top; ++i) {
        s.eigenvalues.push_back(work.locked_vals[order[i]]);
        for (int r = 0; r < dim; ++r) s.eigenvectors(r, i) = work.locked[order[i]][r];
        fix_phase(s.eigenvectors, i);
    }
    return s;
}

Spectrum top_k_eigs(const Matrix& h, int k_top, const LanczosOptions& opts) {
    if (!h.square()) throw ValidationError("top_k_eigs: matrix not square");
    if (h.symmetry_defect() > 1e-12)
        throw ValidationError("top_k_eigs: matrix not Hermitian within tolerance");
    auto apply = [&h](const RVec& x, RVec& y) { y = matvec(h, x); };
    return top_k_eigs(apply, h.rows(), k_top, opts);
}

Spectrum product_spectrum(const std::vector<Spectrum>& factors, std::uint64_t cap_bytes) {
    if (factors.empty()) throw ParameterError("product_spectrum: no factors");
    std::uint64_t dim = 1;
    for (const Spectrum& f : factors) {
        if (!f.complete)
            throw ParameterError("product_spectrum: factor spectra must be complete");
        dim *= static_cast<std::uint64_t>(f.source_dim);
    }
    const std::uint64_t bytes =
        (dim >= (1ULL << 30)) ? UINT64_MAX : dim * dim * sizeof(double);
    if (bytes > cap_bytes)
        throw CapacityError("product_spectrum: eigenvector matrix exceeds memory cap",
                            bytes, cap_bytes);

    const int n = static_cast<int>(dim);
    const int n_fac = static_cast<int>(factors.size());

    // enumerate multi-indices, sort sums descending
    std::vector<double> sums(n, 0.0);
    std::vector<int> multi(n_fac, 0);
    for (int flat = 0; flat < n; ++flat) {
        double s = 0.0;
        int rem = flat;
        for (int q = n_fac - 1; q >= 0; --q) {
            const int d = factors[q].source_dim;
            multi[q] = rem % d;
            rem /= d;
            s += factors[q].eigenvalues[multi[q]];
        }
        sums[flat] = s;
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sums[a] > sums[b]; });

    Spectrum s;
    s.source_dim = n;
    s.complete = true;
    s.eigenvalues.resize(n);
    s.eigenvectors = Matrix(n, n);
    for (int col = 0; col < n; ++col) {
        const int flat = order[col];
        s.eigenvalues[col] = sums[flat];
        // kron column: entry at row (r_1,...,r_F) = prod_q phi_q(r_q, m_q)
        int rem = flat;
        std::vector<int> m(n_fac);
        for (int q = n_fac - 1; q >= 0; --q) {
            m[q] = rem % factors[q].source_dim;
            rem /= factors[q].source_dim;
        }
        RVec column{1.0};
        for (int q = 0; q < n_fac; ++q) {
            RVec fq = factors[q].eigenvector(m[q]);
            column = kron(column, fq);
        }
        for (int r = 0; r < n; ++r) s.eigenvectors(r, col) = column[r];
        fix_phase(s.eigenvectors, col);
    }
    return s;
}

int DensityHistogram::locate(double x) const {
    const double lo = bin_edges.front(), hi = bin_edges.back();
    if (x < lo) return 0;
    if (x >= hi) return bins() - 1;
    int b = static_cast<int>((x - lo) / (hi - lo) * bins());
    return std::min(b, bins() - 1);
}

DensityHistogram density_histogram(const std::vector<double>& samples, int bins) {
    if (samples.empty()) throw ParameterError("density_histogram: empty input");
    if (bins < 1) throw ParameterError("density_histogram: bins must be >= 1");
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    double lo = *mn, hi = *mx;
    if (hi - lo < 1e-12) {  // degenerate support: all mass in one bin
        lo -= 0.5;
        hi += 0.5;
    }
    std::vector<double> edges(bins + 1);
    for (int i = 0; i <= bins; ++i) edges[i] = lo + (hi - lo) * i / bins;
    return density_histogram(samples, edges);
}

DensityHistogram density_histogram(const std::vector<double>& samples,
                                   const std::vector<double>& edges) {
    if (samples.empty()) throw ParameterError("density_histogram: empty input");
    if (edges.size() < 2) throw ParameterError("density_histogram: need >= 2 edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i] <= edges[i - 1])
            throw ParameterError("density_histogram: edges must be strictly increasing");

    DensityHistogram h;
    h.bin_edges = edges;
    h.mass.assign(edges.size() - 1, 0.0);
    h.n_samples = static_cast<long>(samples.size());
    for (double x : samples) h.mass[h.locate(x)] += 1.0;
    const double total = std::accumulate(h.mass.begin(), h.mass.end(), 0.0);
    for (double& m : h.mass) m /= total;
    return h;
}

DensityHistogram rebin(const DensityHistogram& h, double lo, double width, int bins) {
    if (width <= 0.0 || bins < 1) throw ParameterError("rebin: bad target grid");
    DensityHistogram out;
    out.bin_edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) out.bin_edges[i] = lo + width * i;
    out.mass.assign(bins, 0.0);
    out.n_samples = h.n_samples;
    const double hi = out.bin_edges.back();

    for (int b = 0; b < h.bins(); ++b) {
        const double a0 = h.bin_edges[b], a1 = h.bin_edges[b + 1];
        const double m = h.mass[b];
        if (m == 0.0) continue;
        const double span = a1 - a0;
        // clip mass outside the target range into the edge bins
        if (a1 <= lo) {
            out.mass[0] += m;
            continue;
        }
        if (a0 >= hi) {
            out.mass[bins - 1] += m;
            continue;
        }
        if (a0 < lo) out.mass[0] += m * (lo - a0) / span;
        if (a1 > hi) out.mass[bins - 1] += m * (a1 - hi) / span;
        const double c0 = std::max(a0, lo), c1 = std::min(a1, hi);
        int b0 = std::min(static_cast<int>((c0 - lo) / width), bins - 1);
        int b1 = std::min(static_cast<int>((c1 - lo) / width), bins - 1);
        for (int t = b0; t <= b1; ++t) {
            const double t0 = std::max(c0, lo + t * width);
            const double t1 = std::min(c1, lo + (t + 1) * width);
            if (t1 > t0) out.mass[t] += m * (t1 - t0) / span;
        }
    }
    return out;
}

DensityHistogram convolve_densities(const std::vector<DensityHistogram>& inputs) {
    if (inputs.size() < 2)
        throw ParameterError("convolve_densities: need at least two densities");

    double w = 0.0;
    for (const DensityHistogram& h : inputs) {
        if (h.bins() < 1 || !(h.width() > 0.0) || !std::isfinite(h.width()))
            throw ParameterError("convolve_densities: degenerate support");
        w = (w == 0.0) ? h.width() : std::min(w, h.width());
    }

    // resample everything to the common width, keeping each input's own origin
    struct Grid {
        double lo;
        std::vector<double> mass;
    };
    std::vector<Grid> grids;
    for (const DensityHistogram& h : inputs) {
        const double lo = h.bin_edges.front();
        const double span = h.bin_edges.back() - lo;
        const int nb = std::max(1, static_cast<int>(std::ceil(span / w - 1e-9)));
        DensityHistogram r = rebin(h, lo, w, nb);
        grids.push_back({lo, r.mass});
    }

    Grid acc = grids[0];
    for (std::size_t g = 1; g < grids.size(); ++g) {
        const Grid& other = grids[g];
        std::vector<double> conv(acc.mass.size() + other.mass.size() - 1, 0.0);
        for (std::size_t i = 0; i < acc.mass.size(); ++i) {
            if (acc.mass[i] == 0.0) continue;
            for (std::size_t j = 0; j < other.mass.size(); ++j)
                conv[i + j] += acc.mass[i] * other.mass[j];
        }
        // bin centers add: center_k = (lo1 + (i+1/2)w) + (lo2 + (j+1/2)w)
        // so the combined left edge is lo1 + lo2 + w/2
        acc.lo = acc.lo + other.lo + 0.5 * w;
        acc.mass = std::move(conv);
    }

    DensityHistogram out;
    out.bin_edges.resize(acc.mass.size() + 1);
    for (std::size_t i = 0; i < out.bin_edges.size(); ++i)
        out.bin_edges[i] = acc.lo + w * static_cast<double>(i);
    out.mass = acc.mass;
    long ns = 0;
    for (const DensityHistogram& h : inputs) ns += h.n_samples;
    out.n_samples = ns;
    const double total = std::accumulate(out.mass.begin(), out.mass.end(), 0.0);
    if (total <= 0.0) throw ParameterError("convolve_densities: zero total mass");
    for (double& m : out.mass) m /= total;
    return out;
}

double l1_distance(const DensityHistogram& a, const DensityHistogram& b) {
    if (a.bins() != b.bins())
        throw ParameterError("l1_distance: histograms must share a grid");
    double s = 0.0;
    for (int i = 0; i < a.bins(); ++i) s += std::abs(a.mass[i] - b.mass[i]);
    return s;
}

std::vector<double> emergent_eigenvalues(const ResourceSpec& spec) {
    spec.validate();
    std::vector<double> out;
    const int n_states = 1 << spec.n_ql;
    out.reserve(n_states);
    for (int mask = 0; mask < n_states; ++mask) {
        double sum = 0.0;
        for (int q = 0; q < spec.n_ql; ++q) {
            const bool excited = (mask >> q) & 1;
            sum += excited ? (spec.k[q] - spec.l[q]) : (spec.k[q] + spec.l[q]);
        }
        out.push_back(sum);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double subspace_angle(const Matrix& u, const Matrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols())
        throw ParameterError("subspace_angle: shape mismatch");
    Eigen::MatrixXd g(u.cols(), v.cols());
    for (int i = 0; i < u.cols(); ++i)
        for (int j = 0; j < v.cols(); ++j) {
            double s = 0.0;
            for (int r = 0; r < u.rows(); ++r) s += u(r, i) * v(r, j);
            g(i, j) = s;
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
    const double smin = std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0);
    return std::acos(std::min(1.0, smin));
}

EnsembleSpectra ensemble_spectra(const ResourceSpec& spec, int n_samples, Exec exec) {
    spec.validate();
    if (n_samples < 1) throw ParameterError("ensemble_spectra: n_samples must be >= 1");

    const RngStream master(spec.seed);
    std::vector<std::vector<double>> prod(n_samples), fact(n_samples);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec == Exec::openmp)
#endif
    for (int s = 0; s < n_samples; ++s) {
        ResourceSpec local = spec;
        std::vector<Matrix> factors =
            sample_single_resources(local, master.child(static_cast<std::uint64_t>(s)));
        std::vector<Spectrum> fs;
        for (const Matrix& f : factors) {
            fs.push_back(full_eigh(f));
            fact[s].insert(fact[s].end(), fs.back().eigenvalues.begin(),
                           fs.back().eigenvalues.end());
        }
        // direct diagonalization of the assembled product
        Spectrum ps = full_eigh(cartesian_product(factors));
        prod[s] = ps.eigenvalues;
    }
#ifndef _OPENMP
    (void)exec;
#endif

    // deterministic merge, independent of thread schedule
    EnsembleSpectra out;
    for (int s = 0; s < n_samples; ++s) {
        out.product_eigenvalues.insert(out.product_eigenvalues.end(), prod[s].begin(),
                                       prod[s].end());
        out.factor_eigenvalues.insert(out.factor_eigenvalues.end(), fact[s].begin(),
                                      fact[s].end());
    }
    return out;
}

}  // namespace qlsync
