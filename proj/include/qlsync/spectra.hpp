#pragma once

// Eigendecomposition and spectral-density utilities.
//
// Conventions: eigenvalues are sorted in decreasing order; eigenvectors form
// an orthonormal set (orthonormalization happens only inside degenerate
// subspaces, courtesy of the dense solver); each eigenvector's global phase
// is fixed so that its largest-magnitude entry (lowest index on ties) is
// real positive. Partial spectra come from restarted Lanczos with full
// reorthogonalization and locking.

#include <cstdint>
#include <functional>
#include <vector>

#include "qlsync/matrix.hpp"
#include "qlsync/netgraph.hpp"

namespace qlsync {

struct Spectrum {
    std::vector<double> eigenvalues;  // descending
    Matrix eigenvectors;              // source_dim x n_pairs, columns aligned
    bool complete = false;
    int source_dim = 0;

    int count() const { return static_cast<int>(eigenvalues.size()); }
    RVec eigenvector(int i) const;
};

// Dense full decomposition of a real-symmetric matrix.
// Throws ValidationError when the symmetry defect exceeds hermitian_tol.
Spectrum full_eigh(const Matrix& h, double hermitian_tol = 1e-12);

struct LanczosOptions {
    double tol = 1e-10;       // residual tolerance |beta * s_last|
    int max_restarts = 500;
    int block_size = 0;       // Krylov depth per round; 0 = automatic
    std::uint64_t seed = 0x1ca1c0de;
};

// Top k_top algebraically largest eigenpairs via restarted Lanczos.
// The matrix enters only through matvecs, so sparse operators work too.
Spectrum top_k_eigs(const Matrix& h, int k_top, const LanczosOptions& opts = {});
Spectrum top_k_eigs(const std::function<void(const RVec&, RVec&)>& apply, int dim,
                    int k_top, const LanczosOptions& opts = {});

// Exact spectrum of a Kronecker sum from its factor spectra: eigenvalues are
// all sums of one eigenvalue per factor, eigenvectors the matching Kronecker
// columns. Equivalent to full_eigh of cartesian_product(factors) up to basis
// choice inside degenerate subspaces, at a fraction of the cost.
Spectrum product_spectrum(const std::vector<Spectrum>& factors,
                          std::uint64_t cap_bytes = kDefaultMemoryCapBytes);

struct DensityHistogram {
    std::vector<double> bin_edges;  // size bins+1, strictly increasing
    std::vector<double> mass;       // normalized to 1
    long n_samples = 0;

    int bins() const { return static_cast<int>(mass.size()); }
    double width() const { return bin_edges[1] - bin_edges[0]; }
    double center(int b) const { return 0.5 * (bin_edges[b] + bin_edges[b + 1]); }
    // Bin index containing x; values at the upper edge land in the last bin.
    int locate(double x) const;
};

DensityHistogram density_histogram(const std::vector<double>& samples, int bins);
DensityHistogram density_histogram(const std::vector<double>& samples,
                                   const std::vector<double>& edges);

// Linear rebinning onto a uniform target grid (mass uniform within a source bin).
DensityHistogram rebin(const DensityHistogram& h, double lo, double width, int bins);

// Discrete convolution of >= 2 densities after resampling to a common uniform
// grid; support is the Minkowski sum of input supports.
DensityHistogram convolve_densities(const std::vector<DensityHistogram>& inputs);

double l1_distance(const DensityHistogram& a, const DensityHistogram& b);

// All emergent eigenvalues sum_q (k_q +/- l_q) with multiplicity, descending.
std::vector<double> emergent_eigenvalues(const ResourceSpec& spec);

// Largest principal angle between the column spans of two orthonormal blocks.
double subspace_angle(const Matrix& u, const Matrix& v);

// Ensemble spectral densities for a spec: per-sample fresh graphs from
// child streams. Returns per-sample eigenvalue sets of the full product
// (direct diagonalization) and of the single-bit factors.
struct EnsembleSpectra {
    std::vector<double> product_eigenvalues;
    std::vector<double> factor_eigenvalues;
};
EnsembleSpectra ensemble_spectra(const ResourceSpec& spec, int n_samples,
                                 Exec exec = default_exec());

}  // namespace qlsync
