#pragma once

// Random regular graphs and block network resources.
//
// A single-bit resource couples two k-regular subgraphs A and B on N_G nodes
// through an l-biregular matrix C with a sign flip:
//
//     R = [  A  -C ]
//         [ -C^T B ]
//
// The uniform vectors (a,-a)/sqrt(2) and (a,a)/sqrt(2), a = 1/sqrt(N_G),
// are exact eigenvectors with eigenvalues k+l and k-l. Multi-bit resources
// are Kronecker sums of single-bit ones, so their spectra are sum-sets of
// the factor spectra.

#include <cstdint>
#include <string>
#include <vector>

#include "qlsync/matrix.hpp"
#include "qlsync/rng.hpp"

namespace qlsync {

struct ResourceSpec {
    int n_g = 0;                 // nodes per subgraph
    int n_ql = 0;                // number of QL bits
    std::vector<int> k;          // diagonal valencies, one per bit
    std::vector<int> l;          // cross-subgraph valencies, one per bit
    std::uint64_t seed = 0;

    // throws ParameterError on infeasible valencies
    void validate() const;

    // (2 n_g)^n_ql
    std::uint64_t total_dim() const;

    std::string to_json_string() const;
    static ResourceSpec from_json_string(const std::string& text);
};

inline constexpr int kDefaultRestartBudget = 10000;
inline constexpr std::uint64_t kDefaultMemoryCapBytes = 8ULL << 30;  // 8 GiB

// Uniform-ish simple k-regular graph on n nodes (stepwise pairing with
// rejection of self-loops/multi-edges; full restart when no legal pair
// remains). Dense valencies are sampled through the complement.
Matrix sample_regular_graph(int n, int k, RngStream& rng,
                            int restart_budget = kDefaultRestartBudget);

// 0/1 matrix with all row and column sums equal to l (an l-regular bipartite
// coupling between the two subgraphs); not symmetric in general.
Matrix sample_biregular_coupling(int n, int l, RngStream& rng,
                                 int restart_budget = kDefaultRestartBudget);

// Assemble [[A1, -C], [-C^T, A2]].
Matrix build_single_resource(const Matrix& a1, const Matrix& a2, const Matrix& c);

// Sample the full set of single-bit resources for a spec. Per-bit streams are
// derived from `stream` by bit index, so factor q is reproducible on its own.
std::vector<Matrix> sample_single_resources(const ResourceSpec& spec, RngStream stream);
inline std::vector<Matrix> sample_single_resources(const ResourceSpec& spec) {
    return sample_single_resources(spec, RngStream(spec.seed));
}

// Kronecker sum  sum_q  1 x ... x R_q x ... x 1  (dense).
// Throws CapacityError when the result would exceed cap_bytes.
Matrix cartesian_product(const std::vector<Matrix>& resources,
                         std::uint64_t cap_bytes = kDefaultMemoryCapBytes);

}  // namespace qlsync
