#include "qlsync/netgraph.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

#include <nlohmann/json.hpp>

namespace qlsync {

using json = nlohmann::json;

void ResourceSpec::validate() const {
    if (n_g < 2) throw ParameterError("ResourceSpec: n_g must be >= 2");
    if (n_ql < 1) throw ParameterError("ResourceSpec: n_ql must be >= 1");
    if (static_cast<int>(k.size()) != n_ql || static_cast<int>(l.size()) != n_ql)
        throw ParameterError("ResourceSpec: k and l must have n_ql entries");
    for (int q = 0; q < n_ql; ++q) {
        if (k[q] < 1 || k[q] > n_g - 1)
            throw ParameterError("ResourceSpec: need 1 <= k_q <= n_g-1 (bit " +
                                 std::to_string(q + 1) + ")");
        if (static_cast<long long>(n_g) * k[q] % 2 != 0)
            throw ParameterError("ResourceSpec: n_g*k_q must be even (bit " +
                                 std::to_string(q + 1) + ")");
        // l_q = 0 is admitted as the explicit zero coupling (decoupled blocks).
        if (l[q] < 0 || l[q] > n_g)
            throw ParameterError("ResourceSpec: need 0 <= l_q <= n_g (bit " +
                                 std::to_string(q + 1) + ")");
    }
}

std::uint64_t ResourceSpec::total_dim() const {
    std::uint64_t d = 1;
    for (int q = 0; q < n_ql; ++q) {
        const std::uint64_t f = static_cast<std::uint64_t>(2 * n_g);
        if (d > UINT64_MAX / f) return UINT64_MAX;
        d *= f;
    }
    return d;
}

std::string ResourceSpec::to_json_string() const {
    json j;
    j["n_g"] = n_g;
    j["n_ql"] = n_ql;
    j["k"] = k;
    j["l"] = l;
    j["seed"] = seed;
    return j.dump();
}

ResourceSpec ResourceSpec::from_json_string(const std::string& text) {
    json j = json::parse(text);
    ResourceSpec s;
    s.n_g = j.at("n_g").get<int>();
    s.n_ql = j.at("n_ql").get<int>();
    s.k = j.at("k").get<std::vector<int>>();
    s.l = j.at("l").get<std::vector<int>>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.validate();
    return s;
}

namespace {

// One stepwise pairing attempt for a simple k-regular graph. Picks uniformly
// random stub pairs, rejecting self-loops and repeat edges; when random picks
// keep failing, falls back to choosing uniformly among the remaining legal
// pairs, and reports failure when none exists.
bool try_pairing(int n, int k, RngStream& rng, Matrix& adj) {
    adj = Matrix(n, n);
    adj.tag = MatrixTag::adjacency;
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * k);
    for (int v = 0; v < n; ++v)
        for (int s = 0; s < k; ++s) stubs.push_back(v);

    while (!stubs.empty()) {
        const std::size_t m = stubs.size();
        bool placed = false;
        for (int attempt = 0; attempt < 64; ++attempt) {
            const std::size_t i = rng.next_below(m);
            std::size_t j = rng.next_below(m - 1);
            if (j >= i) ++j;
            const int u = stubs[i], v = stubs[j];
            if (u == v || adj(u, v) != 0.0) continue;
            adj(u, v) = adj(v, u) = 1.0;
            const std::size_t hi = std::max(i, j), lo = std::min(i, j);
            stubs[hi] = stubs.back();
            stubs.pop_back();
            stubs[lo] = stubs.back();
            stubs.pop_back();
            placed = true;
            break;
        }
        if (placed) continue;

        // enumerate legal pairs among remaining stubs
        std::vector<std::pair<std::size_t, std::size_t>> legal;
        for (std::size_t i = 0; i + 1 < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (stubs[i] != stubs[j] && adj(stubs[i], stubs[j]) == 0.0)
                    legal.emplace_back(i, j);
        if (legal.empty()) return false;
        const auto [i, j] = legal[rng.next_below(legal.size())];
        adj(stubs[i], stubs[j]) = adj(stubs[j], stubs[i]) = 1.0;
        stubs[j] = stubs.back();
        stubs.pop_back();
        stubs[i] = stubs.back();
        stubs.pop_back();
    }
    return true;
}

}  // namespace

Matrix sample_regular_graph(int n, int k, RngStream& rng, int restart_budget) {
    if (n < 2) throw ParameterError("sample_regular_graph: n must be >= 2");
    if (k < 1 || k > n - 1)
        throw ParameterError("sample_regular_graph: need 1 <= k <= n-1");
    if (static_cast<long long>(n) * k % 2 != 0)
        throw ParameterError("sample_regular_graph: n*k must be even");

    // dense valencies through the complement: uniform k-regular <-> uniform
    // (n-1-k)-regular under G -> complement(G)
    if (k > (n - 1) / 2) {
        const int kc = n - 1 - k;
        Matrix comp;
        if (kc == 0) {
            comp = Matrix(n, n);
        } else {
            comp = sample_regular_graph(n, kc, rng, restart_budget);
        }
        Matrix adj(n, n);
        adj.tag = MatrixTag::adjacency;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (r != c) adj(r, c) = 1.0 - comp(r, c);
        return adj;
    }

    Matrix adj;
    for (int attempt = 0; attempt < restart_budget; ++attempt)
        if (try_pairing(n, k, rng, adj)) return adj;
    throw SamplingError("sample_regular_graph: rejection budget exhausted for n=" +
                        std::to_string(n) + ", k=" + std::to_string(k));
}

namespace {

bool try_bipartite_pairing(int n, int l, RngStream& rng, Matrix& c) {
    c = Matrix(n, n);
    c.tag = MatrixTag::coupling;
    std::vector<int> rows, cols;
    rows.reserve(static_cast<std::size_t>(n) * l);
    cols.reserve(static_cast<std::size_t>(n) * l);
    for (int v = 0; v < n; ++v)
        for (int s = 0; s < l; ++s) {
            rows.push_back(v);
            cols.push_back(v);
        }

    while (!rows.empty()) {
        const std::size_t m = rows.size();
        bool placed = false;
        for (int attempt = 0; attempt < 64; ++attempt) {
            const std::size_t i = rng.next_below(m);
            const std::size_t j = rng.next_below(m);
            const int u = rows[i], v = cols[j];
            if (c(u, v) != 0.0) continue;
            c(u, v) = 1.0;
            rows[i] = rows.back();
            rows.pop_back();
            cols[j] = cols.back();
            cols.pop_back();
            placed = true;
            break;
        }
        if (placed) continue;

        std::vector<std::pair<std::size_t, std::size_t>> legal;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (c(rows[i], cols[j]) == 0.0) legal.emplace_back(i, j);
        if (legal.empty()) return false;
        const auto [i, j] = legal[rng.next_below(legal.size())];
        c(rows[i], cols[j]) = 1.0;
        rows[i] = rows.back();
        rows.pop_back();
        cols[j] = cols.back();
        cols.pop_back();
    }
    return true;
}

}  // namespace

Matrix sample_biregular_coupling(int n, int l, RngStream& rng, int restart_budget) {
    if (n < 1) throw ParameterError("sample_biregular_coupling: n must be >= 1");
    if (l < 0 || l > n)
        throw ParameterError("sample_biregular_coupling: need 0 <= l <= n");
    if (l == 0) {
        Matrix z(n, n);
        z.tag = MatrixTag::coupling;
        return z;
    }
    if (l > n / 2) {
        // complement of an (n-l)-biregular coupling
        Matrix comp = sample_biregular_coupling(n, n - l, rng, restart_budget);
        Matrix c(n, n);
        c.tag = MatrixTag::coupling;
        for (int r = 0; r < n; ++r)
            for (int cc = 0; cc < n; ++cc) c(r, cc) = 1.0 - comp(r, cc);
        return c;
    }
    Matrix c;
    for (int attempt = 0; attempt < restart_budget; ++attempt)
        if (try_bipartite_pairing(n, l, rng, c)) return c;
    throw SamplingError("sample_biregular_coupling: rejection budget exhausted for n=" +
                        std::to_string(n) + ", l=" + std::to_string(l));
}

Matrix build_single_resource(const Matrix& a1, const Matrix& a2, const Matrix& c) {
    const int n = a1.rows();
    if (!a1.square() || !a2.square() || !c.square() || a2.rows() != n || c.rows() != n)
        throw ParameterError("build_single_resource: blocks must all be n_g x n_g");
    if (!a1.is_symmetric() || !a2.is_symmetric())
        throw ParameterError("build_single_resource: subgraph adjacencies must be symmetric");

    Matrix r(2 * n, 2 * n);
    r.tag = MatrixTag::resource;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            r(i, j) = a1(i, j);
            r(n + i, n + j) = a2(i, j);
            r(i, n + j) = -c(i, j);
            r(n + j, i) = -c(i, j);
        }
    return r;
}

std::vector<Matrix> sample_single_resources(const ResourceSpec& spec, RngStream stream) {
    spec.validate();
    std::vector<Matrix> out;
    out.reserve(spec.n_ql);
    for (int q = 0; q < spec.n_ql; ++q) {
        RngStream bit = stream.child(static_cast<std::uint64_t>(q));
        RngStream ra = bit.child(0), rb = bit.child(1), rc = bit.child(2);
        Matrix a1 = sample_regular_graph(spec.n_g, spec.k[q], ra);
        Matrix a2 = sample_regular_graph(spec.n_g, spec.k[q], rb);
        Matrix c = sample_biregular_coupling(spec.n_g, spec.l[q], rc);
        out.push_back(build_single_resource(a1, a2, c));
    }
    return out;
}

Matrix cartesian_product(const std::vector<Matrix>& resources, std::uint64_t cap_bytes) {
    if (resources.empty()) throw ParameterError("cartesian_product: no factors");
    std::uint64_t dim = 1;
    for (const Matrix& r : resources) {
        if (!r.square()) throw ParameterError("cartesian_product: factors must be square");
        if (!r.is_symmetric())
            throw ParameterError("cartesian_product: factors must be symmetric");
        const std::uint64_t d = static_cast<std::uint64_t>(r.rows());
        if (dim > UINT64_MAX / d) dim = UINT64_MAX;  // saturate, fails the cap below
        else dim *= d;
    }
    const std::uint64_t bytes =
        (dim >= (1ULL << 30)) ? UINT64_MAX : dim * dim * sizeof(double);
    if (bytes > cap_bytes) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "cartesian_product: %llu-dim dense product needs %llu bytes "
                      "(cap %llu); raise the memory cap to override",
                      static_cast<unsigned long long>(dim),
                      static_cast<unsigned long long>(bytes),
                      static_cast<unsigned long long>(cap_bytes));
        throw CapacityError(msg, bytes, cap_bytes);
    }

    const int n = static_cast<int>(dim);
    Matrix product(n, n);
    product.tag = MatrixTag::resource;

    const int n_fac = static_cast<int>(resources.size());
    int left = 1;
    std::vector<int> dims(n_fac);
    for (int q = 0; q < n_fac; ++q) dims[q] = resources[q].rows();
    std::vector<int> rights(n_fac, 1);
    for (int q = n_fac - 2; q >= 0; --q) rights[q] = rights[q + 1] * dims[q + 1];

    for (int q = 0; q < n_fac; ++q) {
        const Matrix& rq = resources[q];
        const int d = dims[q];
        const int right = rights[q];
        for (int a = 0; a < left; ++a)
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) {
                    const double v = rq(r, c);
                    if (v == 0.0) continue;
                    const long long row0 = (static_cast<long long>(a) * d + r) * right;
                    const long long col0 = (static_cast<long long>(a) * d + c) * right;
                    for (int b = 0; b < right; ++b)
                        product(static_cast<int>(row0 + b), static_cast<int>(col0 + b)) += v;
                }
        left *= d;
    }
    return product;
}

}  // namespace qlsync
