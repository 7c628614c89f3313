#include "qlsync/qlgates.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace qlsync {

using json = nlohmann::json;

std::string gate_name(GateKind g) {
    switch (g) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

GateKind gate_from_name(const std::string& name) {
    if (name == "H") return GateKind::H;
    if (name == "X") return GateKind::X;
    if (name == "Z") return GateKind::Z;
    if (name == "CNOT") return GateKind::CNOT;
    throw ParameterError("unsupported gate kind: " + name);
}

void GateOp::validate(int n_ql) const {
    const std::size_t want = (kind == GateKind::CNOT) ? 2 : 1;
    if (targets.size() != want)
        throw ParameterError("gate " + gate_name(kind) + ": expected " +
                             std::to_string(want) + " target(s)");
    for (int t : targets)
        if (t < 1 || t > n_ql)
            throw ParameterError("gate " + gate_name(kind) + ": target out of range");
    if (kind == GateKind::CNOT && targets[0] == targets[1])
        throw ParameterError("CNOT: control and target must differ");
}

RVec psi_down(int n_g) {
    const double v = 1.0 / std::sqrt(2.0 * n_g);
    RVec psi(2 * n_g, v);
    for (int i = n_g; i < 2 * n_g; ++i) psi[i] = -v;
    return psi;
}

RVec psi_up(int n_g) {
    const double v = -1.0 / std::sqrt(2.0 * n_g);
    return RVec(2 * n_g, v);
}

RVec ql_basis_state(int n_g, const std::vector<bool>& sigma) {
    if (sigma.empty()) throw ParameterError("ql_basis_state: empty bit pattern");
    RVec state{1.0};
    for (bool up : sigma) state = kron(state, up ? psi_up(n_g) : psi_down(n_g));
    return state;
}

namespace {

// Per-bit computational-basis factor: (1/sqrt(2)) [1 -1; -1 -1] (x) 1_{N_G}.
Matrix cb_factor(int n_g) {
    const int n = n_g;
    const double s = 1.0 / std::sqrt(2.0);
    Matrix w(2 * n, 2 * n);
    w.tag = MatrixTag::unitary_image;
    for (int i = 0; i < n; ++i) {
        w(i, i) = s;
        w(i, n + i) = -s;
        w(n + i, i) = -s;
        w(n + i, n + i) = -s;
    }
    return w;
}

// 2x2 gate in the computational basis.
Matrix gate_block(GateKind g) {
    Matrix v(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    switch (g) {
        case GateKind::H:
            v(0, 0) = s; v(0, 1) = s;
            v(1, 0) = s; v(1, 1) = -s;
            break;
        case GateKind::X:
            v(0, 1) = 1.0; v(1, 0) = 1.0;
            break;
        case GateKind::Z:
            v(0, 0) = 1.0; v(1, 1) = -1.0;
            break;
        default:
            throw ParameterError("gate_block: not a single-bit gate");
    }
    return v;
}

// Single-bit (2 n_g)-dim unitary for a gate: V_cb (V_g (x) 1) V_cb.
Matrix single_bit_gate(GateKind g, int n_g) {
    const Matrix w = cb_factor(n_g);
    const Matrix embedded = kron(gate_block(g), Matrix::identity(n_g));
    Matrix u = matmul(matmul(w, embedded), w);
    u.tag = MatrixTag::unitary_image;
    return u;
}

Matrix projector_block(bool sigma_up, int n_g) {
    Matrix p(2 * n_g, 2 * n_g);
    const double sgn = sigma_up ? 1.0 : -1.0;
    for (int i = 0; i < n_g; ++i) {
        p(i, i) = 0.5;
        p(n_g + i, n_g + i) = 0.5;
        p(i, n_g + i) = 0.5 * sgn;
        p(n_g + i, i) = 0.5 * sgn;
    }
    return p;
}

Matrix kron_chain(const std::vector<Matrix>& factors) {
    Matrix out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
    return out;
}

Matrix embed_at(const Matrix& op, int q, int n_ql, int dim_per_bit) {
    std::vector<Matrix> factors;
    for (int p = 1; p <= n_ql; ++p)
        factors.push_back(p == q ? op : Matrix::identity(dim_per_bit));
    return kron_chain(factors);
}

}  // namespace

Matrix computational_basis_map(const ResourceSpec& spec) {
    spec.validate();
    Matrix u = cb_factor(spec.n_g);
    Matrix w = cb_factor(spec.n_g);
    for (int q = 1; q < spec.n_ql; ++q) u = kron(u, w);
    u.tag = MatrixTag::unitary_image;
    return u;
}

Matrix gate_unitary(const GateOp& op, const ResourceSpec& spec) {
    spec.validate();
    op.validate(spec.n_ql);
    const int d = 2 * spec.n_g;

    if (op.kind != GateKind::CNOT) {
        Matrix u = embed_at(single_bit_gate(op.kind, spec.n_g), op.targets[0],
                            spec.n_ql, d);
        u.tag = MatrixTag::unitary_image;
        return u;
    }

    // CNOT(c -> t): P_down at control (x) identity  +  P_up at control (x) X at target
    const int c = op.targets[0], t = op.targets[1];
    std::vector<Matrix> term1, term2;
    for (int p = 1; p <= spec.n_ql; ++p) {
        term1.push_back(p == c ? projector_block(false, spec.n_g) : Matrix::identity(d));
        if (p == c) term2.push_back(projector_block(true, spec.n_g));
        else if (p == t) term2.push_back(single_bit_gate(GateKind::X, spec.n_g));
        else term2.push_back(Matrix::identity(d));
    }
    Matrix u1 = kron_chain(term1), u2 = kron_chain(term2);
    Matrix u(u1.rows(), u1.cols());
    for (int r = 0; r < u.rows(); ++r)
        for (int col = 0; col < u.cols(); ++col) u(r, col) = u1(r, col) + u2(r, col);
    u.tag = MatrixTag::unitary_image;
    return u;
}

Matrix projector(bool sigma_up, const ResourceSpec& spec, int q) {
    spec.validate();
    if (q < 1 || q > spec.n_ql) throw ParameterError("projector: bit index out of range");
    return embed_at(projector_block(sigma_up, spec.n_g), q, spec.n_ql, 2 * spec.n_g);
}

void apply_single_bit_op(const Matrix& op2n, int q, int n_ql, CVec& x) {
    const int d = op2n.rows();
    long long left = 1, right = 1;
    for (int p = 1; p < q; ++p) left *= d;
    for (int p = q + 1; p <= n_ql; ++p) right *= d;
    if (static_cast<long long>(x.size()) != left * d * right)
        throw ParameterError("apply_single_bit_op: dimension mismatch");

    CVec slice(d), out(d);
    for (long long a = 0; a < left; ++a)
        for (long long b = 0; b < right; ++b) {
            for (int i = 0; i < d; ++i) slice[i] = x[(a * d + i) * right + b];
            for (int i = 0; i < d; ++i) {
                Cx acc(0.0, 0.0);
                const double* row = op2n.data() + static_cast<std::size_t>(i) * d;
                for (int j = 0; j < d; ++j) acc += row[j] * slice[j];
                out[i] = acc;
            }
            for (int i = 0; i < d; ++i) x[(a * d + i) * right + b] = out[i];
        }
}

void apply_cnot_op(const Matrix& proj_down, const Matrix& proj_up, const Matrix& x_op,
                   int control, int target, int n_ql, CVec& x) {
    CVec down_part = x;
    apply_single_bit_op(proj_down, control, n_ql, down_part);
    CVec up_part = x;
    apply_single_bit_op(proj_up, control, n_ql, up_part);
    apply_single_bit_op(x_op, target, n_ql, up_part);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = down_part[i] + up_part[i];
}

CVec Circuit::apply(const CVec& x) const {
    CVec y = x;
    for (const GateOp& op : ops) {
        if (op.kind == GateKind::CNOT) {
            apply_cnot_op(projector_block(false, spec.n_g), projector_block(true, spec.n_g),
                          single_bit_gate(GateKind::X, spec.n_g), op.targets[0],
                          op.targets[1], spec.n_ql, y);
        } else {
            apply_single_bit_op(single_bit_gate(op.kind, spec.n_g), op.targets[0],
                                spec.n_ql, y);
        }
    }
    return y;
}

CVec Circuit::apply_adjoint(const CVec& x) const {
    // every supported gate unitary is real symmetric, so the adjoint is the
    // same gates in reverse order
    CVec y = x;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        const GateOp& op = *it;
        if (op.kind == GateKind::CNOT) {
            apply_cnot_op(projector_block(false, spec.n_g), projector_block(true, spec.n_g),
                          single_bit_gate(GateKind::X, spec.n_g), op.targets[0],
                          op.targets[1], spec.n_ql, y);
        } else {
            apply_single_bit_op(single_bit_gate(op.kind, spec.n_g), op.targets[0],
                                spec.n_ql, y);
        }
    }
    return y;
}

std::string Circuit::to_json_string() const {
    json arr = json::array();
    for (const GateOp& op : ops) {
        json g;
        g["gate"] = gate_name(op.kind);
        g["targets"] = op.targets;
        arr.push_back(g);
    }
    return arr.dump();
}

Circuit make_circuit(std::vector<GateOp> ops, const ResourceSpec& spec, bool materialize) {
    spec.validate();
    for (const GateOp& op : ops) op.validate(spec.n_ql);

    Circuit c;
    c.ops = std::move(ops);
    c.spec = spec;
    if (materialize) {
        const std::uint64_t dim = spec.total_dim();
        if (dim * dim * sizeof(double) > kDefaultMemoryCapBytes)
            throw CapacityError("make_circuit: dense unitary exceeds memory cap; "
                                "use the matrix-free apply path",
                                dim * dim * sizeof(double), kDefaultMemoryCapBytes);
        Matrix u = Matrix::identity(static_cast<int>(dim));
        for (const GateOp& op : c.ops) u = matmul(gate_unitary(op, spec), u);
        u.tag = MatrixTag::unitary_image;
        c.unitary = std::move(u);
    }
    return c;
}

Circuit circuit_from_json_string(const std::string& text, const ResourceSpec& spec,
                                 bool materialize) {
    json arr = json::parse(text);
    if (!arr.is_array()) throw ParameterError("circuit JSON must be an array of gates");
    std::vector<GateOp> ops;
    for (const json& g : arr) {
        GateOp op;
        op.kind = gate_from_name(g.at("gate").get<std::string>());
        op.targets = g.at("targets").get<std::vector<int>>();
        ops.push_back(op);
    }
    return make_circuit(std::move(ops), spec, materialize);
}

Circuit bell_circuit(const ResourceSpec& spec, bool materialize) {
    if (spec.n_ql != 2)
        throw ParameterError("bell_circuit: requires exactly 2 QL bits");
    return make_circuit({{GateKind::H, {1}}, {GateKind::CNOT, {1, 2}}}, spec, materialize);
}

Matrix conjugate_resource(const Matrix& resource, const Circuit& circuit) {
    const Matrix& u = circuit.unitary;
    if (u.rows() == 0)
        throw ParameterError("conjugate_resource: circuit has no materialized unitary");
    if (resource.rows() != u.rows() || !resource.square())
        throw ParameterError("conjugate_resource: dimension mismatch");
    Matrix out = matmul(matmul(u, resource), u.transposed());
    out.tag = MatrixTag::resource;
    if (out.symmetry_defect() > 1e-10)
        throw ValidationError("conjugate_resource: result lost Hermiticity");
    // clean the rounding asymmetry so downstream exact checks stay sharp
    for (int r = 0; r < out.rows(); ++r)
        for (int c = r + 1; c < out.cols(); ++c) {
            const double v = 0.5 * (out(r, c) + out(c, r));
            out(r, c) = out(c, r) = v;
        }
    return out;
}

}  // namespace qlsync
