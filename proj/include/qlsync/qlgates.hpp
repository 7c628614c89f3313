#pragma once

// QL gate machinery: computational-basis map, gate unitaries, projectors,
// circuits, and gate-conjugated resources.
//
// Basis convention. The single-bit basis states are
//     psi_down = (a, -a)/sqrt(2)        eigenvalue k+l
//     psi_up   = -(a,  a)/sqrt(2)       eigenvalue k-l
// with a the uniform unit vector on N_G entries. The computational-basis map
// uses the per-bit factor
//     V_cb = (1/sqrt(2)) [ 1 -1 ; -1 -1 ]  (x)  1_{N_G}
// (the Hadamard conjugated by Z), the unique orthogonal involution sending
// psi_down -> (1_{N_G}, 0) and psi_up -> (0, 1_{N_G}) blockwise. The plain
// Hadamard factor would send psi_down to the *second* block; the sign flip in
// psi_up absorbs the mismatch so that both block images come out positive.
// With V_Z = diag(1, -1), the projectors (1 +/- U_Z)/2 act as
//     P_down = (1/2) [ 1 -1 ; -1  1 ],   P_up = (1/2) [ 1 1 ; 1 1 ]
// blockwise, projecting exactly onto the psi_down / psi_up component of a bit.
//
// Gates act by conjugation on resources: R -> U R U^T, which preserves the
// spectrum and rotates the emergent eigenvectors.

#include <string>
#include <vector>

#include "qlsync/matrix.hpp"
#include "qlsync/netgraph.hpp"

namespace qlsync {

enum class GateKind { H, X, Z, CNOT };

std::string gate_name(GateKind g);
GateKind gate_from_name(const std::string& name);

struct GateOp {
    GateKind kind;
    std::vector<int> targets;  // 1-based bit indices; (control, target) for CNOT

    void validate(int n_ql) const;
};

// Single-bit basis states (length 2*n_g).
RVec psi_down(int n_g);
RVec psi_up(int n_g);
// Tensor-product basis state for bit pattern sigma (false = down, true = up).
RVec ql_basis_state(int n_g, const std::vector<bool>& sigma);

// Full computational-basis map; involutory orthogonal, dim (2 n_g)^n_ql.
Matrix computational_basis_map(const ResourceSpec& spec);

// Dense unitary for one gate embedded at its target bit(s).
Matrix gate_unitary(const GateOp& op, const ResourceSpec& spec);

// Projector onto the span of basis vectors whose bit-q factor is psi_sigma.
// sigma: false = down, true = up. q is 1-based.
Matrix projector(bool sigma_up, const ResourceSpec& spec, int q);

struct Circuit {
    std::vector<GateOp> ops;
    ResourceSpec spec;
    Matrix unitary;  // right-to-left product U_{g_M} ... U_{g_1}

    // Matrix-free application of the whole circuit to a state vector,
    // contracting along target-bit axes only. Usable beyond the dense cap.
    CVec apply(const CVec& x) const;
    CVec apply_adjoint(const CVec& x) const;

    std::string to_json_string() const;
};

Circuit make_circuit(std::vector<GateOp> ops, const ResourceSpec& spec,
                     bool materialize = true);
Circuit circuit_from_json_string(const std::string& text, const ResourceSpec& spec,
                                 bool materialize = true);

// Hadamard on bit 1 followed by CNOT(1 -> 2); requires n_ql == 2.
Circuit bell_circuit(const ResourceSpec& spec, bool materialize = true);

// R -> U R U^T. Validates shape and Hermiticity of the result.
Matrix conjugate_resource(const Matrix& resource, const Circuit& circuit);

// Matrix-free single-gate application helpers (exposed for tests and for the
// large-N path).
void apply_single_bit_op(const Matrix& op2n, int q, int n_ql, CVec& x);
void apply_cnot_op(const Matrix& proj_down, const Matrix& proj_up, const Matrix& x_op,
                   int control, int target, int n_ql, CVec& x);

}  // namespace qlsync
