#pragma once

// Dense real matrices and complex state vectors.
//
// Everything the network construction produces (adjacencies, resources,
// gate unitaries, projectors) is real; Hermitian means real-symmetric here.
// States of the oscillator dynamics are complex vectors. Hot loops come in a
// serial reference version and an OpenMP version selected by Exec.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qlsync/errors.hpp"

namespace qlsync {

using Cx = std::complex<double>;
using CVec = std::vector<Cx>;
using RVec = std::vector<double>;

enum class MatrixTag { adjacency, coupling, resource, generator, unitary_image };

enum class Exec { serial, openmp };

// Library-wide default execution policy (set from CLI/env at startup).
Exec default_exec();
void set_default_exec(Exec e);
int active_thread_count();

struct CooEntry {
    int row;
    int col;
    double value;
};

class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    MatrixTag tag = MatrixTag::adjacency;

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    // max |A - A^T|; 0 for non-square never applies (throws).
    double symmetry_defect() const;
    bool is_symmetric(double tol = 1e-12) const { return symmetry_defect() <= tol; }

    Matrix transposed() const;
    std::vector<CooEntry> to_coo(double drop_tol = 0.0) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// y = A x for complex x (two real accumulations per row).
void matvec(const Matrix& a, const CVec& x, CVec& y, Exec exec = default_exec());
RVec matvec(const Matrix& a, const RVec& x);

// C = A B (plain triple loop, OpenMP over rows).
Matrix matmul(const Matrix& a, const Matrix& b, Exec exec = default_exec());

// Kronecker products; flattening is big-endian (first factor slowest index).
Matrix kron(const Matrix& a, const Matrix& b);
CVec kron(const CVec& a, const CVec& b);
RVec kron(const RVec& a, const RVec& b);

double norm2(const CVec& x);
double norm2(const RVec& x);
Cx inner(const CVec& a, const CVec& b);  // conjugate-linear in the first argument
double inner(const RVec& a, const RVec& b);

CVec to_complex(const RVec& x);

double max_abs_diff(const Matrix& a, const Matrix& b);

// Frobenius norm.
double frob(const Matrix& a);

}  // namespace qlsync
