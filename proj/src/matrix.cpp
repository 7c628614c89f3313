#include "qlsync/matrix.hpp"

#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qlsync {

namespace {
Exec g_default_exec = [] {
#ifdef _OPENMP
    if (const char* v = std::getenv("QLSYNC_SERIAL"); v && v[0] == '1') return Exec::serial;
    return Exec::openmp;
#else
    return Exec::serial;
#endif
}();
}  // namespace

Exec default_exec() { return g_default_exec; }
void set_default_exec(Exec e) { g_default_exec = e; }

int active_thread_count() {
#ifdef _OPENMP
    return g_default_exec == Exec::openmp ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double Matrix::symmetry_defect() const {
    if (!square()) throw ValidationError("symmetry_defect: matrix not square");
    double worst = 0.0;
    for (int r = 0; r < rows_; ++r)
        for (int c = r + 1; c < cols_; ++c)
            worst = std::max(worst, std::abs((*this)(r, c) - (*this)(c, r)));
    return worst;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    t.tag = tag;
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

std::vector<CooEntry> Matrix::to_coo(double drop_tol) const {
    std::vector<CooEntry> out;
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            if (std::abs((*this)(r, c)) > drop_tol) out.push_back({r, c, (*this)(r, c)});
    return out;
}

void matvec(const Matrix& a, const CVec& x, CVec& y, Exec exec) {
    const int n = a.rows();
    const int m = a.cols();
    if (static_cast<int>(x.size()) != m)
        throw ParameterError("matvec: dimension mismatch");
    y.assign(n, Cx(0.0, 0.0));
    const double* ad = a.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::openmp && n > 63)
#endif
    for (int r = 0; r < n; ++r) {
        const double* row = ad + static_cast<std::size_t>(r) * m;
        double re = 0.0, im = 0.0;
        for (int c = 0; c < m; ++c) {
            re += row[c] * x[c].real();
            im += row[c] * x[c].imag();
        }
        y[r] = Cx(re, im);
    }
#ifndef _OPENMP
    (void)exec;
#endif
}

RVec matvec(const Matrix& a, const RVec& x) {
    const int n = a.rows();
    const int m = a.cols();
    if (static_cast<int>(x.size()) != m)
        throw ParameterError("matvec: dimension mismatch");
    RVec y(n, 0.0);
    for (int r = 0; r < n; ++r) {
        const double* row = a.data() + static_cast<std::size_t>(r) * m;
        double acc = 0.0;
        for (int c = 0; c < m; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

Matrix matmul(const Matrix& a, const Matrix& b, Exec exec) {
    if (a.cols() != b.rows()) throw ParameterError("matmul: dimension mismatch");
    Matrix c(a.rows(), b.cols());
    const int n = a.rows(), k = a.cols(), m = b.cols();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::openmp && n > 15)
#endif
    for (int i = 0; i < n; ++i) {
        double* crow = c.data() + static_cast<std::size_t>(i) * m;
        for (int p = 0; p < k; ++p) {
            const double apv = a(i, p);
            if (apv == 0.0) continue;
            const double* brow = b.data() + static_cast<std::size_t>(p) * m;
            for (int j = 0; j < m; ++j) crow[j] += apv * brow[j];
        }
    }
#ifndef _OPENMP
    (void)exec;
#endif
    return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ar = 0; ar < a.rows(); ++ar)
        for (int ac = 0; ac < a.cols(); ++ac) {
            const double v = a(ar, ac);
            if (v == 0.0) continue;
            for (int br = 0; br < b.rows(); ++br)
                for (int bc = 0; bc < b.cols(); ++bc)
                    c(ar * b.rows() + br, ac * b.cols() + bc) = v * b(br, bc);
        }
    return c;
}

CVec kron(const CVec& a, const CVec& b) {
    CVec c(a.size() * b.size());
    std::size_t idx = 0;
    for (const Cx& av : a)
        for (const Cx& bv : b) c[idx++] = av * bv;
    return c;
}

RVec kron(const RVec& a, const RVec& b) {
    RVec c(a.size() * b.size());
    std::size_t idx = 0;
    for (double av : a)
        for (double bv : b) c[idx++] = av * bv;
    return c;
}

double norm2(const CVec& x) {
    double s = 0.0;
    for (const Cx& v : x) s += std::norm(v);
    return std::sqrt(s);
}

double norm2(const RVec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

Cx inner(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) throw ParameterError("inner: dimension mismatch");
    Cx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double inner(const RVec& a, const RVec& b) {
    if (a.size() != b.size()) throw ParameterError("inner: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

CVec to_complex(const RVec& x) {
    CVec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = Cx(x[i], 0.0);
    return y;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ParameterError("max_abs_diff: shape mismatch");
    double worst = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
            worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
    return worst;
}

double frob(const Matrix& a) {
    double s = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) s += a(r, c) * a(r, c);
    return std::sqrt(s);
}

}  // namespace qlsync
