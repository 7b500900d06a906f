#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "kdq/errors.hpp"

namespace kdq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Default tolerances; every operation that uses one takes it as an
// overridable parameter.
inline constexpr double kTolHerm = 1e-10;
inline constexpr double kTolNum = 1e-10;
inline constexpr double kTolPsd = 1e-10;
inline constexpr double kTolDegen = 1e-8;

inline bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

inline void require_square_finite(const ComplexMatrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw InvalidMatrix(std::string(who) + ": matrix must be square and nonempty");
    if (!all_finite(m))
        throw InvalidMatrix(std::string(who) + ": matrix has non-finite entries");
}

// Frobenius distance from the adjoint; zero iff Hermitian.
inline double hermiticity_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).norm();
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kTolHerm) {
    return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

// Hilbert-Schmidt pairing Tr(X^dag Y); conjugate-linear in the first slot.
inline Complex hs_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw DimensionMismatch("hs_inner: operand shapes differ");
    return (x.adjoint() * y).trace();
}

// Trace norm = sum of singular values.
inline double trace_norm(const ComplexMatrix& m) {
    return m.jacobiSvd().singularValues().sum();
}

inline ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

inline ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace kdq
