#pragma once

#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kdq/matrix.hpp"

namespace kdq {

// A Hermitian operator together with its nondegenerate eigensystem.
// Eigenvalues are sorted ascending; each eigenvector's global phase is
// fixed by making its largest-magnitude component real positive, so a
// given matrix always decomposes to the same bytes.
struct Observable {
    ComplexMatrix matrix;
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;  // columns, orthonormal
    std::vector<ComplexMatrix> projectors;

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    ComplexVector eigenvector(int i) const { return eigenvectors.col(i); }
    const ComplexMatrix& projector(int i) const { return projectors[i]; }
};

inline ComplexVector fix_phase(ComplexVector v) {
    int imax = 0;
    double best = std::abs(v(0));
    for (int i = 1; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    v *= std::conj(v(imax)) / best;
    return v;
}

// Assemble an Observable from a known eigensystem (columns of `vectors`
// orthonormal, `values` strictly ascending). Phases are normalized here.
inline Observable observable_from_eigensystem(RealVector values, ComplexMatrix vectors) {
    const int d = static_cast<int>(values.size());
    Observable obs;
    obs.eigenvalues = std::move(values);
    obs.eigenvectors = ComplexMatrix(d, d);
    obs.projectors.reserve(d);
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const ComplexVector v = fix_phase(vectors.col(i));
        obs.eigenvectors.col(i) = v;
        obs.projectors.push_back(v * v.adjoint());
        m += obs.eigenvalues(i) * obs.projectors.back();
    }
    obs.matrix = std::move(m);
    return obs;
}

inline Observable spectral_decompose(const ComplexMatrix& h,
                                     double tol_degen = kTolDegen,
                                     double tol_herm = kTolHerm) {
    require_square_finite(h, "spectral_decompose");
    const double defect = hermiticity_defect(h);
    if (defect > tol_herm)
        throw NotHermitian("spectral_decompose: ||H - H^dag||_F = " + std::to_string(defect));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw Error("spectral_decompose: eigensolver failed to converge");

    const RealVector values = solver.eigenvalues();  // ascending
    for (int i = 0; i + 1 < values.size(); ++i) {
        const double gap = values(i + 1) - values(i);
        if (gap <= tol_degen)
            throw DegenerateSpectrum("spectral_decompose: eigenvalue gap " +
                                     std::to_string(gap) + " at index " + std::to_string(i));
    }

    Observable obs = observable_from_eigensystem(values, solver.eigenvectors());
    obs.matrix = h;  // keep the caller's matrix bit-for-bit
    return obs;
}

// Sum_y f(y) Pi_y for a coefficient vector indexed like the eigenvalues.
inline ComplexMatrix function_of(const Observable& obs, const ComplexVector& coeffs) {
    if (coeffs.size() != obs.dim())
        throw DimensionMismatch("function_of: coefficient count != dim");
    ComplexMatrix m = ComplexMatrix::Zero(obs.dim(), obs.dim());
    for (int i = 0; i < obs.dim(); ++i) m += coeffs(i) * obs.projector(i);
    return m;
}

}  // namespace kdq
