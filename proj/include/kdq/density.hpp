#pragma once

#include <Eigen/Eigenvalues>

#include "kdq/matrix.hpp"
#include "kdq/rng.hpp"

namespace kdq {

// Positive semidefinite, unit-trace operator. Construct through
// make_density (validating) or the generators below.
struct DensityMatrix {
    ComplexMatrix matrix;
    int dim() const { return static_cast<int>(matrix.rows()); }
};

inline DensityMatrix make_density(const ComplexMatrix& m,
                                  double tol_herm = kTolHerm,
                                  double tol_psd = kTolPsd,
                                  double tol_trace = kTolNum) {
    require_square_finite(m, "make_density");
    const double defect = hermiticity_defect(m);
    if (defect > tol_herm)
        throw NotHermitian("make_density: ||M - M^dag||_F = " + std::to_string(defect));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    const double lambda_min = solver.eigenvalues().minCoeff();
    if (lambda_min < -tol_psd)
        throw NotPositive("make_density: smallest eigenvalue " + std::to_string(lambda_min));

    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol_trace)
        throw TraceNotOne("make_density: trace = " + std::to_string(tr));

    return DensityMatrix{m};
}

// Normalized G G^dag for a seeded Ginibre draw; full rank with
// probability 1, hence generically admissible for any conditioning basis.
inline DensityMatrix random_density(int d, Rng& rng) {
    const ComplexMatrix g = ginibre(d, rng);
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix{std::move(m)};
}

inline DensityMatrix random_density(int d, std::uint64_t seed) {
    if (d < 2) throw Error("random_density: d must be >= 2");
    Rng rng(seed);
    return random_density(d, rng);
}

// |psi><psi| / <psi|psi>
inline DensityMatrix pure_state(const ComplexVector& psi) {
    const double n2 = psi.squaredNorm();
    if (n2 <= 0.0) throw Error("pure_state: zero vector");
    return DensityMatrix{(psi * psi.adjoint()) / n2};
}

}  // namespace kdq
