#pragma once

#include "kdq/frame.hpp"

namespace kdq {

// Q_{a,b}(rho) = Tr(rho S_{a,b}^dag) on the joint spectrum. Values are
// complex in general; any realness or positivity is a property of the
// instance, never assumed by the representation itself. `values(ai, bi)`
// follows the frame's (a index, b index) layout.
struct QuasiDistribution {
    ObservablePair pair;
    ComplexMatrix values;

    // |1 - sum| ; kept so callers can distinguish float noise from a
    // frame that was never Born compatible.
    double normalization_deviation = 0.0;
};

// Symbol table tilde-Q_{a,b}(X) = Tr(X T_{a,b}^dag).
struct OperatorSymbol {
    ObservablePair pair;
    ComplexMatrix values;
};

inline constexpr double kNormalizationHardTol = 1e-8;

namespace detail {

inline double record_normalization(QuasiDistribution& dist) {
    dist.normalization_deviation = std::abs(dist.values.sum() - Complex(1.0));
    if (dist.normalization_deviation > kNormalizationHardTol)
        throw NormalizationError("quasiprobability sums to 1 only within " +
                                 std::to_string(dist.normalization_deviation));
    return dist.normalization_deviation;
}

}  // namespace detail

inline QuasiDistribution distribution(const OperatorFrame& frame, const DensityMatrix& rho,
                                      bool check_born = true) {
    const int d = frame.dim();
    if (rho.dim() != d)
        throw DimensionMismatch("distribution: state dimension != frame dimension");
    if (check_born && !is_born_compatible(frame))
        throw NotBornCompatible("distribution: frame fails the Born marginal identities");

    QuasiDistribution dist{frame.pair, ComplexMatrix(d, d)};
    for (int ai = 0; ai < d; ++ai)
        for (int bi = 0; bi < d; ++bi)
            dist.values(ai, bi) = (rho.matrix * frame.element(ai, bi).adjoint()).trace();
    detail::record_normalization(dist);
    return dist;
}

inline OperatorSymbol symbol(const OperatorFrame& frame, const ComplexMatrix& x) {
    const int d = frame.dim();
    if (!frame.has_dual()) throw MissingDual("symbol: frame carries no dual");
    if (x.rows() != d || x.cols() != d)
        throw DimensionMismatch("symbol: operator dimension != frame dimension");

    OperatorSymbol sym{frame.pair, ComplexMatrix(d, d)};
    for (int ai = 0; ai < d; ++ai)
        for (int bi = 0; bi < d; ++bi)
            sym.values(ai, bi) = (x * frame.dual_element(ai, bi).adjoint()).trace();
    return sym;
}

// Overlap formula: sum conj(tilde-Q(X)) Q(rho) = Tr(rho X^dag) whenever
// symbol and distribution come from a matching frame/dual pair.
inline Complex overlap(const OperatorSymbol& sym, const QuasiDistribution& dist) {
    if (!same_pair(sym.pair, dist.pair))
        throw PairMismatch("overlap: symbol and distribution index different pairs");
    return (sym.values.conjugate().cwiseProduct(dist.values)).sum();
}

struct Marginals {
    ComplexVector over_a;  // indexed by b: sum_a Q_{a,b}
    ComplexVector over_b;  // indexed by a: sum_b Q_{a,b}
};

// For Born-compatible frames these equal the Born diagonals
// <phi_b, rho phi_b> and <phi_a, rho phi_a>.
inline Marginals marginals(const QuasiDistribution& dist) {
    return Marginals{dist.values.colwise().sum().transpose(), dist.values.rowwise().sum()};
}

// Closed-form Kirkwood-Dirac values: left Q_{a,b} = <phi_b, phi_a><phi_a, rho phi_b>,
// right the adjoint ordering. Independent of the frame route through
// distribution(kd_frame(...), rho); the two must agree.
inline QuasiDistribution kd_distribution(const ObservablePair& pair, const DensityMatrix& rho,
                                         KdSide side) {
    const int d = pair.dim();
    if (rho.dim() != d)
        throw DimensionMismatch("kd_distribution: state dimension != pair dimension");

    QuasiDistribution dist{pair, ComplexMatrix(d, d)};
    for (int ai = 0; ai < d; ++ai) {
        const ComplexVector phi_a = pair.a.eigenvector(ai);
        for (int bi = 0; bi < d; ++bi) {
            const ComplexVector phi_b = pair.b.eigenvector(bi);
            const Complex ov = pair.overlaps(ai, bi);  // <phi_a, phi_b>
            if (side == KdSide::left)
                dist.values(ai, bi) = std::conj(ov) * (phi_a.adjoint() * rho.matrix * phi_b)(0);
            else
                dist.values(ai, bi) = ov * (phi_b.adjoint() * rho.matrix * phi_a)(0);
        }
    }
    detail::record_normalization(dist);
    return dist;
}

}  // namespace kdq
