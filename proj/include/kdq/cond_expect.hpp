#pragma once

#include "kdq/quasiprob.hpp"

namespace kdq {

// An operator of the form sum_y f(y) Pi_y, diagonal in the conditioning
// basis. Conditional expectations land here; equality between them is
// always tested on the coefficient vector, which is basis-aligned,
// rather than through matrix norms.
struct DiagonalInBasis {
    Observable basis;
    ComplexVector coeffs;
    ComplexMatrix matrix;
};

inline DiagonalInBasis diagonal_in_basis(const Observable& basis, ComplexVector coeffs) {
    ComplexMatrix m = function_of(basis, coeffs);
    return DiagonalInBasis{basis, std::move(coeffs), std::move(m)};
}

// Which state-weighted sesquilinear form to minimize against:
//   left   <X, X'> = Tr(rho X^dag X')
//   right  <X, X'> = Tr(rho X' X^dag)
//   alpha  the convex blend  alpha*left + (1-alpha)*right
struct InnerProductKind {
    enum class Tag { left, right, alpha };
    Tag tag;
    double alpha_value;

    static InnerProductKind left() { return {Tag::left, 1.0}; }
    static InnerProductKind right() { return {Tag::right, 0.0}; }
    static InnerProductKind blend(double alpha) {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw Error("InnerProductKind: alpha must lie in [0, 1]");
        return {Tag::alpha, alpha};
    }

    std::string name() const {
        switch (tag) {
            case Tag::left: return "left";
            case Tag::right: return "right";
            default: return "alpha(" + std::to_string(alpha_value) + ")";
        }
    }
};

inline Complex sesquilinear(InnerProductKind kind, const DensityMatrix& rho,
                            const ComplexMatrix& x, const ComplexMatrix& xp) {
    if (x.rows() != rho.dim() || x.cols() != rho.dim() || xp.rows() != rho.dim() ||
        xp.cols() != rho.dim())
        throw DimensionMismatch("sesquilinear: operand dimensions differ from the state");
    switch (kind.tag) {
        case InnerProductKind::Tag::left:
            return (rho.matrix * x.adjoint() * xp).trace();
        case InnerProductKind::Tag::right:
            return (rho.matrix * xp * x.adjoint()).trace();
        default:
            return kind.alpha_value * (rho.matrix * x.adjoint() * xp).trace() +
                   (1.0 - kind.alpha_value) * (rho.matrix * xp * x.adjoint()).trace();
    }
}

// Diagonal weights <phi_y, rho phi_y> in the conditioning basis.
inline RealVector basis_weights(const DensityMatrix& rho, const Observable& b) {
    if (rho.dim() != b.dim())
        throw DimensionMismatch("basis_weights: state and observable dimensions differ");
    RealVector w(b.dim());
    for (int i = 0; i < b.dim(); ++i)
        w(i) = (b.eigenvector(i).adjoint() * rho.matrix * b.eigenvector(i))(0).real();
    return w;
}

// Admissible states: every diagonal weight strictly above tol. Weights
// at or below tol are treated as zero; downstream operations refuse to
// divide by them.
inline bool in_D_B(const DensityMatrix& rho, const Observable& b, double tol = 1e-12) {
    return basis_weights(rho, b).minCoeff() > tol;
}

inline Complex state_expectation(const DensityMatrix& rho, const ComplexMatrix& x) {
    return (x * rho.matrix).trace();
}

// Closed-form conditional expectation of X given B in the state rho.
// Coefficients are the weak values:
//   left   f(y) = <phi_y, X rho phi_y> / <phi_y, rho phi_y>
//   right  f(y) = <phi_y, rho X phi_y> / <phi_y, rho phi_y>
//   alpha  the same blend as the inner product; this formula follows
//          from completing the square (the quadratic term is
//          kind-independent) and is cross-checked against
//          minimize_oracle before anything trusts it.
inline DiagonalInBasis cond_exp_closed(const ComplexMatrix& x, const Observable& b,
                                       const DensityMatrix& rho, InnerProductKind kind,
                                       double d_b_tol = 1e-12) {
    if (!in_D_B(rho, b, d_b_tol))
        throw NotInDB("cond_exp_closed: a diagonal weight of rho vanishes in the basis of B");
    const int d = b.dim();
    ComplexVector coeffs(d);
    for (int y = 0; y < d; ++y) {
        const ComplexVector phi = b.eigenvector(y);
        const Complex w = (phi.adjoint() * rho.matrix * phi)(0);
        const Complex left = (phi.adjoint() * x * rho.matrix * phi)(0) / w;
        const Complex right = (phi.adjoint() * rho.matrix * x * phi)(0) / w;
        switch (kind.tag) {
            case InnerProductKind::Tag::left: coeffs(y) = left; break;
            case InnerProductKind::Tag::right: coeffs(y) = right; break;
            default: coeffs(y) = kind.alpha_value * left + (1.0 - kind.alpha_value) * right;
        }
    }
    return diagonal_in_basis(b, std::move(coeffs));
}

// Independent route: minimize f -> <X - f(B), X - f(B)>_kind directly by
// assembling the normal equations over the coefficient vector. Only the
// sesquilinear form is consulted -- the Gram matrix of the projectors is
// built in full and solved, not assumed diagonal.
inline DiagonalInBasis minimize_oracle(const ComplexMatrix& x, const Observable& b,
                                       const DensityMatrix& rho, InnerProductKind kind,
                                       double d_b_tol = 1e-12) {
    if (!in_D_B(rho, b, d_b_tol))
        throw NotInDB("minimize_oracle: a diagonal weight of rho vanishes in the basis of B");
    const int d = b.dim();
    ComplexMatrix gram(d, d);
    ComplexVector rhs(d);
    for (int y = 0; y < d; ++y) {
        for (int yp = 0; yp < d; ++yp)
            gram(y, yp) = sesquilinear(kind, rho, b.projector(y), b.projector(yp));
        rhs(y) = sesquilinear(kind, rho, b.projector(y), x);
    }
    ComplexVector coeffs = gram.fullPivLu().solve(rhs);
    return diagonal_in_basis(b, std::move(coeffs));
}

// Conditional expectation induced by a quasiprobability representation:
//   E^Q(X | B) = sum_b [ sum_a conj(tilde-Q_{a,b}(X^dag)) Q_{a,b}(rho) / w_b ] Pi_b.
inline DiagonalInBasis q_cond_exp(const OperatorFrame& frame, const ComplexMatrix& x,
                                  const DensityMatrix& rho, double d_b_tol = 1e-12,
                                  bool check_born = true) {
    if (!frame.has_dual()) throw MissingDual("q_cond_exp: frame carries no dual");
    if (!in_D_B(rho, frame.pair.b, d_b_tol))
        throw NotInDB("q_cond_exp: a diagonal weight of rho vanishes in the basis of B");

    const int d = frame.dim();
    const QuasiDistribution dist = distribution(frame, rho, check_born);
    const OperatorSymbol sym = symbol(frame, x.adjoint());
    const RealVector w = basis_weights(rho, frame.pair.b);

    ComplexVector coeffs = ComplexVector::Zero(d);
    for (int bi = 0; bi < d; ++bi) {
        for (int ai = 0; ai < d; ++ai)
            coeffs(bi) += std::conj(sym.values(ai, bi)) * dist.values(ai, bi);
        coeffs(bi) /= w(bi);
    }
    return diagonal_in_basis(frame.pair.b, std::move(coeffs));
}

// | E_rho(E^Q(X|B)) - E_rho(X) | ; zero for every Born-compatible frame.
inline double iterated_expectation_residual(const OperatorFrame& frame, const ComplexMatrix& x,
                                            const DensityMatrix& rho, double d_b_tol = 1e-12,
                                            bool check_born = true) {
    const DiagonalInBasis ce = q_cond_exp(frame, x, rho, d_b_tol, check_born);
    return std::abs(state_expectation(rho, ce.matrix) - state_expectation(rho, x));
}

// max_{a,b} | Q_{a,b}(rho) - E_rho(E^Q(S_{a,b}^dag | B)) | ; the quantum
// analogue of recovering a joint distribution from conditioning.
inline double joint_recovery_residual(const OperatorFrame& frame, const DensityMatrix& rho,
                                      double d_b_tol = 1e-12, bool check_born = true) {
    const int d = frame.dim();
    const QuasiDistribution dist = distribution(frame, rho, check_born);
    double worst = 0.0;
    for (int ai = 0; ai < d; ++ai)
        for (int bi = 0; bi < d; ++bi) {
            const DiagonalInBasis ce =
                q_cond_exp(frame, frame.element(ai, bi).adjoint(), rho, d_b_tol, false);
            const Complex recovered = state_expectation(rho, ce.matrix);
            worst = std::max(worst, std::abs(dist.values(ai, bi) - recovered));
        }
    return worst;
}

// Density regularization: mixes in the projectors of the zero-weight
// directions, rho_eps = (rho + eps * sum_{y in I0} Pi_y) / (1 + eps|I0|).
// Always lands in D_B; the trace distance to the input is bounded by
// 2 eps |I0| / (1 + eps |I0|). Returns the input unchanged when I0 is empty.
inline DensityMatrix regularize(const DensityMatrix& rho, const Observable& b, double eps,
                                double tol = 1e-12) {
    if (!(eps > 0.0)) throw Error("regularize: eps must be positive");
    const RealVector w = basis_weights(rho, b);
    std::vector<int> dead;
    for (int y = 0; y < b.dim(); ++y)
        if (w(y) <= tol) dead.push_back(y);
    if (dead.empty()) return rho;

    ComplexMatrix m = rho.matrix;
    for (int y : dead) m += eps * b.projector(y);
    m /= 1.0 + eps * static_cast<double>(dead.size());
    return DensityMatrix{std::move(m)};
}

}  // namespace kdq
