#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "kdq/density.hpp"
#include "kdq/rng.hpp"
#include "kdq/spectral.hpp"

namespace kdq {

// Two observables whose eigenbases are mutually non-orthogonal in every
// direction: min_{a,b} |<phi_a, phi_b>| > 0. overlaps(i, j) holds
// <phi_{a_i}, phi_{b_j}>.
struct ObservablePair {
    Observable a;
    Observable b;
    ComplexMatrix overlaps;

    int dim() const { return a.dim(); }
};

inline ObservablePair check_pair(Observable a, Observable b, double tol_overlap = kTolNum) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("check_pair: observables have different dimensions");
    ComplexMatrix overlaps = a.eigenvectors.adjoint() * b.eigenvectors;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j) {
            const double mag = std::abs(overlaps(i, j));
            if (mag <= tol_overlap) throw VanishingOverlap(i, j, mag);
        }
    return ObservablePair{std::move(a), std::move(b), std::move(overlaps)};
}

inline bool same_pair(const ObservablePair& p, const ObservablePair& q) {
    if (p.dim() != q.dim()) return false;
    return p.a.eigenvalues == q.a.eigenvalues && p.b.eigenvalues == q.b.eigenvalues &&
           p.a.eigenvectors == q.a.eigenvectors && p.b.eigenvectors == q.b.eigenvectors;
}

// Seeded test pair: A has the standard eigenbasis with eigenvalues
// 0..d-1, B the same eigenvalues in a Haar-random basis. Redraws until
// every overlap magnitude clears min_overlap.
inline ObservablePair random_pair(int d, std::uint64_t seed, double min_overlap = 0.05) {
    Rng rng(seed);
    RealVector values(d);
    for (int i = 0; i < d; ++i) values(i) = i;
    const Observable a = observable_from_eigensystem(values, ComplexMatrix::Identity(d, d));
    for (;;) {
        const ComplexMatrix u = haar_unitary(d, rng);
        if ((a.eigenvectors.adjoint() * u).cwiseAbs().minCoeff() <= min_overlap) continue;
        return check_pair(a, observable_from_eigensystem(values, u), min_overlap);
    }
}

enum class KdSide { left, right };

struct FrameBounds {
    double lower;  // C1; positive iff the family is a basis of L(H)
    double upper;  // C2
};

// Family {S_{a,b}} indexed by the joint spectrum, stored row-major over
// (a index, b index): flat = a*d + b. `dual` is empty until populated by
// kd_frame's closed form or by dual_frame's solver.
struct OperatorFrame {
    ObservablePair pair;
    std::vector<ComplexMatrix> elements;
    std::vector<ComplexMatrix> dual;
    std::optional<FrameBounds> bounds;

    int dim() const { return pair.dim(); }
    bool has_dual() const { return !dual.empty(); }
    int flat(int ai, int bi) const { return ai * dim() + bi; }
    const ComplexMatrix& element(int ai, int bi) const { return elements[flat(ai, bi)]; }
    const ComplexMatrix& dual_element(int ai, int bi) const { return dual[flat(ai, bi)]; }
};

// Kirkwood-Dirac frame: S_{a,b} = Pi_a Pi_b (left) or Pi_b Pi_a (right),
// with the closed-form dual T_{a,b} = S_{a,b} / |<phi_a, phi_b>|^2.
inline OperatorFrame kd_frame(const ObservablePair& pair, KdSide side) {
    const int d = pair.dim();
    OperatorFrame frame{pair, {}, {}, std::nullopt};
    frame.elements.reserve(d * d);
    frame.dual.reserve(d * d);
    for (int ai = 0; ai < d; ++ai)
        for (int bi = 0; bi < d; ++bi) {
            ComplexMatrix s = (side == KdSide::left)
                                  ? ComplexMatrix(pair.a.projector(ai) * pair.b.projector(bi))
                                  : ComplexMatrix(pair.b.projector(bi) * pair.a.projector(ai));
            frame.dual.push_back(s / std::norm(pair.overlaps(ai, bi)));
            frame.elements.push_back(std::move(s));
        }
    return frame;
}

namespace detail {

// Columns are vec(S_j); Hilbert-Schmidt pairings become ordinary
// vector inner products in this representation.
inline ComplexMatrix vectorized(const std::vector<ComplexMatrix>& elements, int d) {
    ComplexMatrix m(d * d, elements.size());
    for (std::size_t j = 0; j < elements.size(); ++j)
        m.col(static_cast<int>(j)) = Eigen::Map<const ComplexVector>(elements[j].data(), d * d);
    return m;
}

}  // namespace detail

// Extremal eigenvalues of the frame operator X -> sum_j S_j Tr(S_j^dag X),
// whose matrix representation is M M^dag for M = [vec(S_j)].
inline FrameBounds frame_bounds(const OperatorFrame& frame) {
    const ComplexMatrix m = detail::vectorized(frame.elements, frame.dim());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(ComplexMatrix(m * m.adjoint()));
    const RealVector ev = solver.eigenvalues();
    return FrameBounds{std::max(0.0, ev.minCoeff()), std::max(0.0, ev.maxCoeff())};
}

// Solves for the dual frame through the Gram system: with
// G_{jk} = Tr(S_j^dag S_k) and T_k = sum_j C_{jk} S_j, biorthogonality
// Tr(T_k S_j^dag) = delta_{jk} becomes G C = I.
inline OperatorFrame dual_frame(const OperatorFrame& frame, double cond_cap = 1e12) {
    const int d = frame.dim();
    const int n = d * d;
    const ComplexMatrix m = detail::vectorized(frame.elements, d);
    const ComplexMatrix gram = m.adjoint() * m;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram);
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > cond_cap)
        throw SingularGram("dual_frame: Gram condition " +
                           (lo > 0.0 ? std::to_string(hi / lo) : std::string("inf")) +
                           " exceeds cap");

    const ComplexMatrix coeffs = gram.ldlt().solve(ComplexMatrix::Identity(n, n));

    OperatorFrame out = frame;
    out.dual.assign(n, ComplexMatrix::Zero(d, d));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) out.dual[k] += coeffs(j, k) * frame.elements[j];
    return out;
}

// Largest biorthogonality defect max |Tr(T_k S_j^dag) - delta_{jk}|.
inline double biorthogonality_residual(const OperatorFrame& frame) {
    if (!frame.has_dual()) throw MissingDual("biorthogonality_residual: no dual present");
    const int n = frame.dim() * frame.dim();
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const Complex t = (frame.dual[k] * frame.elements[j].adjoint()).trace();
            worst = std::max(worst, std::abs(t - (j == k ? Complex(1) : Complex(0))));
        }
    return worst;
}

// Born compatibility: adjoints summed over a reproduce B's projectors,
// and summed over b reproduce A's.
inline bool is_born_compatible(const OperatorFrame& frame, double tol = kTolNum) {
    const int d = frame.dim();
    for (int bi = 0; bi < d; ++bi) {
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (int ai = 0; ai < d; ++ai) sum += frame.element(ai, bi).adjoint();
        if ((sum - frame.pair.b.projector(bi)).norm() > tol) return false;
    }
    for (int ai = 0; ai < d; ++ai) {
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (int bi = 0; bi < d; ++bi) sum += frame.element(ai, bi).adjoint();
        if ((sum - frame.pair.a.projector(ai)).norm() > tol) return false;
    }
    return true;
}

// Elementwise alpha S1 + (1 - alpha) S2. Drops any dual or bounds; both
// Born marginal identities are linear, so compatibility survives mixing.
inline OperatorFrame mix_frames(const OperatorFrame& f1, const OperatorFrame& f2, double alpha) {
    if (!same_pair(f1.pair, f2.pair))
        throw PairMismatch("mix_frames: frames live on different observable pairs");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw Error("mix_frames: alpha must lie in [0, 1]");
    OperatorFrame out{f1.pair, {}, {}, std::nullopt};
    out.elements.reserve(f1.elements.size());
    for (std::size_t j = 0; j < f1.elements.size(); ++j)
        out.elements.push_back(alpha * f1.elements[j] + (1.0 - alpha) * f2.elements[j]);
    return out;
}

// Adds a seeded random perturbation that is doubly centered over the
// (a, b) grid -- zero sum along every row and every column -- so the
// Born marginals are untouched. The family is scaled so its total
// Frobenius norm equals `magnitude`. The candidate must stay a numerical
// basis: C1 above an absolute floor and above C2 * 1e-12.
inline OperatorFrame perturb_born_compatible(const OperatorFrame& frame, double magnitude,
                                             std::uint64_t seed) {
    if (!is_born_compatible(frame))
        throw NotBornCompatible("perturb_born_compatible: input frame is not Born compatible");
    if (magnitude == 0.0) return frame;

    const int d = frame.dim();
    Rng rng(seed);
    std::vector<ComplexMatrix> delta;
    delta.reserve(d * d);
    for (int j = 0; j < d * d; ++j) delta.push_back(ginibre(d, rng));

    // Double centering: delta'_{a,b} = delta - rowmean_b - colmean_a + grandmean.
    std::vector<ComplexMatrix> col_mean(d, ComplexMatrix::Zero(d, d));
    std::vector<ComplexMatrix> row_mean(d, ComplexMatrix::Zero(d, d));
    ComplexMatrix grand = ComplexMatrix::Zero(d, d);
    for (int ai = 0; ai < d; ++ai)
        for (int bi = 0; bi < d; ++bi) {
            const ComplexMatrix& x = delta[ai * d + bi];
            col_mean[bi] += x / d;
            row_mean[ai] += x / d;
            grand += x / (d * d);
        }
    double total_sq = 0.0;
    for (int ai = 0; ai < d; ++ai)
        for (int bi = 0; bi < d; ++bi) {
            ComplexMatrix& x = delta[ai * d + bi];
            x = x - col_mean[bi] - row_mean[ai] + grand;
            total_sq += x.squaredNorm();
        }
    const double scale = magnitude / std::sqrt(total_sq);

    OperatorFrame out{frame.pair, {}, {}, std::nullopt};
    out.elements.reserve(d * d);
    for (int j = 0; j < d * d; ++j)
        out.elements.push_back(frame.elements[j] + scale * delta[j]);

    const FrameBounds bounds = frame_bounds(out);
    if (bounds.lower <= 1e-12 || bounds.lower <= 1e-12 * bounds.upper)
        throw FrameDegenerated("perturb_born_compatible: C1 = " + std::to_string(bounds.lower) +
                               " no longer positive at working precision");
    out.bounds = bounds;
    return out;
}

}  // namespace kdq
