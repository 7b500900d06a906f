#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "kdq/errors.hpp"
#include "kdq/matrix.hpp"

// Finite classical probability spaces and their conditional
// expectations. This is the commutative counterpart of the operator
// constructions and doubles as the oracle they are tested against.
namespace kdq::classical {

using kdq::Complex;

// Points are 0..n-1; `weights` is the probability mass function.
struct FiniteProbSpace {
    std::vector<double> weights;
    int size() const { return static_cast<int>(weights.size()); }
};

inline FiniteProbSpace make_prob_space(std::vector<double> weights, double tol = 1e-12) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw Error("make_prob_space: negative or NaN weight");
        total += w;
    }
    if (std::abs(total - 1.0) > tol)
        throw Error("make_prob_space: weights sum to " + std::to_string(total));
    return FiniteProbSpace{std::move(weights)};
}

// A complex-valued function on the points of the space. Real random
// variables are represented with exactly zero imaginary parts; level
// sets are identified by exact equality of the stored values.
struct RandomVariable {
    std::vector<Complex> values;
    int size() const { return static_cast<int>(values.size()); }
};

inline bool is_real_valued(const RandomVariable& x) {
    return std::all_of(x.values.begin(), x.values.end(),
                       [](Complex v) { return v.imag() == 0.0; });
}

inline void require_defined_on(const FiniteProbSpace& p, const RandomVariable& x, const char* who) {
    if (x.size() != p.size())
        throw DimensionMismatch(std::string(who) + ": variable not defined on every point");
}

inline void require_real_conditioner(const RandomVariable& y, const char* who) {
    if (!is_real_valued(y))
        throw Error(std::string(who) + ": conditioning variable must be real valued");
}

// Distinct values in order of first appearance.
inline std::vector<Complex> range_of(const RandomVariable& x) {
    std::vector<Complex> ran;
    for (Complex v : x.values)
        if (std::find(ran.begin(), ran.end(), v) == ran.end()) ran.push_back(v);
    return ran;
}

inline Complex expectation(const FiniteProbSpace& p, const RandomVariable& x) {
    require_defined_on(p, x, "expectation");
    Complex e = 0.0;
    for (int w = 0; w < p.size(); ++w) e += x.values[w] * p.weights[w];
    return e;
}

inline double level_mass(const FiniteProbSpace& p, const RandomVariable& y, Complex level) {
    double mass = 0.0;
    for (int w = 0; w < p.size(); ++w)
        if (y.values[w] == level) mass += p.weights[w];
    return mass;
}

// True iff P(Y = y) > 0 for every y in Ran(Y).
inline bool in_D_Y(const FiniteProbSpace& p, const RandomVariable& y) {
    require_defined_on(p, y, "in_D_Y");
    require_real_conditioner(y, "in_D_Y");
    for (Complex level : range_of(y))
        if (!(level_mass(p, y, level) > 0.0)) return false;
    return true;
}

// E_P(X | Y) via the joint distribution of X and Y: for each level y,
// sum x * P(X = x, Y = y) / P(Y = y) over the range of X.
inline RandomVariable cond_exp(const FiniteProbSpace& p, const RandomVariable& x,
                               const RandomVariable& y) {
    require_defined_on(p, x, "cond_exp");
    if (!in_D_Y(p, y)) throw NotInDY("cond_exp: some level of Y has zero mass");

    const std::vector<Complex> xs = range_of(x);
    const std::vector<Complex> ys = range_of(y);

    std::vector<Complex> per_level(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
        const double mass_y = level_mass(p, y, ys[k]);
        Complex acc = 0.0;
        for (Complex xv : xs) {
            double joint = 0.0;
            for (int w = 0; w < p.size(); ++w)
                if (x.values[w] == xv && y.values[w] == ys[k]) joint += p.weights[w];
            acc += xv * (joint / mass_y);
        }
        per_level[k] = acc;
    }

    RandomVariable out;
    out.values.resize(p.size());
    for (int w = 0; w < p.size(); ++w) {
        const auto it = std::find(ys.begin(), ys.end(), y.values[w]);
        out.values[w] = per_level[static_cast<std::size_t>(it - ys.begin())];
    }
    return out;
}

// Best predictor of X by a function of Y: orthogonal projection of X
// onto span{1_y(Y)} under <Z,Z'>_P = E_P(conj(Z) Z'). Assembles the
// full Gram system of the level indicators and solves it, which is an
// independent route from cond_exp's joint-distribution formula.
inline RandomVariable best_predictor(const FiniteProbSpace& p, const RandomVariable& x,
                                     const RandomVariable& y) {
    require_defined_on(p, x, "best_predictor");
    if (!in_D_Y(p, y)) throw NotInDY("best_predictor: some level of Y has zero mass");

    const std::vector<Complex> ys = range_of(y);
    const int k = static_cast<int>(ys.size());

    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(k, k);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(k);
    for (int w = 0; w < p.size(); ++w) {
        const auto it = std::find(ys.begin(), ys.end(), y.values[w]);
        const int i = static_cast<int>(it - ys.begin());
        gram(i, i) += p.weights[w];
        rhs(i) += x.values[w] * p.weights[w];
    }
    const Eigen::VectorXcd coeffs = gram.fullPivLu().solve(rhs);

    RandomVariable out;
    out.values.resize(p.size());
    for (int w = 0; w < p.size(); ++w) {
        const auto it = std::find(ys.begin(), ys.end(), y.values[w]);
        out.values[w] = coeffs(static_cast<int>(it - ys.begin()));
    }
    return out;
}

// Joint mass P(X = x, Y = y) recovered as E_P[1_y(Y) E_P(1_x(X) | Y)].
inline double joint_from_cond(const FiniteProbSpace& p, const RandomVariable& x,
                              const RandomVariable& y, Complex x_label, double y_label) {
    require_defined_on(p, x, "joint_from_cond");
    if (!in_D_Y(p, y)) throw NotInDY("joint_from_cond: some level of Y has zero mass");

    const std::vector<Complex> xs = range_of(x);
    const std::vector<Complex> ys = range_of(y);
    if (std::find(xs.begin(), xs.end(), x_label) == xs.end())
        throw LabelNotInRange("joint_from_cond: x not in Ran(X)");
    if (std::find(ys.begin(), ys.end(), Complex(y_label)) == ys.end())
        throw LabelNotInRange("joint_from_cond: y not in Ran(Y)");

    RandomVariable ind_x, ind_y;
    ind_x.values.resize(p.size());
    ind_y.values.resize(p.size());
    for (int w = 0; w < p.size(); ++w) {
        ind_x.values[w] = (x.values[w] == x_label) ? 1.0 : 0.0;
        ind_y.values[w] = (y.values[w] == Complex(y_label)) ? 1.0 : 0.0;
    }

    const RandomVariable ce = cond_exp(p, ind_x, y);
    Complex acc = 0.0;
    for (int w = 0; w < p.size(); ++w)
        acc += ind_y.values[w] * ce.values[w] * p.weights[w];
    return acc.real();
}

// Direct enumeration of P(X = x, Y = y); the brute-force cross-check.
inline double joint_mass(const FiniteProbSpace& p, const RandomVariable& x,
                         const RandomVariable& y, Complex x_label, double y_label) {
    double mass = 0.0;
    for (int w = 0; w < p.size(); ++w)
        if (x.values[w] == x_label && y.values[w] == Complex(y_label)) mass += p.weights[w];
    return mass;
}

}  // namespace kdq::classical
