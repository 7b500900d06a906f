#include <catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace kdq;
namespace cl = kdq::classical;

namespace {

cl::FiniteProbSpace uniform4() { return cl::make_prob_space({0.25, 0.25, 0.25, 0.25}); }

// Omega = {1,2,3,4} carried as point values.
cl::RandomVariable omega_rv() { return cl::RandomVariable{{1.0, 2.0, 3.0, 4.0}}; }

cl::RandomVariable parity_rv() { return cl::RandomVariable{{1.0, 0.0, 1.0, 0.0}}; }

}  // namespace

TEST_CASE("in_D_Y detects uncovered levels") {
    CHECK(cl::in_D_Y(uniform4(), parity_rv()));

    const cl::FiniteProbSpace concentrated = cl::make_prob_space({1.0, 0.0, 0.0, 0.0});
    CHECK_FALSE(cl::in_D_Y(concentrated, omega_rv()));

    // Both parities are hit by the supported points {1, 2}.
    const cl::FiniteProbSpace half = cl::make_prob_space({0.5, 0.5, 0.0, 0.0});
    CHECK(cl::in_D_Y(half, parity_rv()));
}

TEST_CASE("cond_exp averages within level sets") {
    const cl::RandomVariable ce = cl::cond_exp(uniform4(), omega_rv(), parity_rv());
    // Even points {2,4} average to 3, odd points {1,3} to 2.
    CHECK(std::abs(ce.values[0] - Complex(2.0)) < 1e-14);
    CHECK(std::abs(ce.values[1] - Complex(3.0)) < 1e-14);
    CHECK(std::abs(ce.values[2] - Complex(2.0)) < 1e-14);
    CHECK(std::abs(ce.values[3] - Complex(3.0)) < 1e-14);
}

TEST_CASE("cond_exp fixes functions of Y and constants") {
    const cl::RandomVariable y = parity_rv();
    const cl::RandomVariable ce_y = cl::cond_exp(uniform4(), y, y);
    for (int w = 0; w < 4; ++w) CHECK(ce_y.values[w] == y.values[w]);

    const cl::RandomVariable c{{Complex(2, 1), Complex(2, 1), Complex(2, 1), Complex(2, 1)}};
    const cl::RandomVariable ce_c = cl::cond_exp(uniform4(), c, y);
    for (int w = 0; w < 4; ++w) CHECK(std::abs(ce_c.values[w] - Complex(2, 1)) < 1e-14);
}

TEST_CASE("cond_exp requires membership in D_Y") {
    const cl::FiniteProbSpace concentrated = cl::make_prob_space({1.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(cl::cond_exp(concentrated, parity_rv(), omega_rv()), NotInDY);
}

TEST_CASE("best_predictor agrees with cond_exp") {
    const cl::RandomVariable ce = cl::cond_exp(uniform4(), omega_rv(), parity_rv());
    const cl::RandomVariable bp = cl::best_predictor(uniform4(), omega_rv(), parity_rv());
    for (int w = 0; w < 4; ++w) CHECK(std::abs(ce.values[w] - bp.values[w]) < 1e-12);
}

TEST_CASE("best_predictor of a variable with zero level means is zero") {
    // X has zero mean on each parity class.
    const cl::RandomVariable x{{-1.0, -2.0, 1.0, 2.0}};
    const cl::RandomVariable bp = cl::best_predictor(uniform4(), x, parity_rv());
    for (int w = 0; w < 4; ++w) CHECK(std::abs(bp.values[w]) < 1e-14);
}

TEST_CASE("best_predictor matches cond_exp on a random instance") {
    Rng rng(3);
    const int n = 6;
    std::vector<double> weights(n);
    double total = 0;
    for (double& w : weights) total += (w = 0.1 + rng.uniform());
    for (double& w : weights) w /= total;
    const cl::FiniteProbSpace p = cl::make_prob_space(std::move(weights));

    cl::RandomVariable x, y;
    x.values.resize(n);
    y.values.resize(n);
    for (int w = 0; w < n; ++w) {
        x.values[w] = 2.0 * rng.unit_disk();
        y.values[w] = static_cast<double>(rng.uniform_int(0, 2));
    }
    const cl::RandomVariable ce = cl::cond_exp(p, x, y);
    const cl::RandomVariable bp = cl::best_predictor(p, x, y);
    for (int w = 0; w < n; ++w) CHECK(std::abs(ce.values[w] - bp.values[w]) < 1e-12);
}

TEST_CASE("joint_from_cond recovers the joint mass") {
    // P(omega = 2) = 1/4 is the joint mass of (X = 2, parity = 0).
    CHECK(cl::joint_from_cond(uniform4(), omega_rv(), parity_rv(), Complex(2.0), 0.0) ==
          Catch::Approx(0.25).margin(1e-14));

    // Disjoint level sets: X = 1 only on an odd point.
    CHECK(cl::joint_from_cond(uniform4(), omega_rv(), parity_rv(), Complex(1.0), 0.0) ==
          Catch::Approx(0.0).margin(1e-14));

    CHECK_THROWS_AS(cl::joint_from_cond(uniform4(), omega_rv(), parity_rv(), Complex(9.0), 0.0),
                    LabelNotInRange);
    CHECK_THROWS_AS(cl::joint_from_cond(uniform4(), omega_rv(), parity_rv(), Complex(2.0), 7.0),
                    LabelNotInRange);

    const cl::FiniteProbSpace concentrated = cl::make_prob_space({1.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(cl::joint_from_cond(concentrated, parity_rv(), omega_rv(), Complex(1.0), 1.0),
                    NotInDY);
}

TEST_CASE("joint_from_cond matches enumeration on a random instance") {
    Rng rng(5);
    const int n = 6;
    std::vector<double> weights(n);
    double total = 0;
    for (double& w : weights) total += (w = 0.1 + rng.uniform());
    for (double& w : weights) w /= total;
    const cl::FiniteProbSpace p = cl::make_prob_space(std::move(weights));

    cl::RandomVariable x, y;
    x.values.resize(n);
    y.values.resize(n);
    for (int w = 0; w < n; ++w) {
        x.values[w] = static_cast<double>(rng.uniform_int(0, 2));
        y.values[w] = static_cast<double>(rng.uniform_int(0, 1));
    }
    for (const Complex xv : cl::range_of(x))
        for (const Complex yv : cl::range_of(y)) {
            const double via_cond = cl::joint_from_cond(p, x, y, xv, yv.real());
            const double direct = cl::joint_mass(p, x, y, xv, yv.real());
            CHECK(std::abs(via_cond - direct) < 1e-14);
        }
}

TEST_CASE("characterization properties hold on random instances") {
    const ClassicalResiduals res = classical_residuals(50, 31);
    CHECK(res.instances == 50);
    CHECK(res.oracle_equiv < 1e-12);
    CHECK(res.pull_through < 1e-12);
    CHECK(res.iterated < 1e-12);
    CHECK(res.joint < 1e-13);
    CHECK(res.realness < 1e-13);
}

TEST_CASE("deterministic Y conditions on nothing") {
    const cl::RandomVariable y{{0.0, 0.0, 0.0, 0.0}};
    const cl::RandomVariable x{{1.0, Complex(0, 2), 3.0, 4.0}};
    const cl::RandomVariable ce = cl::cond_exp(uniform4(), x, y);
    const Complex mean = cl::expectation(uniform4(), x);
    for (int w = 0; w < 4; ++w) CHECK(std::abs(ce.values[w] - mean) < 1e-14);
}

TEST_CASE("cond_exp of one is one exactly") {
    const cl::RandomVariable one{{1.0, 1.0, 1.0, 1.0}};
    const cl::RandomVariable ce = cl::cond_exp(uniform4(), one, parity_rv());
    for (int w = 0; w < 4; ++w) CHECK(ce.values[w] == Complex(1.0));
}

TEST_CASE("prob space validation") {
    CHECK_THROWS_AS(cl::make_prob_space({0.5, 0.6}), Error);
    CHECK_THROWS_AS(cl::make_prob_space({1.5, -0.5}), Error);
}
