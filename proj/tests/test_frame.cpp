#include <catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace kdq;
namespace kt = kdq::testing;

TEST_CASE("check_pair on the qubit Z/X pair") {
    const ObservablePair pair = kt::qubit_zx_pair();
    CHECK(pair.dim() == 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(pair.overlaps(i, j)) == Catch::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("check_pair rejects a shared eigenbasis") {
    CHECK_THROWS_AS(check_pair(kt::z_observable(), kt::z_observable()), VanishingOverlap);
}

TEST_CASE("check_pair accepts a rotated basis") {
    const double theta = M_PI / 4.0;
    ComplexMatrix rotated(2, 2);
    rotated << std::cos(theta), std::sin(theta), std::sin(theta), -std::cos(theta);
    CHECK_NOTHROW(check_pair(kt::z_observable(), spectral_decompose(rotated)));
}

TEST_CASE("kd_frame elements and closed-form dual") {
    const ObservablePair pair = kt::qubit_zx_pair();
    const OperatorFrame frame = kd_frame(pair, KdSide::left);

    // a = +1 is index 1 (ascending eigenvalues), b = +1 likewise.
    ComplexMatrix expected(2, 2);
    expected << 0.5, 0.5, 0, 0;
    CHECK(kt::max_abs(frame.element(1, 1) - expected) < 1e-14);

    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (const auto& s : frame.elements) sum += s;
    CHECK(kt::max_abs(sum - ComplexMatrix::Identity(2, 2)) < 1e-13);

    CHECK(biorthogonality_residual(frame) < 1e-12);
}

TEST_CASE("dual_frame reproduces the KD closed form") {
    for (int d = 2; d <= 4; ++d) {
        const ObservablePair pair = random_pair(d, 17 + d);
        for (KdSide side : {KdSide::left, KdSide::right}) {
            const OperatorFrame closed = kd_frame(pair, side);
            const OperatorFrame solved = dual_frame(closed);
            for (int j = 0; j < d * d; ++j)
                CHECK((solved.dual[j] - closed.dual[j]).norm() < 1e-10);
        }
    }
}

TEST_CASE("closed-form duals are biorthogonal across dimensions") {
    for (int d = 2; d <= 6; ++d) {
        const ObservablePair pair = random_pair(d, 60 + d);
        CHECK(biorthogonality_residual(kd_frame(pair, KdSide::left)) < 1e-10);
        CHECK(biorthogonality_residual(kd_frame(pair, KdSide::right)) < 1e-10);
    }
}

TEST_CASE("dual_frame rejects rank-deficient families") {
    const ObservablePair pair = kt::qubit_zx_pair();
    OperatorFrame frame = kd_frame(pair, KdSide::left);
    frame.dual.clear();
    frame.elements[1] = frame.elements[0];  // repeated element
    CHECK_THROWS_AS(dual_frame(frame), SingularGram);
}

TEST_CASE("qubit anticommutator mixture is singular") {
    // At d = 2 the elementwise average of the left and right KD frames
    // spans only {I, A-projector line, B-projector line}; its Gram
    // system has no inverse for any qubit pair.
    const ObservablePair pair = kt::qubit_zx_pair();
    const OperatorFrame mixed =
        mix_frames(kd_frame(pair, KdSide::left), kd_frame(pair, KdSide::right), 0.5);
    CHECK_THROWS_AS(dual_frame(mixed), SingularGram);
    CHECK(frame_bounds(mixed).lower < 1e-12);
}

TEST_CASE("alpha mixture at d = 3 solves and is biorthogonal") {
    const ObservablePair pair = random_pair(3, 23);
    const OperatorFrame mixed =
        mix_frames(kd_frame(pair, KdSide::left), kd_frame(pair, KdSide::right), 0.5);
    const OperatorFrame solved = dual_frame(mixed);
    CHECK(biorthogonality_residual(solved) < 1e-10);
}

TEST_CASE("frame_bounds of an orthonormal operator basis is tight") {
    const ObservablePair pair = kt::qubit_zx_pair();
    OperatorFrame frame{pair, {}, {}, std::nullopt};
    const double s = 1.0 / std::sqrt(2.0);
    frame.elements = {s * ComplexMatrix::Identity(2, 2), s * pauli_x(), s * pauli_y(),
                      s * pauli_z()};
    const FrameBounds bounds = frame_bounds(frame);
    CHECK(bounds.lower == Catch::Approx(1.0).margin(1e-12));
    CHECK(bounds.upper == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("frame_bounds flags a basis and the zero family") {
    const ObservablePair pair = kt::qubit_zx_pair();
    CHECK(frame_bounds(kd_frame(pair, KdSide::left)).lower > 0.0);

    OperatorFrame zero{pair, std::vector<ComplexMatrix>(4, ComplexMatrix::Zero(2, 2)), {},
                       std::nullopt};
    const FrameBounds bounds = frame_bounds(zero);
    CHECK(bounds.lower == 0.0);
    CHECK(bounds.upper == 0.0);
}

TEST_CASE("Born compatibility of KD frames and mixtures") {
    const ObservablePair pair = random_pair(3, 29);
    const OperatorFrame left = kd_frame(pair, KdSide::left);
    const OperatorFrame right = kd_frame(pair, KdSide::right);
    CHECK(is_born_compatible(left));
    CHECK(is_born_compatible(right));
    for (double alpha : {0.0, 0.3, 0.5, 1.0})
        CHECK(is_born_compatible(mix_frames(left, right, alpha)));

    OperatorFrame broken = left;
    broken.elements[2] *= 2.0;
    CHECK_FALSE(is_born_compatible(broken));
}

TEST_CASE("mix_frames endpoints and mismatch") {
    const ObservablePair pair = kt::qubit_zx_pair();
    const OperatorFrame left = kd_frame(pair, KdSide::left);
    const OperatorFrame right = kd_frame(pair, KdSide::right);

    const OperatorFrame at_one = mix_frames(left, right, 1.0);
    for (int j = 0; j < 4; ++j) CHECK(kt::max_abs(at_one.elements[j] - left.elements[j]) == 0.0);

    const OperatorFrame mid = mix_frames(left, right, 0.5);
    double from_left = 0.0, from_right = 0.0;
    for (int j = 0; j < 4; ++j) {
        from_left = std::max(from_left, kt::max_abs(mid.elements[j] - left.elements[j]));
        from_right = std::max(from_right, kt::max_abs(mid.elements[j] - right.elements[j]));
    }
    CHECK(from_left > 1e-3);
    CHECK(from_right > 1e-3);
    CHECK(is_born_compatible(mid));

    const ObservablePair other = random_pair(2, 31);
    CHECK_THROWS_AS(mix_frames(left, kd_frame(other, KdSide::right), 0.5), PairMismatch);
}

TEST_CASE("perturb_born_compatible preserves the Born identities") {
    const ObservablePair pair = kt::qubit_zx_pair();
    const OperatorFrame frame = kd_frame(pair, KdSide::left);

    const OperatorFrame same = perturb_born_compatible(frame, 0.0, 9);
    for (int j = 0; j < 4; ++j) CHECK(kt::max_abs(same.elements[j] - frame.elements[j]) == 0.0);

    const OperatorFrame perturbed = perturb_born_compatible(frame, 1e-2, 9);
    CHECK(is_born_compatible(perturbed));
    double deviation = 0.0;
    for (int j = 0; j < 4; ++j)
        deviation = std::max(deviation, kt::max_abs(perturbed.elements[j] - frame.elements[j]));
    CHECK(deviation > 1e-3);

    // Doubly centered directions leave the marginal sums bit-exact up to
    // rounding, so this also holds at d = 4 and large-ish magnitude.
    const ObservablePair big = random_pair(4, 37);
    CHECK(is_born_compatible(perturb_born_compatible(kd_frame(big, KdSide::right), 0.5, 11),
                             1e-10));
}

TEST_CASE("perturb_born_compatible detects a degenerated candidate") {
    // The qubit left/right average is Born compatible but already rank
    // deficient; any perturbation magnitude leaves C1 at numerical zero.
    const ObservablePair pair = kt::qubit_zx_pair();
    const OperatorFrame mixed =
        mix_frames(kd_frame(pair, KdSide::left), kd_frame(pair, KdSide::right), 0.5);
    CHECK_THROWS_AS(perturb_born_compatible(mixed, 1e-8, 9), FrameDegenerated);
}

TEST_CASE("huge doubly-centered perturbations keep a positive lower bound") {
    // A random centered direction never aligns with the determinant-zero
    // variety, so even extreme magnitudes leave the family a basis; the
    // bounds just spread.
    const ObservablePair pair = kt::qubit_zx_pair();
    const OperatorFrame frame = kd_frame(pair, KdSide::left);
    const OperatorFrame wild = perturb_born_compatible(frame, 1e3, 9);
    REQUIRE(wild.bounds.has_value());
    CHECK(wild.bounds->lower > 1e-6);
    CHECK(wild.bounds->upper > 1e4);
    CHECK(is_born_compatible(wild, 1e-8));
}

TEST_CASE("dual of the dual recovers the frame") {
    for (int d : {2, 3}) {
        const ObservablePair pair = random_pair(d, 41 + d);
        const OperatorFrame mixed = dual_frame(
            mix_frames(kd_frame(pair, KdSide::left), kd_frame(pair, KdSide::right), 0.25));
        OperatorFrame swapped{pair, mixed.dual, {}, std::nullopt};
        const OperatorFrame back = dual_frame(swapped);
        for (int j = 0; j < d * d; ++j)
            CHECK((back.dual[j] - mixed.elements[j]).norm() < 1e-9);
    }
}

TEST_CASE("random_pair respects the overlap floor and is reproducible") {
    for (int d = 2; d <= 6; ++d) {
        const ObservablePair pair = random_pair(d, 1000 + d);
        CHECK(pair.overlaps.cwiseAbs().minCoeff() > 0.05);
        const ObservablePair again = random_pair(d, 1000 + d);
        CHECK(pair.b.eigenvectors == again.b.eigenvectors);
    }
}
