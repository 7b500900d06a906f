#pragma once

#include <cstdint>
#include <random>

#include "kdq/matrix.hpp"

namespace kdq {

// Deterministic random stream. mt19937_64 is fully specified by the
// standard and the transforms below avoid std::*_distribution, whose
// algorithms are implementation-defined; identical seeds therefore
// reproduce identical draws on any conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; one spare cached per pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Complex normal_complex() {
        const double re = normal();
        const double im = normal();
        return Complex(re, im);
    }

    // Uniform on the closed complex unit disk.
    Complex unit_disk() {
        const double r = std::sqrt(uniform());
        const double theta = 2.0 * M_PI * uniform();
        return Complex(r * std::cos(theta), r * std::sin(theta));
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(gen_() % span);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Complex Ginibre matrix: i.i.d. complex normal entries.
inline ComplexMatrix ginibre(int d, Rng& rng) {
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.normal_complex();
    return g;
}

inline ComplexMatrix random_hermitian(int d, Rng& rng) {
    const ComplexMatrix g = ginibre(d, rng);
    return 0.5 * (g + g.adjoint());
}

// Haar-distributed unitary: QR of a Ginibre draw with the R-diagonal
// phases divided out (Mezzadri's construction).
inline ComplexMatrix haar_unitary(int d, Rng& rng) {
    const ComplexMatrix g = ginibre(d, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        q.col(j) *= rjj / std::abs(rjj);
    }
    return q;
}

}  // namespace kdq
