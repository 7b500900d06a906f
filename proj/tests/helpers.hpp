#pragma once

#include "kdq/kdq.hpp"

// Shared fixtures for the unit suites.
namespace kdq::testing {

inline Observable z_observable() { return spectral_decompose(pauli_z()); }
inline Observable x_observable() { return spectral_decompose(pauli_x()); }

inline ObservablePair qubit_zx_pair() { return check_pair(z_observable(), x_observable()); }

inline DensityMatrix ket0_density() {
    ComplexVector v(2);
    v << 1, 0;
    return pure_state(v);
}

inline DensityMatrix plus_density() {
    ComplexVector v(2);
    v << 1, 1;
    return pure_state(v);
}

inline DensityMatrix plus_i_density() {
    ComplexVector v(2);
    v << 1, Complex(0, 1);
    return pure_state(v);
}

inline DensityMatrix maximally_mixed(int d) {
    return DensityMatrix{ComplexMatrix::Identity(d, d) / static_cast<double>(d)};
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace kdq::testing
