#pragma once

#include <stdexcept>
#include <string>

namespace kdq {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidMatrix : Error {
    explicit InvalidMatrix(const std::string& what) : Error(what) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct NotHermitian : Error {
    explicit NotHermitian(const std::string& what) : Error(what) {}
};

struct DegenerateSpectrum : Error {
    explicit DegenerateSpectrum(const std::string& what) : Error(what) {}
};

struct NotPositive : Error {
    explicit NotPositive(const std::string& what) : Error(what) {}
};

struct TraceNotOne : Error {
    explicit TraceNotOne(const std::string& what) : Error(what) {}
};

struct NotInDY : Error {
    explicit NotInDY(const std::string& what) : Error(what) {}
};

struct LabelNotInRange : Error {
    explicit LabelNotInRange(const std::string& what) : Error(what) {}
};

// Carries the grid indices of the offending eigenvector pair.
struct VanishingOverlap : Error {
    VanishingOverlap(int a_index, int b_index, double magnitude)
        : Error("vanishing overlap at (a=" + std::to_string(a_index) +
                ", b=" + std::to_string(b_index) +
                "), |<phi_a,phi_b>| = " + std::to_string(magnitude)),
          a_index(a_index), b_index(b_index), magnitude(magnitude) {}
    int a_index;
    int b_index;
    double magnitude;
};

struct SingularGram : Error {
    explicit SingularGram(const std::string& what) : Error(what) {}
};

struct PairMismatch : Error {
    explicit PairMismatch(const std::string& what) : Error(what) {}
};

struct FrameDegenerated : Error {
    explicit FrameDegenerated(const std::string& what) : Error(what) {}
};

struct MissingDual : Error {
    explicit MissingDual(const std::string& what) : Error(what) {}
};

struct NotBornCompatible : Error {
    explicit NotBornCompatible(const std::string& what) : Error(what) {}
};

struct NormalizationError : Error {
    explicit NormalizationError(const std::string& what) : Error(what) {}
};

struct NotInDB : Error {
    explicit NotInDB(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace kdq
