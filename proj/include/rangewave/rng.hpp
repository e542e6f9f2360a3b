#pragma once

#include <cstdint>
#include <random>

#include "rangewave/linalg.hpp"

namespace rangewave {

/// Seeded generator with portable draw sequences. The standard distributions
/// are implementation-defined, so uniform and normal variates are derived
/// from raw mt19937_64 output directly; fixed seeds give identical streams
/// on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform();

    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller.
    double normal();

    /// Circularly symmetric complex normal, unit variance.
    Complex complex_normal();

    CVec complex_normal_vector(int n);
    CMat complex_normal_matrix(int rows, int cols);

    /// Hermitian positive definite sample X X^H/n + ridge I.
    CMat random_hpd(int n, double ridge = 0.1);

private:
    std::mt19937_64 engine_;
    bool hasSpare_ = false;
    double spare_ = 0.0;
};

}  // namespace rangewave
