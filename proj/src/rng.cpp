#include "rangewave/rng.hpp"

#include <cmath>
#include <numbers>

namespace rangewave {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (hasSpare_) {
        hasSpare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    hasSpare_ = true;
    return r * std::cos(theta);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) / std::sqrt(2.0);
}

CVec Rng::complex_normal_vector(int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = complex_normal();
    return v;
}

CMat Rng::complex_normal_matrix(int rows, int cols) {
    CMat m(rows, cols);
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) m(r, c) = complex_normal();
    }
    return m;
}

CMat Rng::random_hpd(int n, double ridge) {
    CMat x = complex_normal_matrix(n, n);
    CMat m = x * x.adjoint() / static_cast<double>(n);
    m += ridge * CMat::Identity(n, n);
    return symmetrize(m);
}

}  // namespace rangewave
