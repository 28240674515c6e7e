#pragma once

#include <cmath>

namespace mirnet {

/// Neumaier-compensated accumulator. The entropy and information sums here
/// are compared against closed forms at 1e-12, which naive summation over
/// 1e5+ terms does not reliably reach.
struct KahanSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double value) {
        double t = sum + value;
        if (std::abs(sum) >= std::abs(value))
            compensation += (sum - t) + value;
        else
            compensation += (value - t) + sum;
        sum = t;
    }

    double value() const { return sum + compensation; }
};

}  // namespace mirnet
