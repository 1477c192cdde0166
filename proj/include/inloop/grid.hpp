#pragma once

#include <string>
#include <vector>

namespace inloop {

/// Uniform 1-D grid over one named parameter.
struct AxisSpec {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;

    [[nodiscard]] double value(int i) const {
        if (n <= 1) return lo;
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }

    [[nodiscard]] std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v.push_back(value(i));
        return v;
    }
};

}  // namespace inloop
