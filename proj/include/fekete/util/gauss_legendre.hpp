#pragma once

#include <cstddef>
#include <vector>

namespace fekete {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on (-1, 1), ascending
    std::vector<double> weights;

    // Nodes/weights mapped to (a, b).
    void map(double a, double b, std::vector<double>& x, std::vector<double>& w) const;
};

// Newton iteration on the Legendre recurrence; accurate to ~1e-15 for n <= 128.
const GaussLegendreRule& gauss_legendre(std::size_t n);

}  // namespace fekete
