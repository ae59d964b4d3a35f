#pragma once

#include <vector>

namespace rfde {

// Gauss-Legendre rule of a given order on [-1, 1]. Nodes and weights are
// computed once by Newton iteration on the Legendre recurrence; exact for
// polynomials up to degree 2n-1.
struct GaussLegendre {
    explicit GaussLegendre(int order);
    int order() const { return static_cast<int>(nodes.size()); }
    std::vector<double> nodes;
    std::vector<double> weights;
};

} // namespace rfde
