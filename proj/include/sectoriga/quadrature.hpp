#pragma once

#include "sectoriga/geometry.hpp"

#include <vector>

namespace siga {

struct GaussRule {
    std::vector<double> nodes;    ///< on [-1,1], ascending
    std::vector<double> weights;
};

/// Gauss-Legendre nodes by Newton iteration on P_q.
GaussRule gauss_legendre(int q);

/// Tensor rule on one parametric rectangle: points z1 x z2 (z1 fastest).
struct ElementRule {
    std::vector<double> z1, z2;   ///< per-direction nodes
    std::vector<double> w1, w2;   ///< per-direction weights
    int size() const { return static_cast<int>(z1.size() * z2.size()); }
    Vec2 point(int i) const;
    double weight(int i) const;
};

ElementRule element_rule(const Rect& element, int q);
ElementRule element_rule(const Rect& element, const GaussRule& g);

}  // namespace siga
