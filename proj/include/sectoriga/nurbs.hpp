#pragma once

#include "sectoriga/splines.hpp"

#include <array>
#include <vector>

namespace siga {

/// Bivariate rational basis: tensor knot vectors plus one weight per function.
/// Multi-index (i1, i2) is stored lexicographically with i1 fastest.
struct NurbsPatch {
    KnotVector kv1, kv2;
    std::vector<double> weights;

    int n1() const { return kv1.size(); }
    int n2() const { return kv2.size(); }
    int size() const { return n1() * n2(); }
    int index(int i1, int i2) const { return i1 + n1() * i2; }
    void validate() const;
};

struct WeightEval {
    double W = 0.0;
    Vec2 grad = Vec2::Zero();
};

struct TensorBasisEvaluation {
    std::vector<std::array<int, 2>> index;
    std::vector<double> values;
    std::vector<Vec2> grads;  ///< parametric gradients
};

/// W(z) = sum_i w_i B_i(z) and its parametric gradient.
WeightEval eval_weight(const NurbsPatch& patch, const Vec2& z);

/// All (p1+1)(p2+1) rational functions active at z, quotient-rule gradients.
TensorBasisEvaluation eval_nurbs_2d(const NurbsPatch& patch, const Vec2& z);

/// Refined patch and control points, transferred in homogeneous form (w c, w).
struct RefinedPatch {
    NurbsPatch patch;
    std::vector<Vec2> points;
};

RefinedPatch refine_patch(const NurbsPatch& patch, const std::vector<Vec2>& points, const Refinement& r1,
                          const Refinement& r2);

}  // namespace siga
