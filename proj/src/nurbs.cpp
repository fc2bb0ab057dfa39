#include "sectoriga/nurbs.hpp"

namespace siga {

void NurbsPatch::validate() const {
    if (static_cast<int>(weights.size()) != size()) throw DomainError("nurbs: weight count mismatch");
    for (double w : weights)
        if (!(w > 0.0)) throw DomainError("nurbs: weights must be positive");
}

WeightEval eval_weight(const NurbsPatch& patch, const Vec2& z) {
    const BasisEvaluation b1 = eval_basis(patch.kv1, z[0], 1);
    const BasisEvaluation b2 = eval_basis(patch.kv2, z[1], 1);
    WeightEval out;
    for (int b = 0; b <= patch.kv2.degree(); ++b) {
        for (int a = 0; a <= patch.kv1.degree(); ++a) {
            const double w = patch.weights[patch.index(b1.first + a, b2.first + b)];
            out.W += w * b1.ders[0][a] * b2.ders[0][b];
            out.grad[0] += w * b1.ders[1][a] * b2.ders[0][b];
            out.grad[1] += w * b1.ders[0][a] * b2.ders[1][b];
        }
    }
    return out;
}

TensorBasisEvaluation eval_nurbs_2d(const NurbsPatch& patch, const Vec2& z) {
    const BasisEvaluation b1 = eval_basis(patch.kv1, z[0], 1);
    const BasisEvaluation b2 = eval_basis(patch.kv2, z[1], 1);
    const int q1 = patch.kv1.degree() + 1, q2 = patch.kv2.degree() + 1;
    TensorBasisEvaluation out;
    out.index.reserve(q1 * q2);
    out.values.reserve(q1 * q2);
    out.grads.reserve(q1 * q2);
    WeightEval W;
    for (int b = 0; b < q2; ++b) {
        for (int a = 0; a < q1; ++a) {
            const int i1 = b1.first + a, i2 = b2.first + b;
            const double w = patch.weights[patch.index(i1, i2)];
            const double B = b1.ders[0][a] * b2.ders[0][b];
            const Vec2 dB(b1.ders[1][a] * b2.ders[0][b], b1.ders[0][a] * b2.ders[1][b]);
            out.index.push_back({i1, i2});
            out.values.push_back(w * B);
            out.grads.push_back(w * dB);
            W.W += w * B;
            W.grad += w * dB;
        }
    }
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] /= W.W;
        out.grads[i] = (out.grads[i] - out.values[i] * W.grad) / W.W;
    }
    return out;
}

RefinedPatch refine_patch(const NurbsPatch& patch, const std::vector<Vec2>& points, const Refinement& r1,
                          const Refinement& r2) {
    patch.validate();
    if (static_cast<int>(points.size()) != patch.size()) throw DomainError("refine_patch: point count mismatch");
    if (r1.transfer.cols() != patch.n1() || r2.transfer.cols() != patch.n2())
        throw DomainError("refine_patch: transfer size mismatch");
    const int n1 = patch.n1(), n2 = patch.n2();
    // homogeneous components as n1 x n2 matrices
    std::array<Eigen::MatrixXd, 3> H;
    for (auto& h : H) h.resize(n1, n2);
    for (int i2 = 0; i2 < n2; ++i2) {
        for (int i1 = 0; i1 < n1; ++i1) {
            const int i = patch.index(i1, i2);
            const double w = patch.weights[i];
            H[0](i1, i2) = w * points[i][0];
            H[1](i1, i2) = w * points[i][1];
            H[2](i1, i2) = w;
        }
    }
    RefinedPatch out;
    out.patch.kv1 = r1.kv;
    out.patch.kv2 = r2.kv;
    for (auto& h : H) h = r1.transfer * h * r2.transfer.transpose();
    const int m1 = r1.kv.size(), m2 = r2.kv.size();
    out.patch.weights.resize(m1 * m2);
    out.points.resize(m1 * m2);
    for (int i2 = 0; i2 < m2; ++i2) {
        for (int i1 = 0; i1 < m1; ++i1) {
            const int i = i1 + m1 * i2;
            const double w = H[2](i1, i2);
            out.patch.weights[i] = w;
            out.points[i] = Vec2(H[0](i1, i2) / w, H[1](i1, i2) / w);
        }
    }
    out.patch.validate();
    return out;
}

}  // namespace siga
