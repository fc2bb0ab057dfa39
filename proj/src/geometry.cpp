#include "sectoriga/geometry.hpp"

#include <cmath>

namespace siga {

Vec2 NurbsMap::map(const Vec2& z) const {
    const TensorBasisEvaluation e = eval_nurbs_2d(patch, z);
    Vec2 x = Vec2::Zero();
    for (std::size_t i = 0; i < e.values.size(); ++i) x += e.values[i] * points[patch.index(e.index[i][0], e.index[i][1])];
    return x;
}

JacobianEval NurbsMap::jacobian(const Vec2& z) const {
    const TensorBasisEvaluation e = eval_nurbs_2d(patch, z);
    JacobianEval out;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        const Vec2& c = points[patch.index(e.index[i][0], e.index[i][1])];
        out.J.col(0) += e.grads[i][0] * c;
        out.J.col(1) += e.grads[i][1] * c;
    }
    out.det = out.J.determinant();
    return out;
}

JacobianEval SectorGeometry::jacobian(const Vec2& z) const {
    JacobianEval j = F.jacobian(z);
    j.singular = (z[0] == 0.0);
    if (j.singular) j.det = 0.0;
    return j;
}

std::vector<Vec2> SectorGeometry::weighted_control_points() const {
    std::vector<Vec2> out(F.points.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = F.patch.weights[i] * F.points[i];
    return out;
}

SectorGeometry build_sector(double omega) {
    if (!(omega > 0.0) || omega > 2.0 * kPi * (1.0 + 1e-15))
        throw DomainError("build_sector: angle must lie in (0, 2pi]");
    SectorGeometry g;
    g.omega = omega;
    g.n_arc = static_cast<int>(std::ceil(omega / (kPi / 2.0) - 1e-12));
    const int na = g.n_arc;
    const double d = omega / na;
    g.F.patch.kv1 = KnotVector(1, {0.0, 0.0, 1.0, 1.0});
    g.F.patch.kv2 = make_uniform(2, na, 2);
    const int n2 = 2 * na + 1;
    std::vector<Vec2> ring(n2);
    std::vector<double> w(n2);
    for (int a = 0; a < na; ++a) {
        const double t0 = a * d;
        ring[2 * a] = Vec2(std::cos(t0), std::sin(t0));
        w[2 * a] = 1.0;
        const double tm = t0 + 0.5 * d, c = std::cos(0.5 * d);
        ring[2 * a + 1] = Vec2(std::cos(tm) / c, std::sin(tm) / c);
        w[2 * a + 1] = c;
    }
    ring[n2 - 1] = Vec2(std::cos(omega), std::sin(omega));
    w[n2 - 1] = 1.0;
    // exact values at multiples of pi/4
    for (auto& p : ring)
        for (int k = 0; k < 2; ++k)
            if (std::abs(p[k]) < 1e-15) p[k] = 0.0;
    g.F.patch.weights.resize(2 * n2);
    g.F.points.resize(2 * n2);
    for (int i2 = 0; i2 < n2; ++i2) {
        g.F.patch.weights[g.F.patch.index(0, i2)] = w[i2];
        g.F.patch.weights[g.F.patch.index(1, i2)] = w[i2];
        g.F.points[g.F.patch.index(0, i2)] = Vec2::Zero();
        g.F.points[g.F.patch.index(1, i2)] = ring[i2];
    }
    g.F.patch.validate();
    return g;
}

Rect BezierMesh::element(int e) const {
    const int j1 = e % J1(), j2 = e / J1();
    return {z1[j1], z1[j1 + 1], z2[j2], z2[j2 + 1]};
}

BezierMesh build_mesh(const SectorGeometry& geo, int J1, int J2, double mu) {
    if (J2 < 1 || J2 % geo.n_arc != 0) throw DomainError("build_mesh: J2 must be a multiple of the arc count");
    BezierMesh m;
    m.mu = mu;
    m.z1 = graded_breakpoints(J1, mu);
    m.z2.resize(J2 + 1);
    for (int j = 0; j <= J2; ++j) m.z2[j] = static_cast<double>(j) / J2;
    return m;
}

}  // namespace siga
