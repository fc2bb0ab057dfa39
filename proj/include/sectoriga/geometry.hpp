#pragma once

#include "sectoriga/nurbs.hpp"

#include <vector>

namespace siga {

struct JacobianEval {
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();  ///< columns dF/dz1, dF/dz2
    double det = 0.0;
    bool singular = false;  ///< evaluated on the collapsed edge z1 = 0
};

/// Map F(z) = sum_i c_i N_i(z) over a rational patch.
struct NurbsMap {
    NurbsPatch patch;
    std::vector<Vec2> points;

    Vec2 map(const Vec2& z) const;
    JacobianEval jacobian(const Vec2& z) const;
};

/// Singular polar-like parameterization of the sector {0 < r < 1, 0 < phi < omega}.
struct SectorGeometry {
    double omega = 2.0 * kPi;
    int n_arc = 4;
    NurbsMap F;

    Vec2 map(const Vec2& z) const { return F.map(z); }
    JacobianEval jacobian(const Vec2& z) const;
    /// Control points in projective form w*c.
    std::vector<Vec2> weighted_control_points() const;
    double arc_angle() const { return omega / n_arc; }
};

SectorGeometry build_sector(double omega);

struct Rect {
    double a1, b1, a2, b2;
    double area() const { return (b1 - a1) * (b2 - a2); }
};

/// Tensor Bezier mesh of the parametric square.
struct BezierMesh {
    std::vector<double> z1, z2;
    double mu = 1.0;

    int J1() const { return static_cast<int>(z1.size()) - 1; }
    int J2() const { return static_cast<int>(z2.size()) - 1; }
    int num_elements() const { return J1() * J2(); }
    /// Element e = j1 + J1 * j2.
    Rect element(int e) const;
    /// h2 / (first radial width) of the innermost parametric element.
    double inner_aspect_ratio() const { return (z2[1] - z2[0]) / (z1[1] - z1[0]); }
};

BezierMesh build_mesh(const SectorGeometry& geo, int J1, int J2, double mu);

}  // namespace siga
