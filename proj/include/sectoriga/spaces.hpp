#pragma once

#include "sectoriga/geometry.hpp"

#include <string>
#include <vector>

namespace siga {

/// k-refined tensor NURBS space on the sector: degrees (p,p), regularity k at
/// new knots, C0 at arc junctions, radial breakpoints graded by mu.
struct TensorSpace {
    NurbsPatch patch;          ///< refined knots and weights
    std::vector<Vec2> points;  ///< refined control net (geometry reproduction)
    int p = 2, k = 1, J1 = 1, J2 = 4;
    double mu = 1.0;

    int n1() const { return patch.n1(); }
    int n2() const { return patch.n2(); }
    int size() const { return patch.size(); }
    /// Lexicographic indices with i1 = n1 - 1.
    std::vector<int> dirichlet_mask() const;
};

TensorSpace build_tensor_space(const SectorGeometry& geo, int p, int k, int J1, int J2, double mu);

/// Hierarchical space: every level shares the radial knots of the final mesh,
/// level l has angular count J2_0 * 2^l. Radial function i1 carries the angular
/// basis of level min(first ring of its support, L).
struct HierarchicalSpace {
    std::vector<TensorSpace> levels;
    std::vector<int> radial_level;  ///< level of each radial index i1
    int L = 0;
    int J2_0 = 4;

    int size() const;
    /// Angular level used on ring r (0-based, counted from the centre).
    int ring_level(int r) const { return std::min(r, L); }
    /// Angular cell count of ring r.
    int ring_cells(int r) const { return levels[ring_level(r)].J2; }
};

HierarchicalSpace build_hierarchical_space(const SectorGeometry& geo, int p, int k, int J1, int J2_0, int L,
                                           double mu);

/// Parametric element of a (possibly hierarchical) space.
struct ElementInfo {
    Rect rect;
    int ring = 0;   ///< radial element index
    int cell = 0;   ///< angular cell index at the ring's level
    int level = 0;
};

/// Basis data of one element on a tensor grid of points z1 x z2 (z1 fastest).
struct ElementBasis {
    std::vector<int> dofs;     ///< global DOF ids of active functions
    int npts = 0;
    std::vector<double> N;     ///< N[q * nf + a]
    std::vector<double> dN1;   ///< parametric derivative d/dz1
    std::vector<double> dN2;   ///< parametric derivative d/dz2
};

/// Uniform interface used by assembly and error evaluation.
class DiscreteSpace {
public:
    explicit DiscreteSpace(TensorSpace t);
    explicit DiscreteSpace(HierarchicalSpace h);

    bool hierarchical() const { return hier_; }
    int size() const { return size_; }
    int degree() const { return h_.levels[0].p; }
    int regularity() const { return h_.levels[0].k; }
    double mu() const { return h_.levels[0].mu; }
    int J1() const { return h_.levels[0].J1; }
    int levels() const { return h_.L + 1; }
    const HierarchicalSpace& data() const { return h_; }
    const KnotVector& radial() const { return h_.levels[0].patch.kv1; }

    int global_index(int level, int i1, int i2) const;
    std::vector<int> dirichlet_mask() const;

    int num_elements() const { return static_cast<int>(elements_.size()); }
    const ElementInfo& element(int e) const { return elements_[e]; }
    /// Angular cell counts per ring.
    std::vector<int> ring_cells() const;

    void eval_element(int e, const std::vector<double>& z1, const std::vector<double>& z2, ElementBasis& out) const;

    std::string summary() const;

private:
    void setup();

    HierarchicalSpace h_;
    bool hier_ = false;
    int size_ = 0;
    std::vector<int> level_offset_;
    std::vector<int> level_count_;   ///< radial indices per level
    std::vector<int> radial_pos_;    ///< rank of i1 within its level
    std::vector<ElementInfo> elements_;
};

}  // namespace siga
