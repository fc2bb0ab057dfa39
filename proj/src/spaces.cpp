#include "sectoriga/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace siga {

namespace {

Refinement compose(const Refinement& first, const Refinement& second) {
    return {second.kv, second.transfer * first.transfer};
}

std::vector<double> repeat(const std::vector<double>& z, int times) {
    std::vector<double> out;
    for (double v : z) out.insert(out.end(), times, v);
    return out;
}

// index of the breakpoint equal to knot value u
int breakpoint_index(const std::vector<double>& z, double u) {
    auto it = std::lower_bound(z.begin(), z.end(), u - 1e-12 * std::abs(u));
    return static_cast<int>(it - z.begin());
}

}  // namespace

std::vector<int> TensorSpace::dirichlet_mask() const {
    std::vector<int> m;
    for (int i2 = 0; i2 < n2(); ++i2) m.push_back(patch.index(n1() - 1, i2));
    return m;
}

TensorSpace build_tensor_space(const SectorGeometry& geo, int p, int k, int J1, int J2, double mu) {
    if (p < 2) throw DomainError("tensor space: degree must be >= 2 to represent circular arcs");
    if (k < 0 || k >= p) throw DomainError("tensor space: regularity must satisfy 0 <= k <= p-1");
    if (J1 < 1) throw DomainError("tensor space: J1 must be >= 1");
    if (J2 < 1 || J2 % geo.n_arc != 0) throw DomainError("tensor space: J2 must be a multiple of the arc count");
    const int mult = p - k;

    const std::vector<double> z1 = graded_breakpoints(J1, mu);
    Refinement e1 = elevate_degree(geo.F.patch.kv1, p - geo.F.patch.kv1.degree());
    Refinement r1 = compose(e1, insert_knots(e1.kv, repeat({z1.begin() + 1, z1.end() - 1}, mult)));

    std::vector<double> z2;
    const int per_arc = J2 / geo.n_arc;
    for (int j = 1; j < J2; ++j)
        if (j % per_arc != 0) z2.push_back(static_cast<double>(j) / J2);
    Refinement e2 = elevate_degree(geo.F.patch.kv2, p - geo.F.patch.kv2.degree());
    Refinement r2 = compose(e2, insert_knots(e2.kv, repeat(z2, mult)));

    RefinedPatch rp = refine_patch(geo.F.patch, geo.F.points, r1, r2);
    TensorSpace s;
    s.patch = std::move(rp.patch);
    s.points = std::move(rp.points);
    s.p = p;
    s.k = k;
    s.J1 = J1;
    s.J2 = J2;
    s.mu = mu;
    return s;
}

int HierarchicalSpace::size() const {
    int n = 0;
    for (std::size_t i1 = 0; i1 < radial_level.size(); ++i1) n += levels[radial_level[i1]].n2();
    return n;
}

HierarchicalSpace build_hierarchical_space(const SectorGeometry& geo, int p, int k, int J1, int J2_0, int L,
                                           double mu) {
    if (L < 0) throw DomainError("hierarchical space: L must be >= 0");
    HierarchicalSpace h;
    h.L = L;
    h.J2_0 = J2_0;
    for (int l = 0; l <= L; ++l) h.levels.push_back(build_tensor_space(geo, p, k, J1, J2_0 << l, mu));
    const KnotVector& kv1 = h.levels[0].patch.kv1;
    const std::vector<double> z = kv1.breakpoints();
    h.radial_level.resize(kv1.size());
    for (int i1 = 0; i1 < kv1.size(); ++i1) {
        const int first_ring = std::min(breakpoint_index(z, kv1.knots()[i1]), static_cast<int>(z.size()) - 2);
        h.radial_level[i1] = std::min(first_ring, L);
    }
    return h;
}

DiscreteSpace::DiscreteSpace(TensorSpace t) : hier_(false) {
    h_.levels.push_back(std::move(t));
    h_.L = 0;
    h_.J2_0 = h_.levels[0].J2;
    h_.radial_level.assign(h_.levels[0].n1(), 0);
    setup();
}

DiscreteSpace::DiscreteSpace(HierarchicalSpace h) : h_(std::move(h)), hier_(h_.L > 0) { setup(); }

void DiscreteSpace::setup() {
    const int nl = h_.L + 1;
    const int n1 = h_.levels[0].n1();
    level_count_.assign(nl, 0);
    radial_pos_.assign(n1, 0);
    for (int i1 = 0; i1 < n1; ++i1) radial_pos_[i1] = level_count_[h_.radial_level[i1]]++;
    level_offset_.assign(nl + 1, 0);
    for (int l = 0; l < nl; ++l) level_offset_[l + 1] = level_offset_[l] + level_count_[l] * h_.levels[l].n2();
    size_ = level_offset_[nl];

    const std::vector<double> z1 = radial().breakpoints();
    elements_.clear();
    for (int r = 0; r + 1 < static_cast<int>(z1.size()); ++r) {
        const int l = h_.ring_level(r);
        const std::vector<double> z2 = h_.levels[l].patch.kv2.breakpoints();
        for (int c = 0; c + 1 < static_cast<int>(z2.size()); ++c)
            elements_.push_back({{z1[r], z1[r + 1], z2[c], z2[c + 1]}, r, c, l});
    }
}

int DiscreteSpace::global_index(int level, int i1, int i2) const {
    return level_offset_[level] + radial_pos_[i1] + level_count_[level] * i2;
}

std::vector<int> DiscreteSpace::dirichlet_mask() const {
    const int i1 = h_.levels[0].n1() - 1;
    const int l = h_.radial_level[i1];
    std::vector<int> m;
    for (int i2 = 0; i2 < h_.levels[l].n2(); ++i2) m.push_back(global_index(l, i1, i2));
    std::sort(m.begin(), m.end());
    return m;
}

std::vector<int> DiscreteSpace::ring_cells() const {
    std::vector<int> c;
    for (int r = 0; r < radial().num_elements(); ++r) c.push_back(h_.levels[h_.ring_level(r)].J2);
    return c;
}

void DiscreteSpace::eval_element(int e, const std::vector<double>& z1, const std::vector<double>& z2,
                                 ElementBasis& out) const {
    const int p1 = radial().degree();
    const int nz1 = static_cast<int>(z1.size()), nz2 = static_cast<int>(z2.size());
    const int nq = nz1 * nz2;
    const ElementInfo& el = elements_[e];

    std::vector<BasisEvaluation> R(nz1);
    for (int i = 0; i < nz1; ++i) R[i] = eval_basis(radial(), z1[i], 1);
    const int first1 = R[0].first;

    std::set<int> used{0};
    for (int a = 0; a <= p1; ++a) used.insert(h_.radial_level[first1 + a]);
    std::vector<std::vector<BasisEvaluation>> A(el.level + 1);
    for (int l : used) {
        A[l].resize(nz2);
        for (int j = 0; j < nz2; ++j) A[l][j] = eval_basis(h_.levels[l].patch.kv2, z2[j], 1);
    }

    // weight function from level 0
    const NurbsPatch& P0 = h_.levels[0].patch;
    const int p2_0 = P0.kv2.degree();
    std::vector<double> W(nq, 0.0), W1(nq, 0.0), W2(nq, 0.0);
    for (int j = 0; j < nz2; ++j) {
        for (int i = 0; i < nz1; ++i) {
            const int q = i + nz1 * j;
            for (int b = 0; b <= p2_0; ++b) {
                for (int a = 0; a <= p1; ++a) {
                    const double w = P0.weights[P0.index(first1 + a, A[0][j].first + b)];
                    W[q] += w * R[i].ders[0][a] * A[0][j].ders[0][b];
                    W1[q] += w * R[i].ders[1][a] * A[0][j].ders[0][b];
                    W2[q] += w * R[i].ders[0][a] * A[0][j].ders[1][b];
                }
            }
        }
    }

    out.dofs.clear();
    struct Fn {
        int a, b, level;
        double w;
    };
    std::vector<Fn> fns;
    for (int a = 0; a <= p1; ++a) {
        const int i1 = first1 + a;
        const int l = h_.radial_level[i1];
        const NurbsPatch& P = h_.levels[l].patch;
        const int f2 = A[l][0].first;
        for (int b = 0; b <= P.kv2.degree(); ++b) {
            out.dofs.push_back(global_index(l, i1, f2 + b));
            fns.push_back({a, b, l, P.weights[P.index(i1, f2 + b)]});
        }
    }
    const int nf = static_cast<int>(fns.size());
    out.npts = nq;
    out.N.assign(nq * nf, 0.0);
    out.dN1.assign(nq * nf, 0.0);
    out.dN2.assign(nq * nf, 0.0);
    for (int j = 0; j < nz2; ++j) {
        for (int i = 0; i < nz1; ++i) {
            const int q = i + nz1 * j;
            for (int f = 0; f < nf; ++f) {
                const Fn& fn = fns[f];
                const BasisEvaluation& a2 = A[fn.level][j];
                const double r0 = R[i].ders[0][fn.a], r1 = R[i].ders[1][fn.a];
                const double s0 = a2.ders[0][fn.b], s1 = a2.ders[1][fn.b];
                const double n = fn.w * r0 * s0 / W[q];
                out.N[q * nf + f] = n;
                out.dN1[q * nf + f] = (fn.w * r1 * s0 - n * W1[q]) / W[q];
                out.dN2[q * nf + f] = (fn.w * r0 * s1 - n * W2[q]) / W[q];
            }
        }
    }
}

std::string DiscreteSpace::summary() const {
    const TensorSpace& t = h_.levels.back();
    std::ostringstream os;
    os << (hier_ ? "hierarchical" : "tensor") << " p=" << t.p << " k=" << t.k << " J1=" << t.J1 << " J2=" << t.J2
       << " mu=" << t.mu << " dofs=" << size_ << " constrained=" << dirichlet_mask().size();
    if (hier_) os << " levels=" << h_.L + 1 << " J2_0=" << h_.J2_0;
    return os.str();
}

}  // namespace siga
