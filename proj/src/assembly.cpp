#include "sectoriga/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <thread>

namespace siga {

namespace {

using Trip = Eigen::Triplet<double>;

struct Chunk {
    std::vector<Trip> a, m;
    bool finite = true;
};

void assemble_range(const DiscreteSpace& space, const SectorGeometry& geo, const GaussRule& g,
                    const std::vector<int>& g2f, int e0, int e1, Chunk& out) {
    ElementBasis B;
    std::vector<double> gx, gy, wq, val;
    for (int e = e0; e < e1; ++e) {
        const ElementRule rule = element_rule(space.element(e).rect, g);
        space.eval_element(e, rule.z1, rule.z2, B);
        const int nq = rule.size();
        const int nf = static_cast<int>(B.dofs.size());
        gx.assign(nq * nf, 0.0);
        gy.assign(nq * nf, 0.0);
        wq.assign(nq, 0.0);
        for (int q = 0; q < nq; ++q) {
            const JacobianEval jac = geo.jacobian(rule.point(q));
            wq[q] = rule.weight(q) * std::abs(jac.det);
            for (int f = 0; f < nf; ++f) {
                const Vec2 gr = push_forward_gradient(jac.J, jac.det, B.dN1[q * nf + f], B.dN2[q * nf + f]);
                gx[q * nf + f] = gr[0];
                gy[q * nf + f] = gr[1];
            }
        }
        for (int a = 0; a < nf; ++a) {
            const int ra = g2f.empty() ? B.dofs[a] : g2f[B.dofs[a]];
            if (ra < 0) continue;
            for (int b = 0; b < nf; ++b) {
                const int cb = g2f.empty() ? B.dofs[b] : g2f[B.dofs[b]];
                if (cb < 0) continue;
                double sa = 0.0, sm = 0.0;
                for (int q = 0; q < nq; ++q) {
                    const int ia = q * nf + a, ib = q * nf + b;
                    sa += (gx[ia] * gx[ib] + gy[ia] * gy[ib]) * wq[q];
                    sm += B.N[ia] * B.N[ib] * wq[q];
                }
                if (!std::isfinite(sa) || !std::isfinite(sm)) out.finite = false;
                out.a.emplace_back(ra, cb, sa);
                out.m.emplace_back(ra, cb, sm);
            }
        }
    }
}

}  // namespace

Eigen::VectorXd AssembledSystem::to_global(const Eigen::VectorXd& free) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(num_global);
    for (int i = 0; i < size(); ++i) g[free_to_global[i]] = free[i];
    return g;
}

AssembledSystem assemble(const DiscreteSpace& space, const SectorGeometry& geo, const AssemblyOptions& opt) {
    AssembledSystem sys;
    sys.num_global = space.size();
    sys.global_to_free.assign(sys.num_global, 0);
    if (opt.apply_mask)
        for (int i : space.dirichlet_mask()) sys.global_to_free[i] = -1;
    for (int i = 0; i < sys.num_global; ++i) {
        if (sys.global_to_free[i] < 0) continue;
        sys.global_to_free[i] = static_cast<int>(sys.free_to_global.size());
        sys.free_to_global.push_back(i);
    }
    const int n = sys.size();
    const GaussRule g = gauss_legendre(opt.q);

    const int ne = space.num_elements();
    int nt = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
    nt = std::clamp(nt, 1, std::max(1, ne));
    // fixed contiguous ranges; concatenation in range order keeps the reduction order fixed
    std::vector<Chunk> chunks(nt);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
        const int e0 = static_cast<int>(static_cast<long>(ne) * t / nt);
        const int e1 = static_cast<int>(static_cast<long>(ne) * (t + 1) / nt);
        if (nt == 1)
            assemble_range(space, geo, g, sys.global_to_free, e0, e1, chunks[t]);
        else
            pool.emplace_back(assemble_range, std::cref(space), std::cref(geo), std::cref(g),
                              std::cref(sys.global_to_free), e0, e1, std::ref(chunks[t]));
    }
    for (auto& th : pool) th.join();

    std::vector<Trip> ta, tm;
    for (auto& c : chunks) {
        if (!c.finite) throw DomainError("assemble: non-finite matrix entry (quadrature point at the singularity?)");
        ta.insert(ta.end(), c.a.begin(), c.a.end());
        tm.insert(tm.end(), c.m.begin(), c.m.end());
    }
    sys.A.resize(n, n);
    sys.M.resize(n, n);
    sys.A.setFromTriplets(ta.begin(), ta.end());
    sys.M.setFromTriplets(tm.begin(), tm.end());
    sys.A.makeCompressed();
    sys.M.makeCompressed();
    return sys;
}

SystemStats system_stats(const AssembledSystem& sys) {
    SystemStats s;
    s.dofs = sys.size();
    s.nnz = sys.A.nonZeros();
    for (int k = 0; k < sys.A.outerSize(); ++k)
        for (SpMat::InnerIterator it(sys.A, k); it; ++it)
            s.bandwidth = std::max(s.bandwidth, static_cast<int>(std::abs(it.row() - it.col())));
    return s;
}

void write_coo(const SpMat& m, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open " + path);
    os << std::setprecision(17);
    os << "% " << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) os << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

}  // namespace siga
