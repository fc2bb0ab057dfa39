#include "sectoriga/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace siga {

QuadPoints quadrature_points(const DiscreteSpace& space, const SectorGeometry& geo, int q) {
    const GaussRule g = gauss_legendre(q);
    QuadPoints pts;
    for (int e = 0; e < space.num_elements(); ++e) {
        const ElementRule rule = element_rule(space.element(e).rect, g);
        for (int i = 0; i < rule.size(); ++i) {
            const Vec2 z = rule.point(i);
            pts.zeta.push_back(z);
            pts.x.push_back(geo.map(z));
            pts.w.push_back(rule.weight(i) * std::abs(geo.jacobian(z).det));
        }
    }
    return pts;
}

QuadPoints quadrature_points(const BezierMesh& mesh, const SectorGeometry& geo, int q) {
    const GaussRule g = gauss_legendre(q);
    QuadPoints pts;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementRule rule = element_rule(mesh.element(e), g);
        for (int i = 0; i < rule.size(); ++i) {
            const Vec2 z = rule.point(i);
            pts.zeta.push_back(z);
            pts.x.push_back(geo.map(z));
            pts.w.push_back(rule.weight(i) * std::abs(geo.jacobian(z).det));
        }
    }
    return pts;
}

FieldSamples sample(const Field& f, const QuadPoints& pts) {
    FieldSamples s;
    s.v.resize(pts.size());
    s.g.resize(pts.size());
    for (int i = 0; i < pts.size(); ++i) {
        const ExactValue v = f(pts.x[i]);
        if (!std::isfinite(v.u) || !v.grad.allFinite()) throw DomainError("field sample: non-finite value");
        s.v[i] = v.u;
        s.g[i] = v.grad;
    }
    return s;
}

FieldSamples sample_exact(const ExactEigenpair& e, const QuadPoints& pts) {
    return sample([&](const Vec2& x) { return eval_exact(e, x); }, pts);
}

FieldSamples sample_discrete(const DiscreteSpace& space, const SectorGeometry& geo, int q,
                             const Eigen::VectorXd& c) {
    if (c.size() != space.size()) throw DomainError("sample_discrete: coefficient count mismatch");
    const GaussRule g = gauss_legendre(q);
    FieldSamples s;
    ElementBasis B;
    for (int e = 0; e < space.num_elements(); ++e) {
        const ElementRule rule = element_rule(space.element(e).rect, g);
        space.eval_element(e, rule.z1, rule.z2, B);
        const int nf = static_cast<int>(B.dofs.size());
        for (int i = 0; i < rule.size(); ++i) {
            const JacobianEval jac = geo.jacobian(rule.point(i));
            double v = 0.0, d1 = 0.0, d2 = 0.0;
            for (int f = 0; f < nf; ++f) {
                const double cf = c[B.dofs[f]];
                v += cf * B.N[i * nf + f];
                d1 += cf * B.dN1[i * nf + f];
                d2 += cf * B.dN2[i * nf + f];
            }
            s.v.push_back(v);
            s.g.push_back(push_forward_gradient(jac.J, jac.det, d1, d2));
        }
    }
    return s;
}

double inner_L2h(const FieldSamples& a, const FieldSamples& b, const QuadPoints& pts) {
    double s = 0.0;
    for (int i = 0; i < pts.size(); ++i) s += a.v[i] * b.v[i] * pts.w[i];
    return s;
}

double seminorm_L2h(const FieldSamples& v, const QuadPoints& pts) {
    double s = 0.0;
    for (int i = 0; i < pts.size(); ++i) {
        if (!std::isfinite(v.v[i])) throw DomainError("seminorm: non-finite field value");
        s += v.v[i] * v.v[i] * pts.w[i];
    }
    return std::sqrt(s);
}

double seminorm_H1h(const FieldSamples& v, const QuadPoints& pts) {
    double s = 0.0;
    for (int i = 0; i < pts.size(); ++i) {
        if (!std::isfinite(v.v[i]) || !v.g[i].allFinite()) throw DomainError("seminorm: non-finite field value");
        s += (v.v[i] * v.v[i] + v.g[i].squaredNorm()) * pts.w[i];
    }
    return std::sqrt(s);
}

FieldSamples difference(const FieldSamples& a, const FieldSamples& b) {
    FieldSamples d;
    d.v.resize(a.v.size());
    d.g.resize(a.g.size());
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        d.v[i] = a.v[i] - b.v[i];
        d.g[i] = a.g[i] - b.g[i];
    }
    return d;
}

FieldSamples align(const FieldSamples& uh, const FieldSamples& u, const QuadPoints& pts, double* cosine) {
    const double nh = seminorm_L2h(uh, pts), nu = seminorm_L2h(u, pts);
    if (nh == 0.0 || nu == 0.0) throw MatchingError("align: zero field");
    const double cs = inner_L2h(uh, u, pts) / (nh * nu);
    if (cosine) *cosine = cs;
    if (std::abs(cs) < 0.1) throw MatchingError("align: discrete and exact eigenfunctions are nearly orthogonal");
    const double scale = (cs > 0.0 ? 1.0 : -1.0) * nu / nh;
    FieldSamples out = uh;
    for (auto& v : out.v) v *= scale;
    for (auto& g : out.g) g *= scale;
    return out;
}

std::vector<int> match_spectra(const std::vector<double>& discrete, const std::vector<ExactEigenpair>& exact,
                               const std::function<double(int, int)>& abs_cosine) {
    const int n = static_cast<int>(std::min(discrete.size(), exact.size()));
    std::vector<int> pairing(n);
    std::iota(pairing.begin(), pairing.end(), 0);
    if (!abs_cosine) return pairing;
    int b0 = 0;
    while (b0 < n) {
        int b1 = b0 + 1;
        while (b1 < n && exact[b1].lambda - exact[b1 - 1].lambda < 1e-8 * exact[b1].lambda) ++b1;
        if (b1 - b0 > 1) {
            std::vector<int> perm(b1 - b0);
            std::iota(perm.begin(), perm.end(), b0);
            std::vector<int> best = perm;
            double best_score = -1.0;
            if (b1 - b0 <= 7) {
                do {
                    double s = 0.0;
                    for (int i = 0; i < b1 - b0; ++i) s += abs_cosine(b0 + i, perm[i]);
                    if (s > best_score) {
                        best_score = s;
                        best = perm;
                    }
                } while (std::next_permutation(perm.begin(), perm.end()));
            } else {
                // greedy for large clusters
                std::vector<bool> used(b1 - b0, false);
                for (int i = 0; i < b1 - b0; ++i) {
                    int arg = -1;
                    double mx = -1.0;
                    for (int j = 0; j < b1 - b0; ++j)
                        if (!used[j] && abs_cosine(b0 + i, b0 + j) > mx) {
                            mx = abs_cosine(b0 + i, b0 + j);
                            arg = j;
                        }
                    used[arg] = true;
                    best[i] = b0 + arg;
                }
            }
            for (int i = 0; i < b1 - b0; ++i) pairing[b0 + i] = best[i];
        }
        b0 = b1;
    }
    return pairing;
}

RateEstimate estimate_rate(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size() || h.size() < 3) throw DomainError("estimate_rate: need >= 3 levels");
    const std::size_t n = h.size();
    RateEstimate r;
    for (std::size_t i = 1; i < n; ++i)
        if (err[i] > err[i - 1]) r.monotone = false;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = n - 3; i < n; ++i) {
        const double x = std::log(h[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    r.slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
    return r;
}

double suggest_mu(double omega, int p) {
    if (p < 1) throw DomainError("suggest_mu: p must be >= 1");
    return std::min(1.0, 0.9 * (kPi / omega) / p);
}

double suggest_mu_mode(double nu, int p) {
    if (is_integer_order(nu) || nu >= p) return 1.0;
    return 0.9 * nu / p;
}

ErrorReport eigenpair_errors(const DiscreteSpace& space, const SectorGeometry& geo, const AssembledSystem& sys,
                             const DiscreteSpectrum& spec, int col, const ExactEigenpair& e, int q) {
    ErrorReport r;
    r.k = e.k;
    r.m = e.m;
    r.index = col + 1;
    r.lambda = e.lambda;
    r.lambda_h = spec.values[col];
    r.ev_abs = std::abs(r.lambda_h - r.lambda);
    r.ev_rel = r.ev_abs / r.lambda;
    r.dofs = sys.size();
    const QuadPoints pts = quadrature_points(space, geo, q);
    const FieldSamples u = sample_exact(e, pts);
    const FieldSamples uh = sample_discrete(space, geo, q, sys.to_global(spec.vectors.col(col)));
    const FieldSamples ua = align(uh, u, pts, &r.cosine);
    const FieldSamples d = difference(u, ua);
    r.l2 = seminorm_L2h(d, pts);
    r.h1 = seminorm_H1h(d, pts);
    return r;
}

}  // namespace siga
