#include "sectoriga/quadrature.hpp"

#include <cmath>

namespace siga {

GaussRule gauss_legendre(int q) {
    if (q < 1) throw DomainError("gauss_legendre: q must be >= 1");
    GaussRule g;
    g.nodes.resize(q);
    g.weights.resize(q);
    for (int i = 0; i < (q + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int n = 2; n <= q; ++n) {
                const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            if (q == 1) p0 = 1.0;
            dp = q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int n = 2; n <= q; ++n) {
            const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
            p0 = p1;
            p1 = p2;
        }
        if (q == 1) p0 = 1.0;
        dp = q * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.nodes[i] = -x;
        g.nodes[q - 1 - i] = x;
        g.weights[i] = g.weights[q - 1 - i] = w;
    }
    if (q % 2 == 1) g.nodes[q / 2] = 0.0;
    return g;
}

ElementRule element_rule(const Rect& e, const GaussRule& g) {
    ElementRule r;
    const int q = static_cast<int>(g.nodes.size());
    const double c1 = 0.5 * (e.a1 + e.b1), h1 = 0.5 * (e.b1 - e.a1);
    const double c2 = 0.5 * (e.a2 + e.b2), h2 = 0.5 * (e.b2 - e.a2);
    for (int i = 0; i < q; ++i) {
        r.z1.push_back(c1 + h1 * g.nodes[i]);
        r.w1.push_back(h1 * g.weights[i]);
        r.z2.push_back(c2 + h2 * g.nodes[i]);
        r.w2.push_back(h2 * g.weights[i]);
    }
    return r;
}

ElementRule element_rule(const Rect& e, int q) { return element_rule(e, gauss_legendre(q)); }

Vec2 ElementRule::point(int i) const {
    const int n1 = static_cast<int>(z1.size());
    return Vec2(z1[i % n1], z2[i / n1]);
}

double ElementRule::weight(int i) const {
    const int n1 = static_cast<int>(z1.size());
    return w1[i % n1] * w2[i / n1];
}

}  // namespace siga
