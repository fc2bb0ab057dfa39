#include "sectoriga/splines.hpp"

#include <algorithm>
#include <cmath>

namespace siga {

namespace {

constexpr double kKnotTol = 1e-12;

// relative comparison; graded knots can be far below any absolute tolerance
bool same_knot(double a, double b) { return std::abs(a - b) <= kKnotTol * std::max(std::abs(a), std::abs(b)); }

std::vector<double> open_knots(int p, const std::vector<double>& breaks, const std::vector<int>& mults) {
    std::vector<double> knots(p + 1, 0.0);
    for (std::size_t j = 0; j < mults.size(); ++j) knots.insert(knots.end(), mults[j], breaks[j + 1]);
    knots.insert(knots.end(), p + 1, 1.0);
    return knots;
}

}  // namespace

KnotVector::KnotVector(int degree, std::vector<double> knots) : p_(degree), knots_(std::move(knots)) {
    if (p_ < 0) throw DomainError("knot vector: negative degree");
    const int m = static_cast<int>(knots_.size());
    if (m < 2 * (p_ + 1)) throw DomainError("knot vector: too few knots");
    for (int i = 0; i + 1 < m; ++i)
        if (knots_[i + 1] < knots_[i]) throw DomainError("knot vector: knots not nondecreasing");
    for (int i = 0; i <= p_; ++i)
        if (knots_[i] != 0.0 || knots_[m - 1 - i] != 1.0) throw DomainError("knot vector: not open on [0,1]");
    if (same_knot(knots_[p_ + 1], 0.0) || same_knot(knots_[m - p_ - 2], 1.0))
        throw DomainError("knot vector: end multiplicity must be exactly p+1");
    for (int m_j : multiplicities())
        if (m_j > p_ + 1) throw DomainError("knot vector: multiplicity exceeds p+1");
}

std::vector<double> KnotVector::breakpoints() const {
    std::vector<double> z;
    for (double k : knots_)
        if (z.empty() || !same_knot(k, z.back())) z.push_back(k);
    return z;
}

std::vector<int> KnotVector::multiplicities() const {
    std::vector<int> m;
    double last = -1.0;
    for (double k : knots_) {
        if (m.empty() || !same_knot(k, last)) {
            m.push_back(1);
            last = k;
        } else {
            ++m.back();
        }
    }
    return m;
}

std::vector<int> KnotVector::regularities() const {
    std::vector<int> k = multiplicities();
    for (int& v : k) v = p_ - v;
    return k;
}

int KnotVector::find_span(double z) const {
    const int n = size();
    if (z >= knots_[n]) return n - 1;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), z);
    int s = static_cast<int>(it - knots_.begin()) - 1;
    return std::clamp(s, p_, n - 1);
}

KnotVector make_uniform(int p, int J, const std::vector<int>& interior_mults) {
    if (J < 1) throw DomainError("make_uniform: J must be >= 1");
    if (static_cast<int>(interior_mults.size()) != J - 1)
        throw DomainError("make_uniform: need one multiplicity per interior breakpoint");
    std::vector<double> breaks(J + 1);
    for (int j = 0; j <= J; ++j) breaks[j] = static_cast<double>(j) / J;
    for (int m : interior_mults)
        if (m < 1 || m > p + 1) throw DomainError("make_uniform: interior multiplicity outside [1, p+1]");
    return KnotVector(p, open_knots(p, breaks, interior_mults));
}

KnotVector make_uniform(int p, int J, int interior_mult) {
    return make_uniform(p, J, std::vector<int>(std::max(J - 1, 0), interior_mult));
}

std::vector<double> graded_breakpoints(int J, double mu) {
    if (!(mu > 0.0) || mu > 1.0) throw DomainError("graded breakpoints: mu must lie in (0,1]");
    if (J < 1) throw DomainError("graded breakpoints: J must be >= 1");
    std::vector<double> z(J + 1);
    for (int j = 0; j <= J; ++j) {
        const double t = static_cast<double>(j) / J;
        z[j] = (mu == 1.0) ? t : std::pow(t, 1.0 / mu);
    }
    z[J] = 1.0;
    return z;
}

KnotVector make_graded(int p, int J, double mu, int interior_mult) {
    if (interior_mult < 1 || interior_mult > p + 1)
        throw DomainError("make_graded: interior multiplicity outside [1, p+1]");
    const std::vector<double> z = graded_breakpoints(J, mu);
    return KnotVector(p, open_knots(p, z, std::vector<int>(J - 1, interior_mult)));
}

// Piegl & Tiller, DersBasisFuns.
BasisEvaluation eval_basis(const KnotVector& kv, double z, int max_deriv) {
    if (!(z >= 0.0 && z <= 1.0)) throw DomainError("eval_basis: parameter outside [0,1]");
    const int p = kv.degree();
    const auto& U = kv.knots();
    const int s = kv.find_span(z);
    BasisEvaluation out;
    out.span = s;
    out.first = s - p;
    const int nd = std::max(max_deriv, 0);
    out.ders.assign(nd + 1, std::vector<double>(p + 1, 0.0));

    std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
    std::vector<double> left(p + 1), right(p + 1);
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = z - U[s + 1 - j];
        right[j] = U[s + j] - z;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double tmp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= p; ++j) out.ders[0][j] = ndu[j][p];

    std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= std::min(nd, p); ++k) {
            double d = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            out.ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    int r = p;
    for (int k = 1; k <= std::min(nd, p); ++k) {
        for (int j = 0; j <= p; ++j) out.ders[k][j] *= r;
        r *= (p - k);
    }
    return out;
}

Refinement insert_knots(const KnotVector& kv, const std::vector<double>& new_knots) {
    const int p = kv.degree();
    std::vector<double> U = kv.knots();
    Eigen::MatrixXd T = Eigen::MatrixXd::Identity(kv.size(), kv.size());
    for (double u : new_knots) {
        if (!(u > 0.0 && u < 1.0)) throw DomainError("insert_knots: knot must lie strictly inside (0,1)");
        // snap to an existing knot within tolerance
        for (double k : U)
            if (same_knot(k, u)) u = k;
        const int n = static_cast<int>(U.size()) - p - 1;
        auto it = std::upper_bound(U.begin(), U.end(), u);
        const int s = static_cast<int>(it - U.begin()) - 1;
        const int mult = static_cast<int>(std::count(U.begin(), U.end(), u));
        if (mult + 1 > p + 1) throw DomainError("insert_knots: multiplicity would exceed p+1");
        Eigen::MatrixXd Tn(n + 1, T.cols());
        for (int i = 0; i <= n; ++i) {
            if (i <= s - p) {
                Tn.row(i) = T.row(i);
            } else if (i >= s + 1) {
                Tn.row(i) = T.row(i - 1);
            } else {
                const double alpha = (u - U[i]) / (U[i + p] - U[i]);
                Tn.row(i) = alpha * T.row(i) + (1.0 - alpha) * T.row(i - 1);
            }
        }
        U.insert(it, u);
        T = std::move(Tn);
    }
    return {KnotVector(p, std::move(U)), std::move(T)};
}

std::vector<double> greville(const KnotVector& kv) {
    const int p = kv.degree();
    const auto& U = kv.knots();
    std::vector<double> g(kv.size());
    for (int i = 0; i < kv.size(); ++i) {
        double s = 0.0;
        for (int j = 1; j <= p; ++j) s += U[i + j];
        g[i] = (p == 0) ? 0.5 * (U[i] + U[i + 1]) : s / p;
    }
    return g;
}

namespace {

Eigen::MatrixXd collocation(const KnotVector& kv, const std::vector<double>& pts) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<int>(pts.size()), kv.size());
    for (std::size_t r = 0; r < pts.size(); ++r) {
        const BasisEvaluation e = eval_basis(kv, pts[r], 0);
        for (int j = 0; j <= kv.degree(); ++j) B(static_cast<int>(r), e.first + j) = e.ders[0][j];
    }
    return B;
}

}  // namespace

// Target space is known exactly, so the transfer follows from interpolation at
// the new Greville points (old functions lie in the new space).
Refinement elevate_degree(const KnotVector& kv, int t) {
    if (t < 0) throw DomainError("elevate_degree: t must be >= 0");
    if (t == 0) return {kv, Eigen::MatrixXd::Identity(kv.size(), kv.size())};
    const int p = kv.degree();
    const std::vector<double> z = kv.breakpoints();
    std::vector<int> m = kv.multiplicities();
    for (std::size_t j = 1; j + 1 < m.size(); ++j)
        if (m[j] > p) throw DomainError("elevate_degree: discontinuous knot vectors are not supported");
    std::vector<int> interior(m.begin() + 1, m.end() - 1);
    for (int& v : interior) v += t;
    std::vector<double> knots(p + t + 1, 0.0);
    for (std::size_t j = 0; j < interior.size(); ++j) knots.insert(knots.end(), interior[j], z[j + 1]);
    knots.insert(knots.end(), p + t + 1, 1.0);
    KnotVector out(p + t, std::move(knots));
    const std::vector<double> g = greville(out);
    const Eigen::MatrixXd Bn = collocation(out, g);
    const Eigen::MatrixXd Bo = collocation(kv, g);
    Eigen::MatrixXd T = Bn.partialPivLu().solve(Bo);
    T = T.unaryExpr([](double v) { return std::abs(v) < 1e-15 ? 0.0 : v; });
    return {std::move(out), std::move(T)};
}

std::pair<KnotVector, Eigen::MatrixXd> elevate_degree(const KnotVector& kv, const Eigen::MatrixXd& coeffs, int t) {
    if (coeffs.rows() != kv.size()) throw DomainError("elevate_degree: coefficient count mismatch");
    Refinement r = elevate_degree(kv, t);
    return {r.kv, r.transfer * coeffs};
}

Eigen::VectorXd eval_spline(const KnotVector& kv, const Eigen::MatrixXd& coeffs, double z) {
    const BasisEvaluation e = eval_basis(kv, z, 0);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(coeffs.cols());
    for (int j = 0; j <= kv.degree(); ++j) v += e.ders[0][j] * coeffs.row(e.first + j).transpose();
    return v;
}

}  // namespace siga
