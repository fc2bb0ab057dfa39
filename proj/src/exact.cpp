#include "sectoriga/exact.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace siga {

namespace {

double bessel_series(double nu, double z) {
    const double h = 0.5 * z;
    double term = (nu == 0.0) ? 1.0 : std::exp(nu * std::log(h) - std::lgamma(nu + 1.0));
    double sum = term;
    for (int j = 1; j < 1000; ++j) {
        term *= -(h * h) / (j * (nu + j));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Miller backward recurrence, normalized by
// sum_k (nu0 + 2k) Gamma(nu0 + k) / k! J_{nu0+2k}(z) = (z/2)^nu0.
double bessel_miller(double nu, double z) {
    const int n = static_cast<int>(std::floor(nu));
    const double nu0 = nu - n;
    int K = std::max(n, static_cast<int>(z)) + 30 + static_cast<int>(6.0 * std::sqrt(z));
    if (K % 2) ++K;
    std::vector<double> c(K / 2 + 1);
    c[0] = std::tgamma(nu0 + 1.0);
    double g = c[0];
    for (int k = 1; k <= K / 2; ++k) {
        if (k > 1) g *= (nu0 + k - 1.0) / k;
        c[k] = (nu0 + 2.0 * k) * g;
    }
    double f_next = 0.0, f = 1e-30, S = c[K / 2] * f, fn = (K == n) ? f : 0.0;
    for (int i = K; i >= 1; --i) {
        const double f_prev = 2.0 * (nu0 + i) / z * f - f_next;
        f_next = f;
        f = f_prev;
        if ((i - 1) % 2 == 0) S += c[(i - 1) / 2] * f;
        if (i - 1 == n) fn = f;
        if (std::abs(f) > 1e200) {
            f *= 1e-200;
            f_next *= 1e-200;
            S *= 1e-200;
            fn *= 1e-200;
        }
    }
    return fn * std::pow(0.5 * z, nu0) / S;
}

}  // namespace

double bessel_j(double nu, double z) {
    if (!(nu >= 0.0) || !(z >= 0.0) || !std::isfinite(z)) throw DomainError("bessel_j: need nu >= 0 and z >= 0");
    if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (z <= 4.0 || z * z <= 2.0 * (nu + 1.0)) return bessel_series(nu, z);
    return bessel_miller(nu, z);
}

double bessel_j_deriv(double nu, double z) {
    if (z == 0.0) {
        if (nu == 0.0 || nu > 1.0) return 0.0;
        if (nu == 1.0) return 0.5;
        throw DomainError("bessel_j_deriv: derivative unbounded at z = 0 for 0 < nu < 1");
    }
    return (nu / z) * bessel_j(nu, z) - bessel_j(nu + 1.0, z);
}

double mcmahon_guess(double nu, int m) { return kPi * (m + 0.5 * nu - 0.25); }

namespace {

double refine_zero(double nu, double lo, double hi, double guess) {
    double flo = bessel_j(nu, lo);
    double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = bessel_j(nu, x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        const double d = bessel_j_deriv(nu, x);
        double xn = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        const double step = std::abs(xn - x);
        x = xn;
        if (step <= 1e-16 * x || hi - lo <= 4e-16 * x) break;
    }
    return x;
}

}  // namespace

std::vector<double> bessel_zeros_below(double nu, double Z) {
    if (!(nu >= 0.0)) throw DomainError("bessel_zeros_below: nu must be >= 0");
    std::vector<double> zs;
    const double h = 0.05;
    // J_nu > 0 on (0, nu]
    double a = std::max(nu, h);
    double fa = bessel_j(nu, a);
    while (a < Z) {
        const double b = std::min(a + h, Z);
        const double fb = bessel_j(nu, b);
        if (fb == 0.0) {
            zs.push_back(b);
        } else if ((fa > 0.0) != (fb > 0.0) && fa != 0.0) {
            zs.push_back(refine_zero(nu, a, b, mcmahon_guess(nu, static_cast<int>(zs.size()) + 1)));
        }
        a = b;
        fa = fb;
    }
    return zs;
}

double bessel_zero(double nu, int m) {
    if (m < 1) throw DomainError("bessel_zero: m must be >= 1");
    double Z = std::max(mcmahon_guess(nu, m), nu) + 10.0;
    for (int it = 0; it < 100; ++it) {
        const std::vector<double> zs = bessel_zeros_below(nu, Z);
        if (static_cast<int>(zs.size()) >= m) return zs[m - 1];
        Z += 10.0 + 0.5 * Z;
    }
    throw SolverError("bessel_zero: no convergence");
}

bool is_integer_order(double nu) { return std::abs(nu - std::round(nu)) <= 1e-12 * std::max(1.0, nu); }

std::string ExactEigenpair::regularity_label() const {
    if (regularity == Regularity::Smooth) return "smooth";
    return "H^" + std::to_string(static_cast<int>(std::ceil(s_star - 1e-12)) - 1);
}

ExactEigenpair make_eigenpair(double omega, int k, int m) {
    ExactEigenpair e;
    e.k = k;
    e.m = m;
    e.omega = omega;
    e.nu = k * (kPi / omega);
    e.mu = bessel_zero(e.nu, m);
    e.lambda = e.mu * e.mu;
    if (is_integer_order(e.nu)) {
        e.regularity = Regularity::Smooth;
        e.s_star = HUGE_VAL;
    } else {
        e.regularity = Regularity::SobolevLimit;
        e.s_star = e.nu + 1.0;
    }
    return e;
}

std::vector<ExactEigenpair> exact_spectrum(double omega, int n) {
    if (n < 1) throw DomainError("exact_spectrum: n must be >= 1");
    if (!(omega > 0.0) || omega > 2.0 * kPi * (1.0 + 1e-15)) throw DomainError("exact_spectrum: bad angle");
    double Z = 1.2 * std::sqrt(8.0 * kPi * n / omega) + 3.0;
    while (true) {
        std::vector<ExactEigenpair> all;
        // mu_{nu,m} > nu, so orders nu >= Z contribute nothing below Z
        for (int k = 0; k * (kPi / omega) < Z; ++k) {
            const double nu = k * (kPi / omega);
            const std::vector<double> zs = bessel_zeros_below(nu, Z);
            for (std::size_t m = 0; m < zs.size(); ++m) {
                ExactEigenpair e;
                e.k = k;
                e.m = static_cast<int>(m) + 1;
                e.omega = omega;
                e.nu = nu;
                e.mu = zs[m];
                e.lambda = zs[m] * zs[m];
                if (is_integer_order(nu)) {
                    e.regularity = Regularity::Smooth;
                    e.s_star = HUGE_VAL;
                } else {
                    e.regularity = Regularity::SobolevLimit;
                    e.s_star = nu + 1.0;
                }
                all.push_back(e);
            }
        }
        if (static_cast<int>(all.size()) >= n) {
            std::sort(all.begin(), all.end(), [](const ExactEigenpair& a, const ExactEigenpair& b) {
                return std::tie(a.mu, a.k, a.m) < std::tie(b.mu, b.k, b.m);
            });
            all.resize(n);
            return all;
        }
        Z *= 1.3;
    }
}

double sector_angle(const Vec2& x, double omega, Face face) {
    if (x[1] == 0.0 && x[0] > 0.0) return (face == Face::Upper && omega >= 2.0 * kPi - 1e-14) ? omega : 0.0;
    double phi = std::atan2(x[1], x[0]);
    if (phi < 0.0) phi += 2.0 * kPi;
    if (phi > omega) phi = (phi - omega < 0.5 * (2.0 * kPi - omega)) ? omega : 0.0;
    return phi;
}

ExactValue eval_exact_polar(const ExactEigenpair& e, double r, double phi) {
    ExactValue v;
    const double c = std::cos(e.nu * phi), s = std::sin(e.nu * phi);
    if (r == 0.0) {
        v.u = (e.nu == 0.0) ? 1.0 : 0.0;
        if (e.nu == 0.0 || e.nu > 1.0) return v;
        if (e.nu == 1.0) {
            v.grad = Vec2(0.5 * e.mu, 0.0);
            return v;
        }
        throw DomainError("eval_exact: gradient unbounded at the vertex for 0 < nu < 1");
    }
    const double J = bessel_j(e.nu, e.mu * r);
    v.u = J * c;
    const double ur = e.mu * bessel_j_deriv(e.nu, e.mu * r) * c;
    const double uphi_r = -e.nu * J * s / r;
    const double cp = std::cos(phi), sp = std::sin(phi);
    v.grad = Vec2(ur * cp - uphi_r * sp, ur * sp + uphi_r * cp);
    return v;
}

ExactValue eval_exact(const ExactEigenpair& e, const Vec2& x, Face face) {
    return eval_exact_polar(e, x.norm(), sector_angle(x, e.omega, face));
}

}  // namespace siga
