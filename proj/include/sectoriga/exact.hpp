#pragma once

#include "sectoriga/common.hpp"

#include <string>
#include <vector>

namespace siga {

/// J_nu(z), real nu >= 0, z >= 0.
double bessel_j(double nu, double z);
/// J_nu'(z) = (nu/z) J_nu(z) - J_{nu+1}(z).
double bessel_j_deriv(double nu, double z);
/// McMahon estimate pi (m + nu/2 - 1/4).
double mcmahon_guess(double nu, int m);
/// m-th positive zero of J_nu.
double bessel_zero(double nu, int m);
/// All positive zeros of J_nu below Z, ascending.
std::vector<double> bessel_zeros_below(double nu, double Z);

enum class Regularity { Smooth, SobolevLimit };

struct ExactEigenpair {
    int k = 0;           ///< angular index
    int m = 1;           ///< radial index
    double omega = 2.0 * kPi;
    double nu = 0.0;     ///< k pi / omega
    double mu = 0.0;     ///< eigenfrequency
    double lambda = 0.0; ///< mu^2
    Regularity regularity = Regularity::Smooth;
    double s_star = 0.0; ///< u in H^s for s < s_star (infinite when smooth)

    /// "smooth" or "H^s" with s the largest integer below s_star.
    std::string regularity_label() const;
};

bool is_integer_order(double nu);
ExactEigenpair make_eigenpair(double omega, int k, int m);

/// The n smallest eigenpairs, ascending (ties broken by (k, m)).
std::vector<ExactEigenpair> exact_spectrum(double omega, int n);

/// Which leg to use for points exactly on the positive x-axis when omega = 2 pi.
enum class Face { Lower, Upper };

struct ExactValue {
    double u = 0.0;
    Vec2 grad = Vec2::Zero();
};

/// Polar angle of (x,y) in [0, omega].
double sector_angle(const Vec2& x, double omega, Face face = Face::Lower);
ExactValue eval_exact(const ExactEigenpair& e, const Vec2& x, Face face = Face::Lower);
ExactValue eval_exact_polar(const ExactEigenpair& e, double r, double phi);

}  // namespace siga
