#pragma once

#include "sectoriga/assembly.hpp"
#include "sectoriga/eigensolve.hpp"
#include "sectoriga/exact.hpp"

#include <functional>
#include <vector>

namespace siga {

/// Quadrature points of a mesh in physical coordinates with physical weights.
struct QuadPoints {
    std::vector<Vec2> zeta, x;
    std::vector<double> w;
    int size() const { return static_cast<int>(w.size()); }
};

QuadPoints quadrature_points(const DiscreteSpace& space, const SectorGeometry& geo, int q);
QuadPoints quadrature_points(const BezierMesh& mesh, const SectorGeometry& geo, int q);

/// Field values and physical gradients at quadrature points.
struct FieldSamples {
    std::vector<double> v;
    std::vector<Vec2> g;
};

using Field = std::function<ExactValue(const Vec2& x)>;

FieldSamples sample(const Field& f, const QuadPoints& pts);
FieldSamples sample_exact(const ExactEigenpair& e, const QuadPoints& pts);
/// u_h = sum_i c_i N_i at the points of quadrature_points(space, geo, q).
FieldSamples sample_discrete(const DiscreteSpace& space, const SectorGeometry& geo, int q,
                             const Eigen::VectorXd& global_coeffs);

double seminorm_L2h(const FieldSamples& v, const QuadPoints& pts);
double seminorm_H1h(const FieldSamples& v, const QuadPoints& pts);
double inner_L2h(const FieldSamples& a, const FieldSamples& b, const QuadPoints& pts);
FieldSamples difference(const FieldSamples& a, const FieldSamples& b);

/// Rescale u_h to positive L2_h cosine and equal L2_h norm; MatchingError if |cos| < 0.1.
FieldSamples align(const FieldSamples& uh, const FieldSamples& u, const QuadPoints& pts, double* cosine = nullptr);

/// Rank pairing discrete[i] <-> exact[result[i]]. Exact clusters (relative gap
/// < 1e-8) are assigned inside the block by maximal total |cosine| when a
/// cosine callback is given.
std::vector<int> match_spectra(const std::vector<double>& discrete, const std::vector<ExactEigenpair>& exact,
                               const std::function<double(int, int)>& abs_cosine = {});

struct RateEstimate {
    double slope = 0.0;
    bool monotone = true;
};

/// Least-squares slope of log(err) against log(h) over the last three levels.
RateEstimate estimate_rate(const std::vector<double>& h, const std::vector<double>& err);

/// mu = 0.9 nu_1 / p, nu_1 = pi / omega, capped at 1.
double suggest_mu(double omega, int p);
/// 1 if nu is a nonnegative integer or nu >= p, else 0.9 nu / p.
double suggest_mu_mode(double nu, int p);

struct ErrorReport {
    int k = 0, m = 1, index = 0;
    double lambda = 0.0, lambda_h = 0.0;
    double ev_abs = 0.0, ev_rel = 0.0;
    double l2 = 0.0, h1 = 0.0;
    double cosine = 0.0;
    int dofs = 0;
};

/// Errors of discrete eigenpair `col` against exact pair e.
ErrorReport eigenpair_errors(const DiscreteSpace& space, const SectorGeometry& geo, const AssembledSystem& sys,
                             const DiscreteSpectrum& spec, int col, const ExactEigenpair& e, int q = 6);

}  // namespace siga
