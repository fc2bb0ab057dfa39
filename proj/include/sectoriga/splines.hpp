#pragma once

#include "sectoriga/common.hpp"

#include <vector>

namespace siga {

/// Open knot vector on [0,1]: end knots repeated p+1 times.
class KnotVector {
public:
    KnotVector() = default;
    KnotVector(int degree, std::vector<double> knots);

    int degree() const { return p_; }
    const std::vector<double>& knots() const { return knots_; }
    /// Number of basis functions n = |knots| - p - 1.
    int size() const { return static_cast<int>(knots_.size()) - p_ - 1; }

    std::vector<double> breakpoints() const;
    /// Multiplicity per breakpoint (end points included).
    std::vector<int> multiplicities() const;
    /// k_j = p - m_j per breakpoint.
    std::vector<int> regularities() const;
    int num_elements() const { return static_cast<int>(breakpoints().size()) - 1; }

    /// Index s with knots[s] <= z < knots[s+1]; left-limit span at z = 1.
    int find_span(double z) const;

    bool operator==(const KnotVector& o) const { return p_ == o.p_ && knots_ == o.knots_; }

private:
    int p_ = 0;
    std::vector<double> knots_;
};

/// Nonzero basis functions at one point and their derivatives.
struct BasisEvaluation {
    int span = 0;
    int first = 0;                         ///< index of first nonzero function (span - p)
    std::vector<std::vector<double>> ders; ///< ders[order][local]

    const std::vector<double>& values() const { return ders[0]; }
};

/// Knot vector together with the coefficient transfer old -> new.
struct Refinement {
    KnotVector kv;
    Eigen::MatrixXd transfer;  ///< n_new x n_old
};

/// Uniform breakpoints j/J, one multiplicity per interior breakpoint.
KnotVector make_uniform(int p, int J, const std::vector<int>& interior_mults);
KnotVector make_uniform(int p, int J, int interior_mult = 1);

/// Graded breakpoints (j/J)^(1/mu), j = 0..J.
KnotVector make_graded(int p, int J, double mu, int interior_mult = 1);
std::vector<double> graded_breakpoints(int J, double mu);

/// Cox-de Boor values and derivatives up to max_deriv.
BasisEvaluation eval_basis(const KnotVector& kv, double z, int max_deriv = 0);

/// Boehm insertion of the given knots (sorted, strictly inside (0,1)).
Refinement insert_knots(const KnotVector& kv, const std::vector<double>& new_knots);

/// Raise degree by t keeping every breakpoint's regularity.
Refinement elevate_degree(const KnotVector& kv, int t);

/// Coefficient version: rows of coeffs are control values.
std::pair<KnotVector, Eigen::MatrixXd> elevate_degree(const KnotVector& kv, const Eigen::MatrixXd& coeffs,
                                                      int t);

/// Greville abscissae.
std::vector<double> greville(const KnotVector& kv);

/// Evaluate a spline with coefficient rows at z.
Eigen::VectorXd eval_spline(const KnotVector& kv, const Eigen::MatrixXd& coeffs, double z);

}  // namespace siga
