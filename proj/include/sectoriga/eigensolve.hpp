#pragma once

#include "sectoriga/assembly.hpp"

namespace siga {

/// Eigenpairs of A u = lambda M u, ascending, M-orthonormal vectors.
struct DiscreteSpectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;    ///< one column per eigenpair
    Eigen::VectorXd residuals;  ///< |A u - lambda M u| / |A u|
    int size() const { return static_cast<int>(values.size()); }
};

struct EigenOptions {
    double tol = 1e-10;
    unsigned seed = 12345;
    int dense_threshold = 300;  ///< below this size the dense path is used
    bool force_iterative = false;
};

/// Smallest nev eigenpairs. Shift-invert Lanczos at sigma = 0 with full
/// M-reorthogonalization and a sparse LDL^T factorization of A.
DiscreteSpectrum solve(const SpMat& A, const SpMat& M, int nev, const EigenOptions& opt = {});
DiscreteSpectrum solve(const AssembledSystem& sys, int nev, const EigenOptions& opt = {});

/// Full spectrum from the dense pencil; size guard 5000.
DiscreteSpectrum solve_full(const SpMat& A, const SpMat& M);
DiscreteSpectrum solve_full(const AssembledSystem& sys);

inline constexpr int kDenseLimit = 5000;

}  // namespace siga
