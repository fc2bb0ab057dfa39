#pragma once

#include "sectoriga/quadrature.hpp"
#include "sectoriga/spaces.hpp"

#include <Eigen/Sparse>
#include <string>
#include <vector>

namespace siga {

using SpMat = Eigen::SparseMatrix<double>;

/// Quadrature stiffness and mass matrices over the free DOFs.
struct AssembledSystem {
    SpMat A, M;
    std::vector<int> free_to_global;
    std::vector<int> global_to_free;  ///< -1 for constrained DOFs
    int num_global = 0;

    int size() const { return static_cast<int>(free_to_global.size()); }
    /// Free coefficient vector -> global vector (zeros on constrained DOFs).
    Eigen::VectorXd to_global(const Eigen::VectorXd& free) const;
};

struct AssemblyOptions {
    int q = 6;
    bool apply_mask = true;
    int threads = 0;  ///< 0: hardware concurrency
};

AssembledSystem assemble(const DiscreteSpace& space, const SectorGeometry& geo, const AssemblyOptions& opt = {});

struct SystemStats {
    int dofs = 0;
    long nnz = 0;
    int bandwidth = 0;
};

SystemStats system_stats(const AssembledSystem& sys);

/// Coordinate-format dump: "row col value" per line, 1-based, 17 significant digits.
void write_coo(const SpMat& m, const std::string& path);

/// Physical gradient J^{-T} g for the parametric gradient g.
inline Vec2 push_forward_gradient(const Eigen::Matrix2d& J, double det, double g1, double g2) {
    return Vec2((J(1, 1) * g1 - J(1, 0) * g2) / det, (-J(0, 1) * g1 + J(0, 0) * g2) / det);
}

}  // namespace siga
