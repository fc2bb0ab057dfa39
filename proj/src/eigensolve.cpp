#include "sectoriga/eigensolve.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace siga {

namespace {

constexpr double kSpuriousResidual = 1e-6;

void normalize_sign(Eigen::VectorXd& x) {
    Eigen::Index imax = 0;
    x.cwiseAbs().maxCoeff(&imax);
    if (x[imax] < 0.0) x = -x;
}

void fill_residuals(const SpMat& A, const SpMat& M, DiscreteSpectrum& s) {
    s.residuals.resize(s.size());
    for (int i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s.values[i])) {
            s.residuals[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        const Eigen::VectorXd Ax = A * s.vectors.col(i);
        const Eigen::VectorXd r = Ax - s.values[i] * (M * s.vectors.col(i));
        s.residuals[i] = r.norm() / std::max(Ax.norm(), 1e-300);
    }
}

DiscreteSpectrum dense_pencil(const SpMat& A, const SpMat& M) {
    const int n = static_cast<int>(A.rows());
    if (n > kDenseLimit) throw SolverError("dense eigensolver: size guard exceeded");
    // M x = theta A x, lambda = 1/theta. Factoring A keeps the lower spectrum accurate on graded
    // meshes, where tiny elements make the mass matrix nearly singular in the A-metric.
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) {
        const double a = A.coeff(i, i);
        if (!(a > 0.0)) throw SolverError("dense eigensolver: nonpositive stiffness diagonal");
        d[i] = 1.0 / std::sqrt(a);
    }
    const Eigen::MatrixXd Ad = d.asDiagonal() * Eigen::MatrixXd(A) * d.asDiagonal();
    const Eigen::MatrixXd Md = d.asDiagonal() * Eigen::MatrixXd(M) * d.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Md, Ad, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver: stiffness matrix not positive definite");
    DiscreteSpectrum s;
    s.values.resize(n);
    s.vectors.resize(n, n);
    const Eigen::MatrixXd V = d.asDiagonal() * es.eigenvectors();
    for (int i = 0; i < n; ++i) {
        const int src = n - 1 - i;
        const double theta = es.eigenvalues()[src];
        Eigen::VectorXd x = V.col(src);
        if (theta > 0.0) {
            s.values[i] = 1.0 / theta;
            x /= std::sqrt(theta);
        } else {
            // below roundoff: eigenvalue not resolvable in double precision
            s.values[i] = std::numeric_limits<double>::infinity();
            x /= std::sqrt(std::max(x.dot(M * x), 1e-300));
        }
        normalize_sign(x);
        s.vectors.col(i) = x;
    }
    return s;
}

}  // namespace

DiscreteSpectrum solve_full(const SpMat& A, const SpMat& M) {
    DiscreteSpectrum s = dense_pencil(A, M);
    fill_residuals(A, M, s);
    return s;
}

DiscreteSpectrum solve_full(const AssembledSystem& sys) { return solve_full(sys.A, sys.M); }

DiscreteSpectrum solve(const AssembledSystem& sys, int nev, const EigenOptions& opt) {
    return solve(sys.A, sys.M, nev, opt);
}

DiscreteSpectrum solve(const SpMat& A, const SpMat& M, int nev, const EigenOptions& opt) {
    const int n = static_cast<int>(A.rows());
    if (nev < 1 || nev > n) throw DomainError("solve: nev must lie in [1, dofs]");
    if (A.cols() != n || M.rows() != n || M.cols() != n) throw DomainError("solve: matrix size mismatch");

    if (n <= opt.dense_threshold && !opt.force_iterative) {
        DiscreteSpectrum full = dense_pencil(A, M);
        DiscreteSpectrum s;
        s.values = full.values.head(nev);
        s.vectors = full.vectors.leftCols(nev);
        fill_residuals(A, M, s);
        return s;
    }

    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
        throw SolverError("solve: factorization of the stiffness matrix failed (pencil not SPD)");

    std::mt19937 rng(opt.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto random_vector = [&] {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = uni(rng);
        return v;
    };

    std::vector<Eigen::VectorXd> Q, MQ;
    std::vector<double> alpha, beta;
    auto orthogonalize = [&](Eigen::VectorXd& w, Eigen::VectorXd& Mw) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < Q.size(); ++i) {
                const double c = MQ[i].dot(w);
                w -= c * Q[i];
                Mw -= c * MQ[i];
            }
        }
    };
    auto push = [&](Eigen::VectorXd w) {
        Eigen::VectorXd Mw = M * w;
        orthogonalize(w, Mw);
        const double nrm = std::sqrt(std::max(w.dot(Mw), 0.0));
        Q.push_back(w / nrm);
        MQ.push_back(Mw / nrm);
    };
    push(random_vector());

    const long cap = std::max<long>(60, static_cast<long>(10.0 * nev * std::sqrt(static_cast<double>(n))));
    int check_at = std::min(n, std::max(2 * nev + 20, 40));
    DiscreteSpectrum out;
    while (true) {
        const int j = static_cast<int>(Q.size()) - 1;
        Eigen::VectorXd w = ldlt.solve(MQ[j]);
        const double a = MQ[j].dot(w);
        alpha.push_back(a);
        w -= a * Q[j];
        if (j > 0) w -= beta[j - 1] * Q[j - 1];
        Eigen::VectorXd Mw = M * w;
        orthogonalize(w, Mw);
        double b = std::sqrt(std::max(w.dot(Mw), 0.0));
        const int m = j + 1;
        bool breakdown = b <= 1e-13 * std::abs(a);
        if (m >= check_at || breakdown || m == n) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                T(i, i) = alpha[i];
                if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> te(T);
            // walk Ritz values from the top; pairs whose true residual is large come from
            // roundoff-level directions of the factorization and are skipped
            Eigen::MatrixXd Qm(n, m);
            for (int r = 0; r < m; ++r) Qm.col(r) = Q[r];
            std::vector<double> vals;
            std::vector<Eigen::VectorXd> vecs;
            bool ok = true;
            for (int c = m - 1; c >= 0 && static_cast<int>(vals.size()) < nev; --c) {
                const double theta = te.eigenvalues()[c];
                const double est = std::abs(b * te.eigenvectors()(m - 1, c)) / std::abs(theta);
                if (!(theta > 0.0) || est > 1e-3 * opt.tol) {
                    ok = false;
                    break;
                }
                Eigen::VectorXd x = Qm * te.eigenvectors().col(c);
                x /= std::sqrt(x.dot(M * x));
                const double lam = 1.0 / theta;
                const Eigen::VectorXd Ax = A * x;
                const double res = (Ax - lam * (M * x)).norm() / std::max(Ax.norm(), 1e-300);
                if (!(res <= kSpuriousResidual)) continue;
                normalize_sign(x);
                vals.push_back(lam);
                vecs.push_back(std::move(x));
            }
            ok = ok && static_cast<int>(vals.size()) == nev;
            if (ok || m == n || m >= cap) {
                if (!ok) throw SolverError("solve: Lanczos did not converge within the iteration budget");
                out.values.resize(nev);
                out.vectors.resize(n, nev);
                for (int i = 0; i < nev; ++i) {
                    out.values[i] = vals[i];
                    out.vectors.col(i) = vecs[i];
                }
                break;
            }
            check_at = std::min(n, static_cast<int>(check_at * 1.5) + 1);
        }
        if (breakdown) {
            // invariant subspace found early: continue with a fresh direction
            beta.push_back(0.0);
            push(random_vector());
        } else {
            beta.push_back(b);
            Q.push_back(w / b);
            MQ.push_back(Mw / b);
        }
    }
    fill_residuals(A, M, out);
    return out;
}

}  // namespace siga
