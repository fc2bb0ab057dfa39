#pragma once

#include "sectoriga/errors.hpp"

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace siga {

/// Experiment configuration. Text form: one "key = value" per line.
struct ExperimentConfig {
    std::string omega = "2pi";      ///< number or "<a>pi[/<b>]"
    int p = 2;
    int k = -1;                      ///< -1: p-1
    std::vector<int> schedule{4, 8, 16, 32, 64};
    int j2_factor = 0;               ///< J2 = j2_factor * J1; 0: arc count
    std::string mu = "auto";         ///< number or "auto" (0.9 nu_1 / p)
    std::string mesh = "tensor";     ///< tensor | hierarchical
    int hier_j1 = 4;                 ///< radial count of the coarsest hierarchical level
    int hier_j2 = 0;                 ///< innermost angular count; 0: j2 * hier_j1 / J1 ratio of the tensor rule
    int q = 6;
    int nev = 0;                     ///< 0: automatic
    std::string mode = "1,1";        ///< "k,m" or "spectrum"
    int target_dofs = 976;           ///< spectrum-compare DOF target
    int spike_window = 22;
    double rate_h1 = NAN, rate_l2 = NAN, rate_ev = NAN;  ///< optional rate targets
    double rate_tol = 0.15;
    std::string output = "-";
    std::string dump_matrix;

    // resolved accessors
    double omega_value() const;
    int n_arc() const;
    int k_value() const { return k < 0 ? p - 1 : k; }
    double mu_value() const;
    int j2_for(int J1) const { return (j2_factor > 0 ? j2_factor : n_arc()) * J1; }
    int hier_j2_value() const { return hier_j2 > 0 ? hier_j2 : j2_for(hier_j1); }
    std::pair<int, int> mode_value() const;
    bool spectrum_mode() const { return mode == "spectrum"; }

    void validate() const;
    std::string to_text() const;
    bool operator==(const ExperimentConfig&) const;
};

double parse_angle(const std::string& s);
ExperimentConfig parse_config_text(const std::string& text);

/// Header comment block: config plus resolved values.
std::string csv_header(const ExperimentConfig& cfg, const std::string& extra = {});

std::string fmt_double(double v);

/// One refinement level of a convergence study.
struct LevelResult {
    int level = 0, J1 = 0, J2 = 0, L = 0;
    int dofs = 0, free_dofs = 0;
    long nnz = 0;
    double h = 0.0;
    ErrorReport err;
    std::vector<int> ring_cells;
};

struct ConvergenceResult {
    std::vector<LevelResult> levels;
    RateEstimate h1, l2, ev;
    bool target_missed = false;
    std::string space_summary;
};

/// Build the space for one schedule entry.
DiscreteSpace make_space(const ExperimentConfig& cfg, const SectorGeometry& geo, int J1);
/// 1-based rank of eigenpair (k,m) in the ascending exact spectrum.
int exact_rank(double omega, int k, int m);

ConvergenceResult run_convergence(const ExperimentConfig& cfg);
void write_convergence_csv(std::ostream& os, const ExperimentConfig& cfg, const ConvergenceResult& r);

struct SpectrumVariant {
    int p = 0, k = 0, J1 = 0, J2 = 0, dofs = 0, free_dofs = 0;
    double mu = 1.0;
    std::vector<double> lambda_h, lambda, rel_err, residual;
    double max_residual = 0.0;
    std::vector<ExactEigenpair> exact;
    double mean_rel_err_lower_half = 0.0;
    std::vector<int> spikes;        ///< 1-based indices of the largest errors in the window
    std::vector<int> singular_idx;  ///< 1-based indices with nu = nu_1 in the window
};

/// DOF-matched C^{p-1} / C^0 variants on uniform and graded meshes. Computes the lower
/// half of each discrete spectrum (or nev pairs if larger).
std::vector<SpectrumVariant> run_spectrum_compare(const ExperimentConfig& cfg);
void write_spectrum_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<SpectrumVariant>& v);

void write_exact_csv(std::ostream& os, double omega, int n);

}  // namespace siga
