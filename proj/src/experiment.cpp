#include "sectoriga/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace siga {

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

double parse_angle(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ConfigError("empty angle");
    try {
        const auto pos = s.find("pi");
        if (pos == std::string::npos) {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw ConfigError("bad angle: " + raw);
            return v;
        }
        const std::string pre = s.substr(0, pos), post = s.substr(pos + 2);
        double a = 1.0, b = 1.0;
        if (!pre.empty()) {
            std::size_t used = 0;
            a = std::stod(pre, &used);
            if (used != pre.size()) throw ConfigError("bad angle: " + raw);
        }
        if (!post.empty()) {
            if (post[0] != '/') throw ConfigError("bad angle: " + raw);
            std::size_t used = 0;
            b = std::stod(post.substr(1), &used);
            if (used + 1 != post.size()) throw ConfigError("bad angle: " + raw);
        }
        return a * kPi / b;
    } catch (const std::logic_error&) {
        throw ConfigError("bad angle: " + raw);
    }
}

double ExperimentConfig::omega_value() const { return parse_angle(omega); }

int ExperimentConfig::n_arc() const { return build_sector(omega_value()).n_arc; }

double ExperimentConfig::mu_value() const {
    if (mu == "auto") return suggest_mu(omega_value(), p);
    try {
        std::size_t used = 0;
        const double v = std::stod(mu, &used);
        if (used != mu.size()) throw ConfigError("bad mu: " + mu);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("bad mu: " + mu);
    }
}

std::pair<int, int> ExperimentConfig::mode_value() const {
    const auto c = mode.find(',');
    if (c == std::string::npos) throw ConfigError("mode must be \"k,m\" or \"spectrum\"");
    try {
        const int km = std::stoi(mode.substr(0, c)), mm = std::stoi(mode.substr(c + 1));
        if (km < 0 || mm < 1) throw ConfigError("mode indices out of range");
        return {km, mm};
    } catch (const std::logic_error&) {
        throw ConfigError("bad mode: " + mode);
    }
}

void ExperimentConfig::validate() const {
    const double w = omega_value();
    if (!(w > 0.0) || w > 2.0 * kPi * (1.0 + 1e-15)) throw ConfigError("omega must lie in (0, 2pi]");
    if (p < 2) throw ConfigError("p must be >= 2");
    if (k < -1 || k_value() > p - 1) throw ConfigError("k must satisfy 0 <= k <= p-1");
    if (schedule.empty()) throw ConfigError("schedule is empty");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < 1) throw ConfigError("schedule entries must be >= 1");
        if (i > 0 && schedule[i] <= schedule[i - 1]) throw ConfigError("schedule must be strictly increasing");
    }
    const double m = mu_value();
    if (!(m > 0.0) || m > 1.0) throw ConfigError("mu must lie in (0, 1]");
    if (mesh != "tensor" && mesh != "hierarchical") throw ConfigError("mesh must be tensor or hierarchical");
    if (q < 1) throw ConfigError("q must be >= 1");
    if (nev < 0) throw ConfigError("nev must be >= 0");
    if (j2_factor < 0) throw ConfigError("j2_factor must be >= 0");
    if (!spectrum_mode()) mode_value();
    if (mesh == "hierarchical") {
        if (hier_j1 < 1) throw ConfigError("hier_j1 must be >= 1");
        if (hier_j2_value() % n_arc() != 0) throw ConfigError("hier_j2 must be a multiple of the arc count");
        for (int J1 : schedule) {
            int r = J1 / hier_j1;
            if (J1 % hier_j1 != 0 || (r & (r - 1)) != 0)
                throw ConfigError("hierarchical schedule entries must be hier_j1 * 2^L");
        }
    }
    if (!(rate_tol > 0.0)) throw ConfigError("rate_tol must be positive");
    if (target_dofs < 1 || spike_window < 1) throw ConfigError("target_dofs and spike_window must be positive");
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream os;
    os << "omega = \"" << omega << "\"\n";
    os << "p = " << p << "\n";
    os << "k = " << k << "\n";
    os << "schedule = [";
    for (std::size_t i = 0; i < schedule.size(); ++i) os << (i ? ", " : "") << schedule[i];
    os << "]\n";
    os << "j2_factor = " << j2_factor << "\n";
    os << "mu = \"" << mu << "\"\n";
    os << "mesh = \"" << mesh << "\"\n";
    os << "hier_j1 = " << hier_j1 << "\n";
    os << "hier_j2 = " << hier_j2 << "\n";
    os << "q = " << q << "\n";
    os << "nev = " << nev << "\n";
    os << "mode = \"" << mode << "\"\n";
    os << "target_dofs = " << target_dofs << "\n";
    os << "spike_window = " << spike_window << "\n";
    if (!std::isnan(rate_h1)) os << "rate_h1 = " << fmt_double(rate_h1) << "\n";
    if (!std::isnan(rate_l2)) os << "rate_l2 = " << fmt_double(rate_l2) << "\n";
    if (!std::isnan(rate_ev)) os << "rate_ev = " << fmt_double(rate_ev) << "\n";
    os << "rate_tol = " << fmt_double(rate_tol) << "\n";
    os << "output = \"" << output << "\"\n";
    if (!dump_matrix.empty()) os << "dump_matrix = \"" << dump_matrix << "\"\n";
    return os.str();
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
    auto same = [](double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; };
    return omega == o.omega && p == o.p && k == o.k && schedule == o.schedule && j2_factor == o.j2_factor &&
           mu == o.mu && mesh == o.mesh && hier_j1 == o.hier_j1 && hier_j2 == o.hier_j2 && q == o.q &&
           nev == o.nev && mode == o.mode && target_dofs == o.target_dofs && spike_window == o.spike_window &&
           same(rate_h1, o.rate_h1) && same(rate_l2, o.rate_l2) && same(rate_ev, o.rate_ev) &&
           rate_tol == o.rate_tol && output == o.output && dump_matrix == o.dump_matrix;
}

std::string csv_header(const ExperimentConfig& cfg, const std::string& extra) {
    std::ostringstream os;
    std::istringstream in(cfg.to_text());
    std::string line;
    while (std::getline(in, line)) os << "# " << line << "\n";
    os << "# resolved: omega=" << fmt_double(cfg.omega_value()) << " n_arc=" << cfg.n_arc() << " p=" << cfg.p
       << " k=" << cfg.k_value() << " mu=" << fmt_double(cfg.mu_value()) << " q=" << cfg.q << "\n";
    os << "# normalization: u_h scaled to positive L2_h cosine and equal L2_h norm against the exact eigenfunction\n";
    if (!extra.empty()) {
        std::istringstream ex(extra);
        while (std::getline(ex, line)) os << "# " << line << "\n";
    }
    return os.str();
}

DiscreteSpace make_space(const ExperimentConfig& cfg, const SectorGeometry& geo, int J1) {
    const int p = cfg.p, k = cfg.k_value();
    const double mu = cfg.mu_value();
    if (cfg.mesh == "tensor") return DiscreteSpace(build_tensor_space(geo, p, k, J1, cfg.j2_for(J1), mu));
    int L = 0;
    while ((cfg.hier_j1 << L) < J1) ++L;
    return DiscreteSpace(build_hierarchical_space(geo, p, k, J1, cfg.hier_j2_value(), L, mu));
}

int exact_rank(double omega, int k, int m) {
    const ExactEigenpair target = make_eigenpair(omega, k, m);
    int n = 8;
    while (true) {
        const std::vector<ExactEigenpair> s = exact_spectrum(omega, n);
        for (int i = 0; i < n; ++i)
            if (s[i].k == k && s[i].m == m) return i + 1;
        if (s.back().lambda > target.lambda * (1.0 + 1e-12)) throw MatchingError("exact_rank: mode not found");
        n *= 2;
    }
}

ConvergenceResult run_convergence(const ExperimentConfig& cfg) {
    cfg.validate();
    const double omega = cfg.omega_value();
    const SectorGeometry geo = build_sector(omega);
    const auto [mk, mm] = cfg.mode_value();
    const int idx = exact_rank(omega, mk, mm);
    const std::vector<ExactEigenpair> ex = exact_spectrum(omega, idx + 4);

    ConvergenceResult res;
    std::vector<double> hs, e1, e2, e3;
    for (std::size_t lv = 0; lv < cfg.schedule.size(); ++lv) {
        const int J1 = cfg.schedule[lv];
        const DiscreteSpace space = make_space(cfg, geo, J1);
        AssemblyOptions ao;
        ao.q = cfg.q;
        const AssembledSystem sys = assemble(space, geo, ao);
        const int nev = std::min(sys.size(), std::max(cfg.nev, idx + 3));
        if (nev < idx) throw ConfigError("space too small for the requested mode");
        const DiscreteSpectrum spec = solve(sys, nev);

        // candidate columns: the exact cluster containing idx
        std::vector<int> cols;
        for (int j = 0; j < static_cast<int>(ex.size()) && j < nev; ++j)
            if (std::abs(ex[j].lambda - ex[idx - 1].lambda) < 1e-8 * ex[idx - 1].lambda) cols.push_back(j);
        ErrorReport best;
        double best_cos = -1.0;
        for (int c : cols) {
            ErrorReport r = eigenpair_errors(space, geo, sys, spec, c, ex[idx - 1], cfg.q);
            if (std::abs(r.cosine) > best_cos) {
                best_cos = std::abs(r.cosine);
                best = r;
            }
        }
        best.index = idx;
        LevelResult L;
        L.level = static_cast<int>(lv);
        L.J1 = J1;
        L.J2 = space.data().levels.back().J2;
        L.L = space.data().L;
        L.dofs = space.size();
        L.free_dofs = sys.size();
        L.nnz = system_stats(sys).nnz;
        L.h = space.hierarchical() || cfg.mesh == "hierarchical" ? 1.0 / std::sqrt(static_cast<double>(space.size()))
                                                                 : 1.0 / J1;
        L.err = best;
        L.ring_cells = space.ring_cells();
        res.levels.push_back(L);
        res.space_summary = space.summary();
        hs.push_back(L.h);
        e1.push_back(best.h1);
        e2.push_back(best.l2);
        e3.push_back(best.ev_abs);
        if (!cfg.dump_matrix.empty() && lv + 1 == cfg.schedule.size()) {
            write_coo(sys.A, cfg.dump_matrix + "_A.coo");
            write_coo(sys.M, cfg.dump_matrix + "_M.coo");
        }
    }
    if (hs.size() >= 3) {
        res.h1 = estimate_rate(hs, e1);
        res.l2 = estimate_rate(hs, e2);
        res.ev = estimate_rate(hs, e3);
        auto miss = [&](double target, double got) {
            return !std::isnan(target) && std::abs(got - target) > cfg.rate_tol * target;
        };
        res.target_missed = miss(cfg.rate_h1, res.h1.slope) || miss(cfg.rate_l2, res.l2.slope) ||
                            miss(cfg.rate_ev, res.ev.slope);
    } else if (!std::isnan(cfg.rate_h1) || !std::isnan(cfg.rate_l2) || !std::isnan(cfg.rate_ev)) {
        throw ConfigError("rate targets need at least 3 schedule entries");
    }
    return res;
}

void write_convergence_csv(std::ostream& os, const ExperimentConfig& cfg, const ConvergenceResult& r) {
    os << csv_header(cfg, "space: " + r.space_summary);
    os << "level,J1,J2,L,mesh,p,k,mu,dofs,free_dofs,nnz,h,mode_k,mode_m,index,lambda,lambda_h,ev_abs,ev_rel,l2h,h1h,"
          "cosine\n";
    for (const auto& L : r.levels) {
        os << L.level << "," << L.J1 << "," << L.J2 << "," << L.L << "," << cfg.mesh << "," << cfg.p << ","
           << cfg.k_value() << "," << fmt_double(cfg.mu_value()) << "," << L.dofs << "," << L.free_dofs << ","
           << L.nnz << "," << fmt_double(L.h) << "," << L.err.k << "," << L.err.m << "," << L.err.index << ","
           << fmt_double(L.err.lambda) << "," << fmt_double(L.err.lambda_h) << "," << fmt_double(L.err.ev_abs)
           << "," << fmt_double(L.err.ev_rel) << "," << fmt_double(L.err.l2) << "," << fmt_double(L.err.h1) << ","
           << fmt_double(L.err.cosine) << "\n";
    }
    if (r.levels.size() >= 3) {
        os << "# rates (last 3 levels): h1h=" << fmt_double(r.h1.slope) << " l2h=" << fmt_double(r.l2.slope)
           << " ev=" << fmt_double(r.ev.slope) << "\n";
        os << "# monotone: h1h=" << r.h1.monotone << " l2h=" << r.l2.monotone << " ev=" << r.ev.monotone << "\n";
    }
}

namespace {

int count1(int p, int k, int J1) { return p + 1 + (J1 - 1) * (p - k); }
int count2(int p, int k, int J2, int n_arc) { return p + 1 + (J2 - n_arc) * (p - k) + (n_arc - 1) * p; }

}  // namespace

std::vector<SpectrumVariant> run_spectrum_compare(const ExperimentConfig& cfg) {
    cfg.validate();
    const double omega = cfg.omega_value();
    const SectorGeometry geo = build_sector(omega);
    const int p = cfg.p;
    const double nu1 = kPi / omega;
    std::vector<SpectrumVariant> out;
    for (double mu : {1.0, suggest_mu(omega, p)}) {
        for (int k : {p - 1, 0}) {
            SpectrumVariant v;
            v.p = p;
            v.k = k;
            v.mu = mu;
            int best = -1;
            long best_gap = 0;
            for (int J1 = 1; J1 <= 400; ++J1) {
                const long n = static_cast<long>(count1(p, k, J1)) * count2(p, k, cfg.j2_for(J1), geo.n_arc);
                const long gap = std::abs(n - cfg.target_dofs);
                if (best < 0 || gap < best_gap) {
                    best = J1;
                    best_gap = gap;
                }
            }
            v.J1 = best;
            v.J2 = cfg.j2_for(best);
            const DiscreteSpace space(build_tensor_space(geo, p, k, v.J1, v.J2, mu));
            AssemblyOptions ao;
            ao.q = cfg.q;
            const AssembledSystem sys = assemble(space, geo, ao);
            v.dofs = space.size();
            v.free_dofs = sys.size();
            // lower part only, via shift-invert Lanczos; residuals are checked per pair
            const int half = sys.size() / 2;
            const int nev = std::min(sys.size(), std::max(cfg.nev > 0 ? cfg.nev : half, std::max(half, cfg.spike_window)));
            EigenOptions eo;
            eo.force_iterative = true;
            const DiscreteSpectrum spec = solve(sys, nev, eo);
            v.exact = exact_spectrum(omega, nev);
            for (int i = 0; i < nev; ++i) {
                v.lambda_h.push_back(spec.values[i]);
                v.lambda.push_back(v.exact[i].lambda);
                v.rel_err.push_back(std::abs(spec.values[i] - v.exact[i].lambda) / v.exact[i].lambda);
                v.residual.push_back(spec.residuals[i]);
                v.max_residual = std::max(v.max_residual, spec.residuals[i]);
            }
            double s = 0.0;
            for (int i = 0; i < half; ++i) s += v.rel_err[i];
            v.mean_rel_err_lower_half = s / half;
            const int W = std::min(cfg.spike_window, nev);
            for (int i = 0; i < W; ++i)
                if (std::abs(v.exact[i].nu - nu1) < 1e-12) v.singular_idx.push_back(i + 1);
            std::vector<int> order(W);
            for (int i = 0; i < W; ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v.rel_err[a] > v.rel_err[b]; });
            for (std::size_t i = 0; i < v.singular_idx.size(); ++i) v.spikes.push_back(order[i] + 1);
            std::sort(v.spikes.begin(), v.spikes.end());
            out.push_back(std::move(v));
        }
    }
    return out;
}

void write_spectrum_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<SpectrumVariant>& vs) {
    os << csv_header(cfg, "spectrum comparison: C^{p-1} versus C^0 at matched DOF counts");
    os << "variant,p,k,mu,J1,J2,dofs,free_dofs,index,lambda,lambda_h,rel_err,residual,nu,k_exact,m_exact\n";
    for (std::size_t vi = 0; vi < vs.size(); ++vi) {
        const auto& v = vs[vi];
        for (std::size_t i = 0; i < v.lambda.size(); ++i) {
            os << vi << "," << v.p << "," << v.k << "," << fmt_double(v.mu) << "," << v.J1 << "," << v.J2 << ","
               << v.dofs << "," << v.free_dofs << "," << i + 1 << "," << fmt_double(v.lambda[i]) << ","
               << fmt_double(v.lambda_h[i]) << "," << fmt_double(v.rel_err[i]) << "," << fmt_double(v.residual[i]) << ","
               << fmt_double(v.exact[i].nu)
               << "," << v.exact[i].k << "," << v.exact[i].m << "\n";
        }
    }
    for (std::size_t vi = 0; vi < vs.size(); ++vi) {
        const auto& v = vs[vi];
        os << "# variant " << vi << ": p=" << v.p << " k=" << v.k << " mu=" << fmt_double(v.mu) << " dofs=" << v.dofs
           << " mean_rel_err_lower_half=" << fmt_double(v.mean_rel_err_lower_half)
           << " max_residual=" << fmt_double(v.max_residual) << " spikes=";
        for (std::size_t i = 0; i < v.spikes.size(); ++i) os << (i ? ";" : "") << v.spikes[i];
        os << " singular=";
        for (std::size_t i = 0; i < v.singular_idx.size(); ++i) os << (i ? ";" : "") << v.singular_idx[i];
        os << "\n";
    }
}

void write_exact_csv(std::ostream& os, double omega, int n) {
    os << "# exact spectrum omega=" << fmt_double(omega) << " n=" << n << "\n";
    os << "index,value,nu,k,m,lambda,regularity,s_star\n";
    const auto s = exact_spectrum(omega, n);
    for (int i = 0; i < n; ++i) {
        const auto& e = s[i];
        os << i + 1 << "," << fmt_double(e.mu) << "," << fmt_double(e.nu) << "," << e.k << "," << e.m << ","
           << fmt_double(e.lambda) << "," << e.regularity_label() << ","
           << (e.regularity == Regularity::Smooth ? std::string("inf") : fmt_double(e.s_star)) << "\n";
    }
}

}  // namespace siga
