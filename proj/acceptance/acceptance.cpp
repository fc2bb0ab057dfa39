// Acceptance run: one PASS/FAIL line per criterion, details indented above it.
#include "sectoriga/experiment.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace siga;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failed = 0;

void verdict(int n, bool ok, const std::string& summary) {
    std::printf("criterion %d: %s %s\n", n, ok ? "PASS" : "FAIL", summary.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failed;
}

std::string num(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

bool within(double slope, double target, double tol) { return std::abs(slope - target) <= tol * target; }

struct RateCheck {
    bool ok = true;
    ConvergenceResult r;
};

RateCheck convergence(const std::string& label, ExperimentConfig c, double t_h1, double t_l2, double t_ev, double tol) {
    RateCheck out;
    const auto t0 = Clock::now();
    out.r = run_convergence(c);
    const bool h1 = within(out.r.h1.slope, t_h1, tol), l2 = within(out.r.l2.slope, t_l2, tol),
               ev = within(out.r.ev.slope, t_ev, tol);
    out.ok = h1 && l2 && ev;
    std::printf("  %-34s mu=%-6s slopes h1=%s l2=%s ev=%s  targets (%s, %s, %s) +-%d%%  [%s%s%s] %.1fs\n", label.c_str(),
                num(c.mu_value(), 3).c_str(), num(out.r.h1.slope).c_str(), num(out.r.l2.slope).c_str(),
                num(out.r.ev.slope).c_str(), num(t_h1).c_str(), num(t_l2).c_str(), num(t_ev).c_str(),
                static_cast<int>(std::lround(tol * 100)), h1 ? "h1 ok" : "h1 MISS", l2 ? ", l2 ok" : ", l2 MISS",
                ev ? ", ev ok" : ", ev MISS", seconds_since(t0));
    const LevelResult& f = out.r.levels.back();
    std::printf("  %-34s finest J1=%d dofs=%d  ev=%.3e l2=%.3e h1=%.3e\n", "", f.J1, f.dofs, f.err.ev_abs, f.err.l2,
                f.err.h1);
    std::fflush(stdout);
    return out;
}

ExperimentConfig base(int p, const std::string& mode, double mu) {
    ExperimentConfig c;
    c.omega = "2pi";
    c.p = p;
    c.k = -1;
    c.schedule = {4, 8, 16, 32, 64};
    c.mode = mode;
    c.mu = fmt_double(mu);
    return c;
}

// ---------------------------------------------------------------------------

void criterion1() {
    struct Row {
        double value, nu;
        int m;
        const char* reg;
    };
    const Row table[22] = {{2.40, 0, 1, "smooth"}, {3.14, 0.5, 1, "H^1"},  {3.83, 1, 1, "smooth"},
                           {4.49, 1.5, 1, "H^2"},  {5.14, 2, 1, "smooth"}, {5.52, 0, 2, "smooth"},
                           {5.76, 2.5, 1, "H^3"},  {6.28, 0.5, 2, "H^1"},  {6.38, 3, 1, "smooth"},
                           {6.99, 3.5, 1, "H^4"},  {7.02, 1, 2, "smooth"}, {7.59, 4, 1, "smooth"},
                           {7.73, 1.5, 2, "H^2"},  {8.18, 4.5, 1, "H^5"},  {8.42, 2, 2, "smooth"},
                           {8.65, 0, 3, "smooth"}, {8.77, 5, 1, "smooth"}, {9.10, 2.5, 2, "H^3"},
                           {9.36, 5.5, 1, "H^6"},  {9.42, 0.5, 3, "H^1"},  {9.76, 3, 2, "smooth"},
                           {9.94, 6, 1, "smooth"}};
    const auto t0 = Clock::now();
    const auto s = exact_spectrum(2 * kPi, 22);
    const double dt = seconds_since(t0);
    bool ok = s.size() == 22;
    double worst = 0.0;
    int label_miss = 0;
    for (std::size_t i = 0; i < s.size() && i < 22; ++i) {
        worst = std::max(worst, std::abs(s[i].mu - table[i].value));
        if (std::abs(s[i].nu - table[i].nu) > 1e-12 || s[i].m != table[i].m || s[i].regularity_label() != table[i].reg) ++label_miss;
    }
    ok = ok && worst <= 0.005 && label_miss == 0 && dt < 1.0;
    std::printf("  max |value - table| = %.2e, label mismatches = %d, runtime %.4fs\n", worst, label_miss, dt);
    verdict(1, ok, "exact spectrum of the cracked disk, 22 frequencies");
}

void criterion2() {
    const auto t0 = Clock::now();
    bool ok = true;
    for (int p : {2, 3}) {
        ok &= convergence("singular (1,1) graded p=" + std::to_string(p), base(p, "1,1", 0.9 / (2 * p)), p, p + 1,
                          2 * p, 0.15)
                  .ok;
        ok &= convergence("singular (1,1) uniform p=" + std::to_string(p), base(p, "1,1", 1.0), 0.5, 1.0, 1.0, 0.15).ok;
    }
    const double dt = seconds_since(t0);
    std::printf("  total runtime %.1fs (limit 300s)\n", dt);
    verdict(2, ok && dt < 300.0, "singular-mode slopes, graded and uniform tensor meshes");
}

void criterion3() {
    const RateCheck g = convergence("smooth (2,1) graded p=2", base(2, "2,1", 0.45), 2, 3, 4, 0.15);
    const RateCheck u = convergence("smooth (2,1) uniform p=2", base(2, "2,1", 1.0), 2, 3, 4, 0.15);
    const ErrorReport& eg = g.r.levels.back().err;
    const ErrorReport& eu = u.r.levels.back().err;
    const bool smaller = eu.ev_abs < eg.ev_abs && eu.l2 < eg.l2 && eu.h1 < eg.h1;
    std::printf("  finest level uniform/graded ratios: ev=%.3f l2=%.3f h1=%.3f\n", eu.ev_abs / eg.ev_abs, eu.l2 / eg.l2,
                eu.h1 / eg.h1);
    verdict(3, g.ok && u.ok && smaller, "smooth-mode slopes on both meshes, uniform constant smaller");
}

void criterion4() {
    bool sing = true, degr = true, rest = true;
    for (int p : {2, 3}) {
        ExperimentConfig c = base(p, "1,1", 0.9 / (2 * p));
        c.mesh = "hierarchical";
        c.hier_j1 = 4;
        sing &= convergence("hier singular (1,1) graded p=" + std::to_string(p), c, p, p + 1, 2 * p, 0.20).ok;

        c = base(p, "2,1", 1.0);
        c.mesh = "hierarchical";
        c.hier_j1 = 4;
        degr &= convergence("hier smooth (2,1) uniform p=" + std::to_string(p), c, 1, 2, 2, 0.20).ok;

        c = base(p, "2,1", 0.9 / p);
        c.mesh = "hierarchical";
        c.hier_j1 = 4;
        rest &= convergence("hier smooth (2,1) graded p=" + std::to_string(p), c, p, p + 1, 2 * p, 0.20).ok;
    }
    std::printf("  singular graded: %s; smooth uniform degraded to (1,2,2): %s; smooth graded restored: %s\n",
                sing ? "yes" : "no", degr ? "yes" : "no", rest ? "yes" : "no");
    verdict(4, sing && degr && rest, "hierarchical meshes, L <= 4");
}

void criterion5() {
    bool ok = true;
    for (int p : {3, 5}) {
        ExperimentConfig c;
        c.p = p;
        c.target_dofs = 976;
        c.spike_window = 22;
        const auto t0 = Clock::now();
        const std::vector<SpectrumVariant> v = run_spectrum_compare(c);
        for (const SpectrumVariant& s : v) {
            std::ostringstream sp, si;
            for (int i : s.spikes) sp << i << " ";
            for (int i : s.singular_idx) si << i << " ";
            std::printf("  p=%d k=%d mu=%-6s J1=%-3d dofs=%d free=%d mean_rel_err=%.4g max_residual=%.1e spikes {%s} "
                        "nu=1/2 at {%s}\n",
                        s.p, s.k, num(s.mu, 3).c_str(), s.J1, s.dofs, s.free_dofs, s.mean_rel_err_lower_half,
                        s.max_residual, sp.str().c_str(), si.str().c_str());
        }
        // order: (uniform, C^{p-1}), (uniform, C0), (graded, C^{p-1}), (graded, C0)
        const bool uni = v[0].mean_rel_err_lower_half < v[1].mean_rel_err_lower_half;
        const bool gra = v[2].mean_rel_err_lower_half < v[3].mean_rel_err_lower_half;
        const bool spikes = v[0].spikes == v[0].singular_idx && v[1].spikes == v[1].singular_idx;
        std::printf("  p=%d smooth below C0: uniform %s, graded %s; uniform spikes at nu=1/2 only: %s  %.1fs\n", p,
                    uni ? "yes" : "no", gra ? "yes" : "no", spikes ? "yes" : "no", seconds_since(t0));
        ok = ok && uni && gra && spikes;
    }
    verdict(5, ok, "smooth versus C0 spectra at matched DOF counts, p in {3,5}");
}

// ---------------------------------------------------------------------------

struct Prop {
    std::string name;
    double value, limit;
    bool lower = false;  // value must exceed limit instead
    bool ok() const { return std::isfinite(value) && (lower ? value > limit : value <= limit); }
};

void criterion6() {
    std::vector<Prop> props;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const SectorGeometry g = build_sector(2 * kPi);

    {  // rational partition of unity on the coarse net and a refined space
        const TensorSpace t = build_tensor_space(g, 3, 2, 6, g.n_arc * 6, 0.3);
        double pu = 0.0, gs = 0.0;
        for (const NurbsPatch* P : {&g.F.patch, &t.patch}) {
            for (int i = 0; i < 1000; ++i) {
                const TensorBasisEvaluation e = eval_nurbs_2d(*P, Vec2(U(rng), U(rng)));
                double s = 0.0;
                Vec2 d = Vec2::Zero();
                for (std::size_t a = 0; a < e.values.size(); ++a) {
                    s += e.values[a];
                    d += e.grads[a];
                }
                pu = std::max(pu, std::abs(s - 1));
                gs = std::max(gs, d.cwiseAbs().maxCoeff());
            }
        }
        props.push_back({"partition of unity", pu, 1e-12});
        props.push_back({"zero gradient sum", gs, 1e-12});
    }
    {
        double r = 0.0, wlo = 0.0, whi = 0.0;
        const double lo = (2 + std::sqrt(2.0)) / 4;
        for (int i = 0; i < 10000; ++i) {
            const Vec2 z(U(rng), U(rng));
            r = std::max(r, std::abs(g.map(z).norm() - z[0]));
            const double W = eval_weight(g.F.patch, z).W;
            wlo = std::max(wlo, lo - W);
            whi = std::max(whi, W - 1);
        }
        props.push_back({"|F(z)| = z1", r, 1e-12});
        props.push_back({"weight >= (2+sqrt2)/4 (violation)", std::max(wlo, 0.0), 1e-14});
        props.push_back({"weight <= 1 (violation)", std::max(whi, 0.0), 1e-14});
        double ang = 0.0;
        for (int i = 0; i <= 8; ++i) {
            const Vec2 x = g.map(Vec2(1.0, i / 8.0));
            ang = std::max({ang, std::abs(x[0] - std::cos(2 * kPi * i / 8)), std::abs(x[1] - std::sin(2 * kPi * i / 8))});
        }
        props.push_back({"arc identities at z2 = i/8", ang, 1e-12});
    }
    {  // matrices
        double sym = 0.0, mineig = INFINITY, msum = 0.0, rows = 0.0;
        const std::pair<int, double> meshes[] = {{2, 0.225}, {3, 1.0}};
        for (const auto& [p, mu] : meshes) {
            const DiscreteSpace s(build_tensor_space(g, p, p - 1, 8, g.n_arc * 8, mu));
            AssemblyOptions o;
            o.apply_mask = false;
            const AssembledSystem sys = assemble(s, g, o);
            for (const SpMat* m : {&sys.A, &sys.M}) {
                const SpMat d = *m - SpMat(m->transpose());
                double dm = 0.0, mm = 0.0;
                for (int j = 0; j < d.outerSize(); ++j)
                    for (SpMat::InnerIterator it(d, j); it; ++it) dm = std::max(dm, std::abs(it.value()));
                for (int j = 0; j < m->outerSize(); ++j)
                    for (SpMat::InnerIterator it(*m, j); it; ++it) mm = std::max(mm, std::abs(it.value()));
                sym = std::max(sym, dm / mm);
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(sys.M), Eigen::EigenvaluesOnly);
            mineig = std::min(mineig, es.eigenvalues()[0]);
            msum = std::max(msum, std::abs(sys.M.sum() - kPi));
            Eigen::VectorXd r = sys.A * Eigen::VectorXd::Ones(sys.size());
            rows = std::max(rows, r.cwiseAbs().maxCoeff());
        }
        props.push_back({"matrix symmetry (relative)", sym, 1e-12});
        props.push_back({"mass matrix smallest eigenvalue", mineig, 0.0, true});
        props.push_back({"unmasked mass sum - pi", msum, 1e-8});
        props.push_back({"unmasked stiffness row sums", rows, 1e-10});
    }
    {  // eigensolver against the dense oracle
        double worst = 0.0;
        int largest = 0;
        const std::tuple<int, int, double> runs[] = {{2, 16, 0.225}, {3, 12, 0.15}, {3, 16, 1.0}};
        for (const auto& [p, J1, mu] : runs) {
            const AssembledSystem sys = assemble(DiscreteSpace(build_tensor_space(g, p, p - 1, J1, g.n_arc * J1, mu)), g);
            if (sys.size() > 2000) continue;
            largest = std::max(largest, sys.size());
            const DiscreteSpectrum full = solve_full(sys);
            EigenOptions eo;
            eo.force_iterative = true;
            const DiscreteSpectrum it = solve(sys, 20, eo);
            for (int i = 0; i < 20; ++i) worst = std::max(worst, std::abs(it.values[i] - full.values[i]) / full.values[i]);
        }
        props.push_back({"Lanczos vs dense (relative, up to " + std::to_string(largest) + " dofs)", worst, 1e-9});
    }
    {
        double res = 0.0, half = 0.0, neu = 0.0;
        for (int k2 = 0; k2 <= 12; ++k2)
            for (int m = 1; m <= 10; ++m) {
                const double nu = 0.5 * k2, z = bessel_zero(nu, m);
                res = std::max(res, std::abs(bessel_j(nu, z)));
            }
        for (int m = 1; m <= 30; ++m) half = std::max(half, std::abs(bessel_zero(0.5, m) - m * kPi));
        for (double omega : {2 * kPi, 1.0, 1.5 * kPi})
            for (const auto& e : exact_spectrum(omega, 15))
                for (int i = 1; i <= 100; ++i) {
                    const double r = i / 100.0;
                    for (double phi : {0.0, omega}) {
                        const ExactValue v = eval_exact_polar(e, r, phi);
                        neu = std::max(neu, std::abs(r * (-std::sin(phi) * v.grad[0] + std::cos(phi) * v.grad[1])));
                    }
                }
        props.push_back({"Bessel residual |J_nu(mu)|", res, 1e-12});
        props.push_back({"bessel_zero(1/2, m) - m pi", half, 1e-12});
        props.push_back({"Neumann legs du/dphi", neu, 1e-10});
    }
    bool ok = true;
    for (const Prop& p : props) {
        std::printf("  %-58s %10.3e  (%s %.0e)  %s\n", p.name.c_str(), p.value, p.lower ? "above" : "limit", p.limit,
                    p.ok() ? "ok" : "VIOLATED");
        ok = ok && p.ok();
    }
    verdict(6, ok, "property suites");
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    const std::function<void()> all[] = {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6};
    int n = 1;
    for (const auto& c : all) {
        try {
            c();
        } catch (const std::exception& e) {
            std::printf("  exception: %s\n", e.what());
            verdict(n, false, "aborted");
        }
        ++n;
    }
    std::printf("acceptance: %d of 6 criteria failed, %.1fs\n", g_failed, seconds_since(t0));
    return g_failed == 0 ? 0 : 1;
}
