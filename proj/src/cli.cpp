#include "sectoriga/cli.hpp"

#include "sectoriga/experiment.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace siga {

namespace {

void bind_options(CLI::App& app, ExperimentConfig& c) {
    app.add_option("--omega", c.omega, "sector angle, number or <a>pi[/<b>]");
    app.add_option("--p", c.p, "spline degree");
    app.add_option("--k", c.k, "regularity, -1 for p-1");
    app.add_option("--schedule", c.schedule, "radial element counts J1")->delimiter(',');
    app.add_option("--j2_factor", c.j2_factor, "J2 = j2_factor * J1, 0 for the arc count");
    app.add_option("--mu", c.mu, "grading exponent or auto");
    app.add_option("--mesh", c.mesh, "tensor | hierarchical");
    app.add_option("--hier_j1", c.hier_j1, "coarsest hierarchical radial count");
    app.add_option("--hier_j2", c.hier_j2, "coarsest hierarchical angular count, 0 for auto");
    app.add_option("--q", c.q, "Gauss points per direction");
    app.add_option("--nev", c.nev, "eigenpairs to compute, 0 for auto");
    app.add_option("--mode", c.mode, "target mode \"k,m\" or spectrum");
    app.add_option("--target_dofs", c.target_dofs, "DOF target of spectrum-compare");
    app.add_option("--spike_window", c.spike_window, "leading indices checked for spikes");
    app.add_option("--rate_h1", c.rate_h1, "expected H1_h rate");
    app.add_option("--rate_l2", c.rate_l2, "expected L2_h rate");
    app.add_option("--rate_ev", c.rate_ev, "expected eigenvalue rate");
    app.add_option("--rate_tol", c.rate_tol, "relative rate tolerance");
    app.add_option("--output", c.output, "output file, - for stdout");
    app.add_option("--dump_matrix", c.dump_matrix, "prefix for COO dumps of the finest level");
}

struct Out {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Out(const std::string& path) {
        if (path != "-" && !path.empty()) {
            file.open(path);
            if (!file) throw ConfigError("cannot open output file " + path);
            os = &file;
        }
    }
};

int cmd_solve(const ExperimentConfig& cfg, int J1) {
    const double omega = cfg.omega_value();
    const SectorGeometry geo = build_sector(omega);
    const DiscreteSpace space = make_space(cfg, geo, J1);
    AssemblyOptions ao;
    ao.q = cfg.q;
    const AssembledSystem sys = assemble(space, geo, ao);
    const int nev = std::min(sys.size(), cfg.nev > 0 ? cfg.nev : 10);
    const DiscreteSpectrum spec = solve(sys, nev);
    const auto ex = exact_spectrum(omega, nev);
    Out out(cfg.output);
    const SystemStats st = system_stats(sys);
    std::ostringstream extra;
    extra << "space: " << space.summary() << "\nsystem: free_dofs=" << st.dofs << " nnz=" << st.nnz
          << " bandwidth=" << st.bandwidth;
    *out.os << csv_header(cfg, extra.str());
    *out.os << "index,lambda_h,lambda,rel_err,residual,nu,k,m\n";
    for (int i = 0; i < nev; ++i)
        *out.os << i + 1 << "," << fmt_double(spec.values[i]) << "," << fmt_double(ex[i].lambda) << ","
                << fmt_double(std::abs(spec.values[i] - ex[i].lambda) / ex[i].lambda) << ","
                << fmt_double(spec.residuals[i]) << "," << fmt_double(ex[i].nu) << "," << ex[i].k << ","
                << ex[i].m << "\n";
    if (!cfg.dump_matrix.empty()) {
        write_coo(sys.A, cfg.dump_matrix + "_A.coo");
        write_coo(sys.M, cfg.dump_matrix + "_M.coo");
    }
    return 0;
}

int cmd_geometry(const ExperimentConfig& cfg, int J1) {
    const SectorGeometry geo = build_sector(cfg.omega_value());
    Out out(cfg.output);
    auto& os = *out.os;
    os << csv_header(cfg) << "# omega=" << fmt_double(geo.omega) << " n_arc=" << geo.n_arc << "\n";
    NurbsPatch patch = geo.F.patch;
    std::vector<Vec2> pts = geo.F.points;
    if (J1 > 0) {
        const TensorSpace ts = build_tensor_space(geo, cfg.p, cfg.k_value(), J1, cfg.j2_for(J1), cfg.mu_value());
        patch = ts.patch;
        pts = ts.points;
        os << "# refined: p=" << cfg.p << " k=" << cfg.k_value() << " J1=" << J1 << " J2=" << cfg.j2_for(J1)
           << " mu=" << fmt_double(cfg.mu_value()) << "\n";
    }
    auto knots = [&](const char* name, const KnotVector& kv) {
        os << "# " << name << " degree=" << kv.degree() << " knots=";
        for (std::size_t i = 0; i < kv.knots().size(); ++i) os << (i ? " " : "") << fmt_double(kv.knots()[i]);
        os << "\n";
    };
    knots("xi1", patch.kv1);
    knots("xi2", patch.kv2);
    os << "i1,i2,x,y,w,wx,wy\n";
    for (int i2 = 0; i2 < patch.n2(); ++i2)
        for (int i1 = 0; i1 < patch.n1(); ++i1) {
            const int i = patch.index(i1, i2);
            const double w = patch.weights[i];
            os << i1 << "," << i2 << "," << fmt_double(pts[i][0]) << "," << fmt_double(pts[i][1]) << ","
               << fmt_double(w) << "," << fmt_double(w * pts[i][0]) << "," << fmt_double(w * pts[i][1]) << "\n";
        }
    return 0;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig c;
    CLI::App app;
    app.allow_config_extras(false);
    bind_options(app, c);
    std::istringstream in(text);
    try {
        app.parse_from_stream(in);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

int cli_main(int argc, char** argv) {
    ExperimentConfig cfg;
    CLI::App app{"Galerkin eigenvalue solver for the Laplacian on circular sectors"};
    app.require_subcommand(1);
    app.allow_config_extras(false);
    bind_options(app, cfg);
    app.set_config("--config", "", "key = value configuration file");

    int n_exact = 22, solve_j1 = 16, geom_j1 = 0;
    auto* ex = app.add_subcommand("exact-spectrum", "exact eigenpairs in ascending order");
    ex->add_option("--n", n_exact, "number of eigenpairs");
    auto* so = app.add_subcommand("solve", "discrete eigenvalues on one mesh");
    so->add_option("--J1", solve_j1, "radial element count");
    auto* cv = app.add_subcommand("convergence", "error study over the schedule");
    auto* sc = app.add_subcommand("spectrum-compare", "smooth versus C0 spectra at matched DOF counts");
    auto* sm = app.add_subcommand("suggest-mu", "grading exponent for the angle and degree");
    auto* dg = app.add_subcommand("dump-geometry", "control net, weights and knots");
    dg->add_option("--J1", geom_j1, "refine to this radial count, 0 for the coarse net");
    for (auto* s : {ex, so, cv, sc, sm, dg}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        cfg.validate();
        if (ex->parsed()) {
            if (n_exact < 1) throw ConfigError("--n must be >= 1");
            Out out(cfg.output);
            *out.os << csv_header(cfg, "exact-spectrum: n=" + std::to_string(n_exact));
            write_exact_csv(*out.os, cfg.omega_value(), n_exact);
            return 0;
        }
        if (so->parsed()) return cmd_solve(cfg, solve_j1);
        if (cv->parsed()) {
            if (cfg.spectrum_mode()) throw ConfigError("convergence needs a \"k,m\" mode");
            const ConvergenceResult r = run_convergence(cfg);
            Out out(cfg.output);
            write_convergence_csv(*out.os, cfg, r);
            if (r.target_missed) {
                std::cerr << "rate target missed: h1h=" << r.h1.slope << " l2h=" << r.l2.slope
                          << " ev=" << r.ev.slope << "\n";
                return 4;
            }
            return 0;
        }
        if (sc->parsed()) {
            const auto v = run_spectrum_compare(cfg);
            Out out(cfg.output);
            write_spectrum_csv(*out.os, cfg, v);
            return 0;
        }
        if (sm->parsed()) {
            Out out(cfg.output);
            const double w = cfg.omega_value();
            *out.os << csv_header(cfg) << "omega,p,nu1,mu\n"
                    << fmt_double(w) << "," << cfg.p << "," << fmt_double(kPi / w) << ","
                    << fmt_double(suggest_mu(w, cfg.p)) << "\n";
            return 0;
        }
        if (dg->parsed()) return cmd_geometry(cfg, geom_j1);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const MatchingError& e) {
        std::cerr << "matching error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace siga
