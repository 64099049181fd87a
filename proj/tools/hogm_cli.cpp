// Command-line front end: load a system definition, run derivations, round
// trips, integrations, and the Tulczyjew-triple verification suite.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hogm/dynamics.hpp"
#include "hogm/io.hpp"
#include "hogm/parse.hpp"
#include "hogm/triple.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace hogm;

namespace {

struct Options {
    std::string path;
    double tol = 1e-6;
    std::uint64_t seed = kEquivalenceSeed;
    std::string out_dir;
    std::string format = "text";
    int jobs = 0;
};

StatePoint probe_point(const SystemDefinition& def, const Chart& chart) {
    if (def.integrate && def.kind == SystemKind::Lagrangian &&
        chart.kind == ChartKind::JetQ && chart.order == def.order) {
        // leading levels of the integrate initial jet
        std::vector<double> v(def.integrate->initial.begin(),
                              def.integrate->initial.begin() + chart.dim());
        return StatePoint(chart, v);
    }
    if (def.integrate && def.kind == SystemKind::Hamiltonian &&
        chart.kind == ChartKind::CotJet)
        return StatePoint(chart, def.integrate->initial);
    return StatePoint(chart, std::vector<double>(chart.dim(), 0.0));
}

std::string fmt(double v) { return format_double_shortest(v); }

void add_check(Report& r, const std::string& name, bool pass, const std::string& value = "") {
    r.checks.push_back({name, pass, value});
}

Report cmd_derive(const SystemDefinition& def) {
    Report report;
    report.system = def.name;
    if (def.kind == SystemKind::Lagrangian) {
        LagrangianSystem sys = to_lagrangian(def);
        MomentaTable momenta = jacobi_ostrogradsky_momenta(sys);
        for (int r = 0; r < sys.k; ++r)
            for (int i = 1; i <= sys.n; ++i)
                add_check(report, var_name(pvar(i, r)), true, format(momenta.at(i, r)));
        std::vector<Expr> el = euler_lagrange(sys);
        for (int i = 1; i <= sys.n; ++i)
            add_check(report, "EL[" + std::to_string(i) + "]", true, format(el[i - 1]));
        add_check(report, "energy", true, format(lagrangian_energy(sys)));
        ExprMatrix hess = highest_hessian(sys);
        for (int i = 0; i < sys.n; ++i)
            for (int j = 0; j < sys.n; ++j)
                add_check(report, "hessian[" + std::to_string(i + 1) + "][" +
                                      std::to_string(j + 1) + "]",
                          true, format(hess[i][j]));
        RegularityVerdict reg = is_regular_at(sys, probe_point(def, jetq_chart(sys.n, sys.k)));
        add_check(report, "regular_at_probe", reg.regular, "det = " + fmt(reg.det));

        std::vector<Expr> constraints = parsed_constraints(def);
        if (!constraints.empty()) {
            ConstrainedSystem ext = extend_with_constraints(sys, constraints);
            std::vector<Expr> ael = euler_lagrange(ext.augmented);
            for (int a = 1; a <= ext.multipliers; ++a)
                add_check(report, "multiplier_equation[" + std::to_string(a) + "]", true,
                          format(ael[ext.multiplier_dof(a) - 1]));
        }
    } else {
        HamiltonianSystem sys = to_hamiltonian(def);
        std::vector<Expr> field = hamilton_vector_field(sys);
        Chart chart = cotjet_chart(sys.n, sys.k);
        for (int idx = 0; idx < chart.dim(); ++idx)
            add_check(report, "d/dt " + chart.slot_name(idx), true, format(field[idx]));
        KthOrderReport order = is_kth_order(sys);
        add_check(report, "kth_order", order.is_kth_order);
        if (order.is_kth_order) {
            RegularityVerdict reg = is_regular_hamiltonian_at(sys, probe_point(def, chart));
            add_check(report, "regular_at_probe", reg.regular, "det = " + fmt(reg.det));
        }
    }
    return report;
}

Report cmd_roundtrip(const SystemDefinition& def) {
    Report report;
    report.system = def.name;
    try {
        if (def.kind == SystemKind::Lagrangian) {
            LagrangianSystem sys = to_lagrangian(def);
            CanonicalHamiltonian ch = canonical_hamiltonian(sys);
            if (!ch.symbolic) {
                add_check(report, "roundtrip", false,
                          "Legendre inversion is not symbolic for this system");
                return report;
            }
            add_check(report, "H", true, format(ch.system.H));
            ReconstructedLagrangian back = reconstruct_lagrangian(ch.system);
            add_check(report, "L_reconstructed", true, format(back.system.L));
            EquivalenceResult eq = equivalent_report(back.system.L, sys.L);
            add_check(report, "roundtrip_equivalent", eq.equivalent, eq.diagnostic);
        } else {
            HamiltonianSystem sys = to_hamiltonian(def);
            ReconstructedLagrangian lag = reconstruct_lagrangian(sys);
            if (!lag.symbolic) {
                add_check(report, "roundtrip", false,
                          "FH_o inversion is not symbolic for this system");
                return report;
            }
            add_check(report, "L", true, format(lag.system.L));
            CanonicalHamiltonian back = canonical_hamiltonian(lag.system);
            add_check(report, "H_reconstructed", true, format(back.system.H));
            EquivalenceResult eq = equivalent_report(back.system.H, sys.H);
            add_check(report, "roundtrip_equivalent", eq.equivalent, eq.diagnostic);
        }
    } catch (const NotKthOrderError& e) {
        add_check(report, "kth_order", false, e.what());
    } catch (const IrregularError& e) {
        add_check(report, "regular", false, e.what());
    } catch (const NotProjectableError& e) {
        add_check(report, "projectable", false, e.what());
    } catch (const SingularLagrangianError& e) {
        add_check(report, "regular", false, e.what());
    }
    return report;
}

Report cmd_integrate(const SystemDefinition& def, const Options& opt) {
    Report report;
    report.system = def.name;
    if (!def.integrate) {
        add_check(report, "integrate_block", false, "definition has no integrate block");
        return report;
    }
    const IntegrateSpec& spec = *def.integrate;

    Trajectory traj;
    double drift = 0.0;
    double residual_max = 0.0;
    std::string residual_name;
    if (def.kind == SystemKind::Lagrangian) {
        LagrangianSystem sys = to_lagrangian(def);
        if (!def.constraints.empty()) {
            add_check(report, "integrable", false,
                      "constrained systems are singular in the multipliers");
            return report;
        }
        traj = integrate_rk4(lagrangian_ode(sys), spec.initial, spec.t0, spec.t1, spec.step);
        Expr energy = lagrangian_energy(sys);
        CompiledExpr E(energy, traj.chart);
        drift = observable_drift(
            traj, [&](double, const std::vector<double>& x) { return E.eval(x); });
        ResidualReport el = discrete_el_residual(sys, traj);
        residual_max = el.max_abs;
        residual_name = "euler_lagrange_residual";
    } else {
        HamiltonianSystem sys = to_hamiltonian(def);
        traj = integrate_rk4(hamilton_ode(sys), spec.initial, spec.t0, spec.t1, spec.step);
        drift = energy_drift(sys, traj);
        residual_max = drift;
        residual_name = "energy_drift";
    }

    std::filesystem::path dir = opt.out_dir.empty() ? "." : opt.out_dir;
    std::filesystem::create_directories(dir);
    std::filesystem::path csv_path = dir / (def.name + "_trajectory.csv");
    {
        std::ofstream csv(csv_path);
        write_trajectory_csv(csv, traj);
    }
    report.artifacts.push_back(csv_path.string());

    add_check(report, "steps", true, std::to_string(traj.size() - 1));
    add_check(report, "energy_drift", drift <= opt.tol, fmt(drift));
    if (residual_name != "energy_drift")
        add_check(report, residual_name, residual_max <= opt.tol, fmt(residual_max));
    std::string final_state;
    for (std::size_t i = 0; i < traj.states.back().size(); ++i)
        final_state += (i ? "," : "") + fmt(traj.states.back()[i]);
    add_check(report, "final_state", true, final_state);
    return report;
}

const char* verdict_str(PullbackVerdict v) {
    switch (v) {
        case PullbackVerdict::Symplectic: return "symplectic (+1)";
        case PullbackVerdict::AntiSymplectic: return "anti (-1)";
        default: return "fail";
    }
}

Report cmd_verify_triple(const SystemDefinition& def, const Options& opt) {
    Report report;
    report.system = def.name;
    if (def.kind != SystemKind::Lagrangian) {
        add_check(report, "kind", false, "verify-triple expects a Lagrangian system");
        return report;
    }
    LagrangianSystem sys = to_lagrangian(def);
    const int k = sys.k, n = sys.n;

    IntMatrix omega_c = omega_complete_lift(tancotjet_chart(n, k));
    IntMatrix omega_cottan = omega_canonical(cottanjet_chart(n, k));
    IntMatrix omega_cotcot = omega_canonical(cotcotjet_chart(n, k));
    PullbackVerdict va = symplectic_pullback_check(alpha_map(k, n), omega_c, omega_cottan);
    PullbackVerdict vb = symplectic_pullback_check(beta_map(k, n), omega_c, omega_cotcot);
    PullbackVerdict vr = symplectic_pullback_check(rk_map(k, n), omega_cottan, omega_cotcot);
    add_check(report, "alpha", va == PullbackVerdict::Symplectic, verdict_str(va));
    add_check(report, "beta", vb == PullbackVerdict::AntiSymplectic, verdict_str(vb));
    add_check(report, "R_k", vr == PullbackVerdict::AntiSymplectic, verdict_str(vr));
    add_check(report, "alpha_eq_rk_inv_beta",
              compose(rk_map(k, n).inverse(), beta_map(k, n)).matrix == alpha_map(k, n).matrix);

    // N_L sample residuals on embedded points
    UniformRng rng(opt.seed);
    double worst_slot = 0.0;
    std::string worst_name;
    for (int s = 0; s < 8; ++s) {
        SigmaLPoint pt;
        pt.params.resize(static_cast<std::size_t>(2 * k * n));
        for (auto& v : pt.params) v = rng.uniform(-2.0, 2.0);
        StatePoint pre = alpha_map(k, n).inverse().apply(embed_sigma(sys, pt));
        std::vector<double> res = nl_residual(sys, pre);
        for (std::size_t i = 0; i < res.size(); ++i) {
            if (std::abs(res[i]) > worst_slot) {
                worst_slot = std::abs(res[i]);
                worst_name = "slot " + std::to_string(i);
            }
        }
    }
    add_check(report, "N_L_residual_on_embedded_samples", worst_slot == 0.0,
              worst_slot == 0.0 ? "0" : fmt(worst_slot) + " at " + worst_name);

    // characterization on built-in curves: the N_L residual along a lift must
    // track the Euler-Lagrange residual (both zero or both bounded away)
    std::vector<Expr> el = euler_lagrange(sys);
    std::vector<double> ts{0.0, 0.5, 1.0, 2.0, 4.0};
    std::vector<std::pair<std::string, std::array<double, 6>>> curves{
        {"line", {0.4, -0.7, 0.0, 0.0, 0.0, 0.0}},
        {"trig", {0.3, -1.2, 0.0, 0.0, 0.7, -0.4}},
        {"cubic", {0.0, 0.0, 0.5, 1.0, 0.0, 0.0}},
    };
    for (const auto& [cname, coeffs] : curves) {
        AnalyticCurve curve(std::vector<std::array<double, 6>>(n, coeffs));
        CharacterizationReport ch = solution_characterization_check(sys, curve, ts);
        double max_el = 0.0;
        for (double t : ts) {
            Assignment a = chart_assignment(curve.lift(2 * k, t));
            for (const Expr& r : el) max_el = std::max(max_el, std::abs(evaluate(r, a)));
        }
        bool solves = max_el <= opt.tol;
        bool nl_zero = ch.max_residual <= opt.tol;
        add_check(report, "characterization_" + cname, solves == nl_zero,
                  (solves ? std::string("solution") : std::string("non-solution")) +
                      ", N_L residual " + fmt(ch.max_residual));
    }
    return report;
}

Report cmd_check(const SystemDefinition& def) {
    Report report;
    report.system = def.name;
    if (def.kind == SystemKind::Lagrangian) {
        LagrangianSystem sys = to_lagrangian(def);
        RegularityVerdict reg = is_regular_at(sys, probe_point(def, jetq_chart(sys.n, sys.k)));
        add_check(report, "regular", reg.regular, "det = " + fmt(reg.det));
    } else {
        HamiltonianSystem sys = to_hamiltonian(def);
        KthOrderReport order = is_kth_order(sys);
        for (const auto& id : order.identities)
            add_check(report,
                      "dH/dp^(" + std::to_string(id.level) + ")_" + std::to_string(id.dof),
                      id.holds, id.holds ? "" : id.detail);
        add_check(report, "kth_order", order.is_kth_order);
        if (order.is_kth_order) {
            RegularityVerdict reg =
                is_regular_hamiltonian_at(sys, probe_point(def, cotjet_chart(sys.n, sys.k)));
            add_check(report, "regular", reg.regular, "det = " + fmt(reg.det));
        }
    }
    return report;
}

int emit(const Report& report, const Options& opt) {
    if (opt.format == "json") std::cout << report_json(report);
    else std::cout << report_text(report);
    if (!opt.out_dir.empty()) {
        std::filesystem::create_directories(opt.out_dir);
        std::ofstream out(std::filesystem::path(opt.out_dir) / (report.system + "_report.json"));
        out << report_json(report);
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"higher-order Lagrangian/Hamiltonian mechanics engine"};
    app.require_subcommand(1);

    Options opt;
    auto* derive = app.add_subcommand("derive", "momenta, equations, energy, regularity");
    auto* roundtrip = app.add_subcommand("roundtrip", "L->H->L or H->L->H with verdict");
    auto* integrate = app.add_subcommand("integrate", "RK4 integration with CSV output");
    auto* verify = app.add_subcommand("verify-triple", "Tulczyjew-triple verification suite");
    auto* check = app.add_subcommand("check", "regularity only");
    for (auto* sub : {derive, roundtrip, integrate, verify, check}) {
        sub->add_option("definition", opt.path, "system definition JSON")->required();
        sub->add_option("--tol", opt.tol, "residual threshold for numeric checks");
        sub->add_option("--seed", opt.seed, "seed for sampled checks");
        sub->add_option("--out", opt.out_dir, "directory for CSV/JSON artifacts");
        sub->add_option("--format", opt.format, "report format")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--jobs", opt.jobs, "worker threads for sample scans");
    }

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (opt.jobs > 0) omp_set_num_threads(opt.jobs);
#endif

    try {
        SystemDefinition def = load_system(opt.path);
        if (derive->parsed()) return emit(cmd_derive(def), opt);
        if (roundtrip->parsed()) return emit(cmd_roundtrip(def), opt);
        if (integrate->parsed()) return emit(cmd_integrate(def, opt), opt);
        if (verify->parsed()) return emit(cmd_verify_triple(def, opt), opt);
        if (check->parsed()) return emit(cmd_check(def), opt);
    } catch (const DefinitionError& e) {
        std::cerr << "definition error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
