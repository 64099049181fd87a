#include <cmath>

#include "doctest.h"
#include "hogm/parse.hpp"
#include "hogm/triple.hpp"

using namespace hogm;

namespace {

Expr P(const std::string& s) { return parse(s); }
LagrangianSystem javelin1() { return LagrangianSystem(1, 2, P("0.5*(q1_1^2 - q1_2^2)")); }
LagrangianSystem pure_second() { return LagrangianSystem(1, 2, P("0.5*q1_2^2")); }

}  // namespace

TEST_CASE("first-order tuples of the triple maps") {
    // alpha: (q,p,qdot,pdot) -> (q, qdot, pdot, p)
    StatePoint x(tancotjet_chart(1, 1), {1.0, 2.0, 3.0, 4.0});
    StatePoint ax = alpha_map(1, 1).apply(x);
    CHECK(ax.values == std::vector<double>{1.0, 3.0, 4.0, 2.0});

    // R_k: (q,v,p,pt) -> (q, pt, -p, v)
    StatePoint y(cottanjet_chart(1, 1), {1.0, 2.0, 3.0, 4.0});
    StatePoint ry = rk_map(1, 1).apply(y);
    CHECK(ry.values == std::vector<double>{1.0, 4.0, -3.0, 2.0});

    // beta = R_k o alpha: (q,p,qdot,pdot) -> (q, p, -pdot, qdot)
    StatePoint bx = beta_map(1, 1).apply(x);
    CHECK(bx.values == std::vector<double>{1.0, 2.0, -4.0, 3.0});
}

TEST_CASE("map algebra: inverses and factorization") {
    for (int k = 1; k <= 4; ++k) {
        for (int n = 1; n <= 3; ++n) {
            LinearChartMap alpha = alpha_map(k, n);
            LinearChartMap beta = beta_map(k, n);
            LinearChartMap rk = rk_map(k, n);

            CHECK(compose(alpha.inverse(), alpha).matrix == IntMatrix::identity(4 * k * n));
            CHECK(compose(beta, beta.inverse()).matrix == IntMatrix::identity(4 * k * n));

            // alpha = R_k^{-1} o beta, exact integers
            CHECK(compose(rk.inverse(), beta).matrix == alpha.matrix);
            // and the product form R_k o alpha = beta
            CHECK(compose(rk, alpha).matrix == beta.matrix);
        }
    }
}

TEST_CASE("symplectic pullback verdicts for k <= 4, n <= 3") {
    for (int k = 1; k <= 4; ++k) {
        for (int n = 1; n <= 3; ++n) {
            IntMatrix omega_c = omega_complete_lift(tancotjet_chart(n, k));
            IntMatrix omega_cottan = omega_canonical(cottanjet_chart(n, k));
            IntMatrix omega_cotcot = omega_canonical(cotcotjet_chart(n, k));

            CHECK(symplectic_pullback_check(alpha_map(k, n), omega_c, omega_cottan) ==
                  PullbackVerdict::Symplectic);
            CHECK(symplectic_pullback_check(beta_map(k, n), omega_c, omega_cotcot) ==
                  PullbackVerdict::AntiSymplectic);
            CHECK(symplectic_pullback_check(rk_map(k, n), omega_cottan, omega_cotcot) ==
                  PullbackVerdict::AntiSymplectic);
        }
    }
    // identity map pulls a form back to itself
    LinearChartMap id(cotjet_chart(1, 1), cotjet_chart(1, 1), IntMatrix::identity(2));
    IntMatrix omega = omega_canonical(cotjet_chart(1, 1));
    CHECK(symplectic_pullback_check(id, omega, omega) == PullbackVerdict::Symplectic);
    // a deliberate mangle fails
    IntMatrix broken = IntMatrix::identity(2);
    broken.at(0, 0) = 0;
    broken.at(0, 1) = 1;
    broken.at(1, 1) = 0;
    broken.at(1, 0) = 1;
    CHECK(symplectic_pullback_check(LinearChartMap(cotjet_chart(1, 1), cotjet_chart(1, 1), broken),
                                    omega, omega) == PullbackVerdict::AntiSymplectic);
}

TEST_CASE("embed_sigma realizes the immersion display") {
    // javelin per dof, parameters (q_0, q_1, q_2, pt0)
    SigmaLPoint s{{0.5, 1.5, -0.7, 2.0}};
    StatePoint e = embed_sigma(javelin1(), s);
    CHECK(e.chart == cottanjet_chart(1, 2));
    CHECK(e.values[0] == doctest::Approx(0.5));   // q_0
    CHECK(e.values[1] == doctest::Approx(1.5));   // q_1
    CHECK(e.values[2] == doctest::Approx(1.5));   // v_0 = q_1
    CHECK(e.values[3] == doctest::Approx(-0.7));  // v_1 = q_2
    CHECK(e.values[4] == doctest::Approx(0.0));           // dL/dq_0
    CHECK(e.values[5] == doctest::Approx(1.5 - 2.0));     // dL/dq_1 - pt0
    CHECK(e.values[6] == doctest::Approx(2.0));           // pt0
    CHECK(e.values[7] == doctest::Approx(0.7));           // dL/dq_2 = -q_2

    // k=1 is the graph of dL
    LagrangianSystem pendulum(1, 1, P("0.5*q1_1^2 - sin(q1_0)"));
    SigmaLPoint s1{{0.3, 1.2}};
    StatePoint g = embed_sigma(pendulum, s1);
    CHECK(g.values[0] == doctest::Approx(0.3));
    CHECK(g.values[1] == doctest::Approx(1.2));
    CHECK(g.values[2] == doctest::Approx(-std::cos(0.3)));
    CHECK(g.values[3] == doctest::Approx(1.2));

    // zero Lagrangian: covector slots are -pt or 0
    LagrangianSystem zero(1, 2, P("0"));
    StatePoint z = embed_sigma(zero, s);
    CHECK(z.values[4] == 0.0);
    CHECK(z.values[5] == doctest::Approx(-2.0));
    CHECK(z.values[6] == doctest::Approx(2.0));
    CHECK(z.values[7] == 0.0);
}

TEST_CASE("sigma residual") {
    SigmaLPoint s{{0.5, 1.5, -0.7, 2.0}};
    LagrangianSystem sys = javelin1();
    StatePoint e = embed_sigma(sys, s);
    for (double r : sigma_residual(sys, e)) CHECK(r == 0.0);

    // perturb one holonomy slot
    StatePoint h = e;
    h.values[2] += 0.25;
    std::vector<double> res = sigma_residual(sys, h);
    CHECK(res[0] == doctest::Approx(0.25));
    int nonzero = 0;
    for (double r : res)
        if (r != 0.0) ++nonzero;
    CHECK(nonzero == 1);

    // wrong top covector slot shows up in the last block
    StatePoint w = e;
    w.values[7] += 0.125;
    std::vector<double> wres = sigma_residual(sys, w);
    CHECK(wres.back() == doctest::Approx(0.125));
}

TEST_CASE("N_L residual") {
    LagrangianSystem sys = javelin1();
    SigmaLPoint s{{0.5, 1.5, -0.7, 2.0}};
    StatePoint pre = alpha_map(2, 1).inverse().apply(embed_sigma(sys, s));
    for (double r : nl_residual(sys, pre)) CHECK(r == 0.0);

    // first-order free particle: Newton flow (q,p,qdot,pdot) = (0,1,1,0)
    LagrangianSystem fp(1, 1, P("0.5*q1_1^2"));
    StatePoint newton(tancotjet_chart(1, 1), {0.0, 1.0, 1.0, 0.0});
    for (double r : nl_residual(fp, newton)) CHECK(r == 0.0);
}

TEST_CASE("N_L residual vanishes exactly over rationals") {
    for (int n = 1; n <= 3; ++n) {
        for (int k = 1; k <= 4; ++k) {
            // sum_i (1/2) (q^i_(k))^2 - (1/3) q^i_(0)^2, exact rational data
            std::vector<Expr> parts;
            for (int i = 1; i <= n; ++i) {
                parts.push_back(mul(Expr::constant(Rational(1, 2)),
                                    Expr::pow(Expr::variable(qvar(i, k)), 2)));
                parts.push_back(mul(Expr::constant(Rational(-1, 3)),
                                    Expr::pow(Expr::variable(qvar(i, 0)), 2)));
            }
            LagrangianSystem sys(n, k, simplify(Expr::sum(parts)));
            std::vector<Rational> params;
            for (int idx = 0; idx < 2 * k * n; ++idx)
                params.emplace_back(idx * 7 % 11 - 3, 1 + idx % 4);
            std::vector<Rational> embedded = embed_sigma_exact(sys, params);
            std::vector<Rational> pre = alpha_map(k, n).inverse().apply_exact(embedded);
            for (const Rational& r : nl_residual_exact(sys, pre)) {
                CHECK(r.num == 0);
            }
        }
    }
}

TEST_CASE("FL on Sigma_L") {
    SigmaLPoint s{{0.5, 1.5, -0.7, 2.0}};
    StatePoint jav = fl_on_sigma(javelin1(), s);
    CHECK(jav.chart == cotjet_chart(1, 2));
    CHECK(jav.values == std::vector<double>{0.5, 1.5, 2.0, 0.7});

    StatePoint ps = fl_on_sigma(pure_second(), s);
    CHECK(ps.values == std::vector<double>{0.5, 1.5, 2.0, -0.7});

    LagrangianSystem fp(1, 1, P("0.5*q1_1^2"));
    SigmaLPoint s1{{0.4, -1.3}};
    StatePoint g = fl_on_sigma(fp, s1);
    CHECK(g.values == std::vector<double>{0.4, -1.3});
}

TEST_CASE("phi_L and the factorization FL o phi_L = leg_L") {
    LagrangianSystem jav = javelin1();
    StatePoint x(jetq_chart(1, 3), {0.25, -1.0, 0.5, 2.0});
    SigmaLPoint s = phi_L(jav, x);
    CHECK(s.params[0] == doctest::Approx(0.25));
    CHECK(s.params[3] == doctest::Approx(-1.0 + 2.0));  // pt0 = q_1 + q_3

    SigmaLPoint ps = phi_L(pure_second(), x);
    CHECK(ps.params[3] == doctest::Approx(-2.0));  // pt0 = -q_3

    LagrangianSystem fp(1, 1, P("0.5*q1_1^2"));
    StatePoint x1(jetq_chart(1, 1), {0.7, -0.2});
    SigmaLPoint id = phi_L(fp, x1);
    CHECK(id.params == std::vector<double>{0.7, -0.2});

    // FL o phi_L = leg_L at random regular points
    UniformRng rng(kEquivalenceSeed);
    CoordinateMap leg = legendre_ostrogradsky(jav);
    for (int t = 0; t < 16; ++t) {
        std::vector<double> v(4);
        for (auto& e : v) e = rng.uniform(-2.0, 2.0);
        StatePoint pt(jetq_chart(1, 3), v);
        StatePoint via_sigma = fl_on_sigma(jav, phi_L(jav, pt));
        StatePoint direct = leg.apply(pt);
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(via_sigma.values[i] - direct.values[i]) < 1e-10);
    }

    LagrangianSystem singular(1, 2, P("q1_2"));
    CHECK_THROWS_AS(phi_L(singular, x), IrregularError);
}

TEST_CASE("solution characterization") {
    std::vector<double> ts{0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0};

    // the javelin closed form solves the dynamics
    AnalyticCurve solution({{0.3, -1.2, 0.0, 0.0, 0.7, -0.4}});
    CharacterizationReport good = solution_characterization_check(javelin1(), solution, ts);
    CHECK(good.max_residual < 1e-9);

    // gamma(t) = t^3 is not a solution; the residual is |6t|
    AnalyticCurve cubic({{0.0, 0.0, 0.0, 1.0, 0.0, 0.0}});
    CharacterizationReport bad =
        solution_characterization_check(javelin1(), cubic, {1.0});
    CHECK(bad.max_residual == doctest::Approx(6.0));
    CHECK(bad.max_residual > 0.1);

    // free particle straight line is exact
    LagrangianSystem fp(1, 1, P("0.5*q1_1^2"));
    AnalyticCurve line({{0.3, 1.7, 0.0, 0.0, 0.0, 0.0}});
    CharacterizationReport straight = solution_characterization_check(fp, line, ts);
    CHECK(straight.max_residual == 0.0);
}

TEST_CASE("elimination equivalence: N_L residual tracks the EL residual along lifts") {
    LagrangianSystem sys = javelin1();
    std::vector<Expr> el = euler_lagrange(sys);
    std::vector<double> ts{0.3, 0.9, 1.7};

    AnalyticCurve solution({{0.1, 0.4, 0.0, 0.0, -0.9, 0.2}});
    AnalyticCurve non_solution({{0.0, 0.0, 0.7, -0.1, 0.0, 0.0}});
    for (const AnalyticCurve* curve : {&solution, &non_solution}) {
        CharacterizationReport nl = solution_characterization_check(sys, *curve, ts);
        double max_el = 0.0;
        for (double t : ts) {
            Assignment a = chart_assignment(curve->lift(4, t));
            for (const Expr& r : el) max_el = std::max(max_el, std::abs(evaluate(r, a)));
        }
        if (max_el < 1e-8) CHECK(nl.max_residual < 1e-8);
        else CHECK(nl.max_residual > 1e-8);
    }
}
