// Benchmark of the OpenMP scan/ensemble kernels against their serial
// reference implementations, on a long javelin trajectory workload.

#include <chrono>
#include <cstdio>

#include "hogm/dynamics.hpp"
#include "hogm/parse.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace hogm;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    double t1 = argc > 1 ? std::atof(argv[1]) : 50.0;
    double h = argc > 2 ? std::atof(argv[2]) : 1e-4;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    HamiltonianSystem hsys(
        3, 2,
        parse("p1_0*q1_1 + p2_0*q2_1 + p3_0*q3_1 - 0.5*(q1_1^2 + p1_1^2 + q2_1^2 + p2_1^2 + "
              "q3_1^2 + p3_1^2)"));
    OdeSystem ode = hamilton_ode(hsys);
    std::vector<double> x0{0.1, -0.2, 0.3, 0.9, -0.5, 0.4, 0.7, 0.2, -0.8, 0.1, 0.6, -0.3};

    auto start = Clock::now();
    Trajectory traj = integrate_rk4(ode, x0, 0.0, t1, h);
    std::printf("integrate: %zu samples in %.3fs\n", traj.size(), seconds_since(start));

    CompiledExpr H(hsys.H, traj.chart);
    SampleEvaluator f = [&](double, const std::vector<double>& x) { return H.eval(x); };

    start = Clock::now();
    ResidualReport serial = residual_along_serial(traj, f);
    double t_serial = seconds_since(start);

    start = Clock::now();
    ResidualReport parallel = residual_along(traj, f);
    double t_parallel = seconds_since(start);

    bool identical = serial.per_sample == parallel.per_sample &&
                     serial.max_abs == parallel.max_abs;
    std::printf("residual scan:       serial %.3fs | openmp %.3fs | speedup %.2fx | %s\n",
                t_serial, t_parallel, t_serial / t_parallel,
                identical ? "bit-identical" : "MISMATCH");

    std::vector<std::vector<double>> ensemble;
    for (int i = 0; i < 16; ++i) {
        std::vector<double> x = x0;
        x[0] += 0.01 * i;
        ensemble.push_back(x);
    }
    start = Clock::now();
    std::vector<Trajectory> es = integrate_ensemble_serial(ode, ensemble, 0.0, t1 / 10, h);
    double e_serial = seconds_since(start);
    start = Clock::now();
    std::vector<Trajectory> ep = integrate_ensemble(ode, ensemble, 0.0, t1 / 10, h);
    double e_parallel = seconds_since(start);
    bool same = true;
    for (std::size_t i = 0; i < es.size(); ++i)
        same = same && es[i].states.back() == ep[i].states.back();
    std::printf("ensemble integrate:  serial %.3fs | openmp %.3fs | speedup %.2fx | %s\n",
                e_serial, e_parallel, e_serial / e_parallel,
                same ? "bit-identical" : "MISMATCH");

    return identical && same ? 0 : 1;
}
