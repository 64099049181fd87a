#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hogm/io.hpp"

using namespace hogm;

namespace {

std::string fixture(const std::string& name) { return std::string(HOGM_FIXTURES_DIR) + "/" + name; }

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(HOGM_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), pipe)) result.output += buf.data();
    int status = pclose(pipe);
    result.exit_code = WEXITSTATUS(status);
    return result;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = std::string("/tmp/hogm_test_") + name;
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("load_system reads and validates definitions") {
    SystemDefinition jav = load_system(fixture("javelin.json"));
    CHECK(jav.dof == 3);
    CHECK(jav.order == 2);
    CHECK(jav.kind == SystemKind::Lagrangian);
    CHECK(jav.integrate.has_value());

    // over-order variable is rejected with the offending level named
    std::string bad = write_temp("bad_level.json",
                                 R"json({"name":"bad","dof":1,"order":2,"kind":"lagrangian",
                                     "expression":"q1_3"})json");
    try {
        load_system(bad);
        FAIL("expected DefinitionError");
    } catch (const DefinitionError& e) {
        CHECK(std::string(e.what()).find("level 3 exceeds order 2") != std::string::npos);
    }

    // empty constraints array behaves like an absent one
    std::string empty = write_temp("empty_constraints.json",
                                   R"json({"name":"fp","dof":1,"order":1,"kind":"lagrangian",
                                       "expression":"0.5*q1_1^2","constraints":[]})json");
    CHECK(load_system(empty).constraints.empty());

    // wrong initial-vector length
    std::string short_init = write_temp("short_init.json",
                                        R"json({"name":"fp","dof":1,"order":1,"kind":"lagrangian",
                                            "expression":"0.5*q1_1^2",
                                            "integrate":{"initial":[0.0],"t0":0,"t1":1,"step":0.1}})json");
    CHECK_THROWS_AS(load_system(short_init), DefinitionError);

    // malformed JSON carries the parser's location message
    std::string mangled = write_temp("mangled.json", "{\"name\": ");
    CHECK_THROWS_AS(load_system(mangled), DefinitionError);

    CHECK_THROWS_AS(load_system("/nonexistent/definitely_missing.json"), DefinitionError);
}

TEST_CASE("derive command output") {
    RunResult jav = run_cli("derive " + fixture("javelin.json"));
    CHECK(jav.exit_code == 0);
    CHECK(jav.output.find("p1_0 = q1_1 + q1_3") != std::string::npos);
    CHECK(jav.output.find("p1_1 = -q1_2") != std::string::npos);

    RunResult fp = run_cli("derive " + fixture("free_particle.json"));
    CHECK(fp.exit_code == 0);
    CHECK(fp.output.find("EL[1] = -q1_2") != std::string::npos);

    RunResult ps = run_cli("derive " + fixture("pure_second.json"));
    CHECK(ps.output.find("EL[1] = q1_4") != std::string::npos);
}

TEST_CASE("roundtrip command verdicts and exit codes") {
    RunResult jav = run_cli("roundtrip " + fixture("javelin.json"));
    CHECK(jav.exit_code == 0);
    CHECK(jav.output.find("[PASS] roundtrip_equivalent") != std::string::npos);

    std::string bad = write_temp("non_kth.json",
                                 R"json({"name":"bad_h","dof":1,"order":2,"kind":"hamiltonian",
                                     "expression":"0.5*(p1_0^2 + p1_1^2)"})json");
    RunResult rejected = run_cli("roundtrip " + bad);
    CHECK(rejected.exit_code == 1);
    CHECK(rejected.output.find("dH/dp") != std::string::npos);

    std::string mixed = write_temp("mixed_h.json",
                                   R"json({"name":"mixed","dof":1,"order":2,"kind":"hamiltonian",
                                       "expression":"p1_0*q1_1 + 0.5*p1_1^2"})json");
    RunResult ok = run_cli("roundtrip " + mixed);
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("1/2*q1_2^2") != std::string::npos);
}

TEST_CASE("integrate command writes deterministic artifacts") {
    RunResult first =
        run_cli("integrate " + fixture("free_particle.json") + " --out /tmp/hogm_cli_a");
    CHECK(first.exit_code == 0);
    RunResult second =
        run_cli("integrate " + fixture("free_particle.json") + " --out /tmp/hogm_cli_b");
    CHECK(second.exit_code == 0);

    std::string csv_a = slurp("/tmp/hogm_cli_a/free_particle_trajectory.csv");
    std::string csv_b = slurp("/tmp/hogm_cli_b/free_particle_trajectory.csv");
    REQUIRE(!csv_a.empty());
    CHECK(csv_a == csv_b);
    CHECK(csv_a.substr(0, 14) == "t,q1_0,q1_1\n0,");
    CHECK(csv_a.find("\r") == std::string::npos);

    // identical inputs (same --out) reproduce the report byte for byte
    std::string rep_a = slurp("/tmp/hogm_cli_a/free_particle_report.json");
    RunResult repeat =
        run_cli("integrate " + fixture("free_particle.json") + " --out /tmp/hogm_cli_a");
    CHECK(repeat.exit_code == 0);
    std::string rep_b = slurp("/tmp/hogm_cli_a/free_particle_report.json");
    REQUIRE(!rep_a.empty());
    CHECK(rep_a == rep_b);

    // an unreachable tolerance turns the run into a failure exit
    RunResult strict =
        run_cli("integrate " + fixture("javelin.json") + " --out /tmp/hogm_cli_c --tol 1e-20");
    CHECK(strict.exit_code == 1);

    // missing integrate block
    std::string no_block = write_temp("no_integrate.json",
                                      R"json({"name":"fp","dof":1,"order":1,"kind":"lagrangian",
                                          "expression":"0.5*q1_1^2"})json");
    CHECK(run_cli("integrate " + no_block).exit_code == 1);
}

TEST_CASE("verify-triple command") {
    RunResult jav = run_cli("verify-triple " + fixture("javelin.json"));
    CHECK(jav.exit_code == 0);
    CHECK(jav.output.find("alpha = symplectic (+1)") != std::string::npos);
    CHECK(jav.output.find("beta = anti (-1)") != std::string::npos);
    CHECK(jav.output.find("N_L_residual_on_embedded_samples = 0") != std::string::npos);
    CHECK(jav.output.find("characterization_cubic = non-solution") != std::string::npos);

    RunResult fp = run_cli("verify-triple " + fixture("free_particle.json"));
    CHECK(fp.exit_code == 0);

    // wrong kind fails and says so
    RunResult ham = run_cli("verify-triple " + fixture("javelin_hamiltonian.json"));
    CHECK(ham.exit_code == 1);
    CHECK(ham.output.find("expects a Lagrangian") != std::string::npos);
}

TEST_CASE("check command") {
    CHECK(run_cli("check " + fixture("javelin.json")).exit_code == 0);
    CHECK(run_cli("check " + fixture("javelin_hamiltonian.json")).exit_code == 0);
    std::string singular = write_temp("singular.json",
                                      R"json({"name":"singular","dof":1,"order":2,"kind":"lagrangian",
                                          "expression":"q1_2"})json");
    RunResult bad = run_cli("check " + singular);
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("[FAIL] regular") != std::string::npos);
}

TEST_CASE("json format mirrors the text report content") {
    RunResult text = run_cli("derive " + fixture("free_particle.json") + " --format text");
    RunResult json = run_cli("derive " + fixture("free_particle.json") + " --format json");
    CHECK(json.output.find("\"name\": \"EL[1]\"") != std::string::npos);
    CHECK(json.output.find("\"value\": \"-q1_2\"") != std::string::npos);
    CHECK(text.output.find("EL[1] = -q1_2") != std::string::npos);
    // identical runs produce identical bytes
    RunResult again = run_cli("derive " + fixture("free_particle.json") + " --format json");
    CHECK(json.output == again.output);
}
