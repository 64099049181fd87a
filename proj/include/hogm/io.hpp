#ifndef HOGM_IO_HPP
#define HOGM_IO_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hogm/dynamics.hpp"
#include "hogm/hamiltonian.hpp"
#include "hogm/lagrangian.hpp"

namespace hogm {

class DefinitionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IntegrateSpec {
    std::vector<double> initial;
    double t0 = 0.0;
    double t1 = 1.0;
    double step = 1e-3;
};

enum class SystemKind { Lagrangian, Hamiltonian };

// One system definition file:
// {"name": str, "dof": int, "order": int, "kind": "lagrangian"|"hamiltonian",
//  "expression": str, "constraints": [str]?, "integrate": {...}?}
struct SystemDefinition {
    std::string name;
    int dof = 1;
    int order = 1;
    SystemKind kind = SystemKind::Lagrangian;
    std::string expression;
    std::vector<std::string> constraints;
    std::optional<IntegrateSpec> integrate;
};

SystemDefinition load_system(const std::string& path);
SystemDefinition load_system_text(const std::string& text, const std::string& origin = "<text>");

LagrangianSystem to_lagrangian(const SystemDefinition& def);
HamiltonianSystem to_hamiltonian(const SystemDefinition& def);
std::vector<Expr> parsed_constraints(const SystemDefinition& def);

// chart of the integrate.initial vector for this definition
Chart state_chart(const SystemDefinition& def);

// header "t,<slot names in chart order>", one row per sample, LF endings,
// floats in shortest round-trip form
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string value;  // numeric checks carry the formatted number
};

struct Report {
    std::string system;
    std::vector<CheckItem> checks;
    std::vector<std::string> artifacts;

    bool all_pass() const;
};

// {"system": ..., "checks": [{"name","pass","value"}...], "artifacts": [...]}
std::string report_json(const Report& r);
std::string report_text(const Report& r);

}  // namespace hogm

#endif
