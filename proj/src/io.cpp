#include "hogm/io.hpp"

#include <fstream>
#include <sstream>

#include "hogm/parse.hpp"
#include "json.hpp"

namespace hogm {

namespace {

using nlohmann::json;

SystemDefinition from_json(const json& j, const std::string& origin) {
    SystemDefinition def;
    try {
        def.name = j.at("name").get<std::string>();
        def.dof = j.at("dof").get<int>();
        def.order = j.at("order").get<int>();
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "lagrangian") def.kind = SystemKind::Lagrangian;
        else if (kind == "hamiltonian") def.kind = SystemKind::Hamiltonian;
        else throw DefinitionError(origin + ": kind must be 'lagrangian' or 'hamiltonian'");
        def.expression = j.at("expression").get<std::string>();
        if (j.contains("constraints"))
            def.constraints = j.at("constraints").get<std::vector<std::string>>();
        if (j.contains("integrate")) {
            const json& ji = j.at("integrate");
            IntegrateSpec spec;
            spec.initial = ji.at("initial").get<std::vector<double>>();
            spec.t0 = ji.at("t0").get<double>();
            spec.t1 = ji.at("t1").get<double>();
            spec.step = ji.at("step").get<double>();
            def.integrate = spec;
        }
    } catch (const json::exception& e) {
        throw DefinitionError(origin + ": " + e.what());
    }
    if (def.dof < 1 || def.order < 1)
        throw DefinitionError(origin + ": dof and order must be >= 1");

    // validate by constructing; surfaces level violations with their message
    try {
        if (def.kind == SystemKind::Lagrangian) {
            to_lagrangian(def);
            parsed_constraints(def);
        } else {
            if (!def.constraints.empty())
                throw DefinitionError("constraints are only supported on Lagrangian systems");
            to_hamiltonian(def);
        }
    } catch (const ParseError& e) {
        throw DefinitionError(origin + ": expression parse error: " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DefinitionError(origin + ": " + e.what());
    }

    if (def.integrate) {
        const auto expected = static_cast<std::size_t>(state_chart(def).dim());
        if (def.integrate->initial.size() != expected)
            throw DefinitionError(origin + ": integrate.initial has length " +
                                  std::to_string(def.integrate->initial.size()) + ", chart needs " +
                                  std::to_string(expected));
        if (!(def.integrate->step > 0.0) || !(def.integrate->t1 > def.integrate->t0))
            throw DefinitionError(origin + ": integrate needs step > 0 and t1 > t0");
    }
    return def;
}

}  // namespace

SystemDefinition load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DefinitionError(path + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DefinitionError(path + ": " + e.what());
    }
    return from_json(j, path);
}

SystemDefinition load_system_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DefinitionError(origin + ": " + e.what());
    }
    return from_json(j, origin);
}

LagrangianSystem to_lagrangian(const SystemDefinition& def) {
    if (def.kind != SystemKind::Lagrangian)
        throw DefinitionError(def.name + ": not a Lagrangian definition");
    return LagrangianSystem(def.dof, def.order, parse(def.expression));
}

HamiltonianSystem to_hamiltonian(const SystemDefinition& def) {
    if (def.kind != SystemKind::Hamiltonian)
        throw DefinitionError(def.name + ": not a Hamiltonian definition");
    return HamiltonianSystem(def.dof, def.order, parse(def.expression));
}

std::vector<Expr> parsed_constraints(const SystemDefinition& def) {
    std::vector<Expr> out;
    out.reserve(def.constraints.size());
    for (const auto& c : def.constraints) out.push_back(parse(c));
    return out;
}

Chart state_chart(const SystemDefinition& def) {
    if (def.kind == SystemKind::Lagrangian) return jetq_chart(def.dof, 2 * def.order - 1);
    return cotjet_chart(def.dof, def.order);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t";
    for (int i = 0; i < traj.chart.dim(); ++i) os << "," << traj.chart.slot_name(i);
    os << "\n";
    for (std::size_t s = 0; s < traj.size(); ++s) {
        os << format_double_shortest(traj.times[s]);
        for (double v : traj.states[s]) os << "," << format_double_shortest(v);
        os << "\n";
    }
}

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string report_json(const Report& r) {
    json j;
    j["system"] = r.system;
    j["checks"] = json::array();
    for (const auto& c : r.checks) {
        json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        jc["value"] = c.value;
        j["checks"].push_back(jc);
    }
    j["artifacts"] = json::array();
    for (const auto& a : r.artifacts) j["artifacts"].push_back(a);
    return j.dump(2) + "\n";
}

std::string report_text(const Report& r) {
    std::ostringstream os;
    os << "system: " << r.system << "\n";
    for (const auto& c : r.checks)
        os << "[" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
           << (c.value.empty() ? "" : " = " + c.value) << "\n";
    for (const auto& a : r.artifacts) os << "artifact: " << a << "\n";
    return os.str();
}

}  // namespace hogm
