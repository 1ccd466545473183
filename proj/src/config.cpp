#include "axvv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace axvv {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key or value");
        if (kv.count(key))
            throw ConfigError("config: duplicate key '" + key + "'");
        kv[key] = val;
    }
    return kv;
}

double as_double(const std::string& key, const std::string& val) {
    double v = 0.0;
    auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size())
        throw ConfigError("config: key '" + key + "' needs a number, got '" + val + "'");
    return v;
}

int as_int(const std::string& key, const std::string& val) {
    int v = 0;
    auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size())
        throw ConfigError("config: key '" + key + "' needs an integer, got '" + val + "'");
    return v;
}

std::vector<double> as_list(const std::string& key, const std::string& val) {
    std::vector<double> out;
    std::stringstream ss(val);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(as_double(key, trim(cell)));
    if (out.empty()) throw ConfigError("config: key '" + key + "' needs a list of numbers");
    return out;
}

// Applies sim.* / grid.* / domain.* / init.* / force.* / norms.* / probes.*
// keys; returns the set of keys it consumed.
std::set<std::string> apply_sim_keys(const std::map<std::string, std::string>& kv,
                                     SimConfig& sim, SolverChoice* solver) {
    std::set<std::string> used;
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        used.insert(key);
        return &it->second;
    };

    if (auto v = get("grid.nr")) sim.nr = as_int("grid.nr", *v);
    if (auto v = get("grid.nz")) sim.nz = as_int("grid.nz", *v);
    if (auto v = get("domain.R")) sim.R = as_double("domain.R", *v);
    if (auto v = get("domain.zmin")) sim.zmin = as_double("domain.zmin", *v);
    if (auto v = get("domain.zmax")) sim.zmax = as_double("domain.zmax", *v);
    if (auto v = get("sim.nu")) sim.nu = as_double("sim.nu", *v);
    if (auto v = get("sim.T")) sim.T = as_double("sim.T", *v);
    if (auto v = get("sim.cfl")) sim.cfl = as_double("sim.cfl", *v);
    if (auto v = get("sim.cfl_euler")) sim.cfl_euler = as_double("sim.cfl_euler", *v);
    if (auto v = get("sim.samples")) sim.samples = as_int("sim.samples", *v);
    if (auto v = get("sim.boundary_tol")) sim.boundary_tol = as_double("sim.boundary_tol", *v);
    if (auto v = get("sim.limiter")) {
        if (*v == "minmod") sim.limiter = Limiter::minmod;
        else if (*v == "upwind1") sim.limiter = Limiter::upwind1;
        else if (*v == "centered") sim.limiter = Limiter::centered;
        else throw ConfigError("config: sim.limiter must be minmod|upwind1|centered");
    }
    if (auto v = get("sim.diffusion")) {
        if (*v == "explicit") sim.diffusion = DiffusionTreatment::explicit_cfl;
        else if (*v == "split_implicit") sim.diffusion = DiffusionTreatment::split_implicit;
        else throw ConfigError("config: sim.diffusion must be explicit|split_implicit");
    }
    if (solver) {
        if (auto v = get("sim.solver")) {
            if (*v == "ns") *solver = SolverChoice::ns;
            else if (*v == "euler") *solver = SolverChoice::euler;
            else throw ConfigError("config: sim.solver must be ns|euler");
        }
    }
    if (auto v = get("init.kind")) {
        if (*v == "zero") sim.init.kind = InitKind::zero;
        else if (*v == "gaussian") sim.init.kind = InitKind::gaussian;
        else if (*v == "hill") sim.init.kind = InitKind::hill;
        else if (*v == "snapshot") sim.init.kind = InitKind::snapshot;
        else throw ConfigError("config: init.kind must be zero|gaussian|hill|snapshot");
    }
    if (auto v = get("init.r0")) sim.init.r0 = as_double("init.r0", *v);
    if (auto v = get("init.z0")) sim.init.z0 = as_double("init.z0", *v);
    if (auto v = get("init.sigma")) sim.init.sigma = as_double("init.sigma", *v);
    if (auto v = get("init.amp")) sim.init.amplitude = as_double("init.amp", *v);
    if (auto v = get("init.radius")) sim.init.radius = as_double("init.radius", *v);
    if (auto v = get("init.path")) sim.init.path = *v;
    if (auto v = get("force.kind")) {
        if (*v == "none") sim.force.kind = ForceKind::none;
        else if (*v == "gaussian") sim.force.kind = ForceKind::gaussian;
        else throw ConfigError("config: force.kind must be none|gaussian");
    }
    if (auto v = get("force.r0")) sim.force.r0 = as_double("force.r0", *v);
    if (auto v = get("force.z0")) sim.force.z0 = as_double("force.z0", *v);
    if (auto v = get("force.sigma")) sim.force.sigma = as_double("force.sigma", *v);
    if (auto v = get("force.amp")) sim.force.amplitude = as_double("force.amp", *v);
    if (auto v = get("force.tdecay")) sim.force.t_decay = as_double("force.tdecay", *v);
    if (auto v = get("norms.p")) sim.norm_ps = as_list("norms.p", *v);
    if (auto v = get("probes.radii")) sim.probe_radii = as_list("probes.radii", *v);
    return used;
}

void reject_unknown(const std::map<std::string, std::string>& kv,
                    const std::set<std::string>& used) {
    for (const auto& [key, val] : kv)
        if (!used.count(key)) throw ConfigError("config: unknown key '" + key + "'");
}

}  // namespace

RunConfig run_config_from_text(const std::string& text) {
    auto kv = parse_kv(text);
    RunConfig rc;
    std::set<std::string> used = apply_sim_keys(kv, rc.sim, &rc.solver);
    if (auto it = kv.find("out.dir"); it != kv.end()) {
        rc.out_dir = it->second;
        used.insert("out.dir");
    }
    reject_unknown(kv, used);
    try {
        rc.sim.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return rc;
}

SweepConfig sweep_config_from_text(const std::string& text) {
    auto kv = parse_kv(text);
    SweepConfig sc;
    sc.config_text = text;
    std::set<std::string> used = apply_sim_keys(kv, sc.base, nullptr);
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        used.insert(key);
        return &it->second;
    };
    if (auto v = get("sweep.nu_max")) sc.nu_max = as_double("sweep.nu_max", *v);
    if (auto v = get("sweep.factor")) sc.factor = as_double("sweep.factor", *v);
    if (auto v = get("sweep.count")) sc.count = as_int("sweep.count", *v);
    if (auto v = get("sweep.workers")) sc.workers = as_int("sweep.workers", *v);
    if (auto v = get("sweep.floor")) sc.compute_floor = as_int("sweep.floor", *v) != 0;
    if (auto v = get("sweep.mollify_n")) sc.mollify_data_n = as_int("sweep.mollify_n", *v);
    if (auto v = get("out.dir")) sc.out_dir = *v;
    reject_unknown(kv, used);
    try {
        sc.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return sc;
}

}  // namespace axvv
