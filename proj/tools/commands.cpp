// Copyright 2026 The magickit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "CLI11.hpp"
#include "json_io.hpp"
#include "magickit/bounds.hpp"
#include "magickit/interconvert.hpp"
#include "magickit/monotones.hpp"

namespace magickit::cli {

namespace {

struct Globals {
    bool text = false;
    double tol = 0.0;
    std::string cache_dir;
    std::string fixtures;
    std::filesystem::path dir;
};

// Payload plus exit code; a negative answer to a decision query is a domain failure that still
// carries its certificate.
struct Outcome {
    Json payload = Json::object();
    int code = kOk;
};

Json bloch_json(const Bloch &r) {
    return Json::array({round12(r[0]), round12(r[1]), round12(r[2])});
}

Json report_json(const MonotoneReport &r) {
    Json details = Json::object();
    for (const auto &[k, v] : r.details) {
        details[k] = round12(v);
    }
    Json out{{"monotone", r.name}, {"value", round12(r.value)}, {"details", details}};
    if (!r.convention.empty()) {
        out["convention"] = r.convention;
    }
    return out;
}

Json membership_json(const StabMembership &m, size_t members) {
    Json out{{"inside", m.inside.feasible}};
    if (m.inside.feasible) {
        Json weights = Json::array();
        for (Eigen::Index i = 0; i < m.inside.x.size() && i < (Eigen::Index)members; ++i) {
            if (m.inside.x[i] > 1e-12) {
                weights.push_back(Json{{"index", i}, {"weight", round12(m.inside.x[i])}});
            }
        }
        out["decomposition"] = weights;
    } else if (m.witness) {
        out["witness"] = Json{{"matrix", matrix_to_json(m.witness->w)}, {"violation", round12(m.witness->violation)}};
    }
    return out;
}

Json bound_json(const BoundReport &b) {
    Json inputs = Json::object();
    for (const auto &[k, v] : b.inputs) {
        inputs[k] = round12(v);
    }
    Json out{{"quantity", to_string(b.quantity)}};
    if (b.integral) {
        out["value"] = (long)std::llround(b.value);
    } else {
        out["value"] = round12(b.value);
    }
    out["bound_on_bound"] = b.bound_on_bound;
    out["inputs"] = inputs;
    out["convention"] = b.convention;
    return out;
}

std::string fmt(double x, int precision = 12) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return buf;
}

void emit_text(const Json &j, const std::string &prefix, std::ostream &out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            emit_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
        return;
    }
    if (j.is_array() && !j.empty() && j[0].is_object()) {
        for (size_t i = 0; i < j.size(); ++i) {
            emit_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
        }
        return;
    }
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

std::string table1_text(const Table1Report &t) {
    std::ostringstream s;
    char line[256];
    std::snprintf(line, sizeof line, "resource |%s>  D_min = %s\n", t.resource.c_str(), fmt(t.dmin_resource).c_str());
    s << line;
    std::snprintf(line, sizeof line, "%-16s %6s %14s %8s %9s %7s %11s %8s\n", "state", "qubits", "R_HC", "bound",
                  "expected", "prior", "log2 R_HC", "channel");
    s << line;
    for (const auto &r : t.rows) {
        std::string ch = r.bound_channel ? std::to_string(*r.bound_channel) : "-";
        std::snprintf(line, sizeof line, "%-16s %6d %14s %8ld %9d %7d %11ld %8s%s\n", r.label.c_str(), r.qubits,
                      fmt(r.r_hc, 10).c_str(), r.bound_state, r.expected, r.prior_bound, r.bound_hc, ch.c_str(),
                      r.flagged ? "  FLAG" : "");
        s << line;
    }
    s << "convention: " << t.convention << "\n";
    return s.str();
}

Json table1_json(const Table1Report &t) {
    Json rows = Json::array();
    for (const auto &r : t.rows) {
        Json row{{"label", r.label},
                 {"construction", r.construction},
                 {"qubits", r.qubits},
                 {"r_hc", round12(r.r_hc)},
                 {"lr", round12(r.lr_state)},
                 {"bound", r.bound_state},
                 {"expected", r.expected},
                 {"prior_bound", r.prior_bound},
                 {"lr_log2_r_hc", round12(r.lr_hc)},
                 {"bound_log2_r_hc", r.bound_hc}};
        if (r.lr_channel) {
            row["lr_channel"] = round12(*r.lr_channel);
            row["bound_channel"] = *r.bound_channel;
        }
        row["matches_expected"] = r.matches_expected;
        row["flagged"] = r.flagged;
        rows.push_back(std::move(row));
    }
    return Json{{"resource", t.resource}, {"dmin_resource", round12(t.dmin_resource)}, {"rows", rows},
                {"convention", t.convention}};
}

CutOptions cut_options(const Globals &g) {
    CutOptions o;
    if (g.tol > 0) {
        o.barrier_tolerance = g.tol;
    }
    return o;
}

// ---- subcommands ----

Outcome cmd_enumerate(const Globals &g, int n, bool emit_states, bool no_cache, std::ostream &err) {
    EnumerateOptions o;
    o.cache_dir = g.cache_dir;
    o.use_cache = !no_cache;
    auto start = std::chrono::steady_clock::now();
    auto set = enumerate_pure_stabilizer_states(n, o);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    long entangled = 0;
    for (const auto &psi : set.states()) {
        bool e = false;
        for (int cut = 1; cut < n; ++cut) {
            e = e || is_entangled(psi, 1 << cut, 1 << (n - cut));
        }
        entangled += e;
    }
    Outcome r;
    r.payload = Json{{"n", n}, {"count", set.size()}, {"entangled", entangled}};
    if (emit_states) {
        Json states = Json::array();
        for (const auto &psi : set.states()) {
            states.push_back(vector_to_json(psi));
        }
        r.payload["states"] = states;
    }
    err << Json{{"source", set.source() == StabSource::cache ? "cache" : "computed"}, {"wall_seconds", secs}}.dump()
        << "\n";
    return r;
}

Outcome cmd_check_stab(const Globals &g, const std::string &state) {
    auto rho = state_from_json(resolve_argument(state, g.dir), g.dir);
    const auto &s = stabilizer_set_for_dim(rho.dim());
    auto m = is_stabilizer_mixed(rho, s);
    return {membership_json(m, s.size()), m.inside.feasible ? kOk : kDomainFailure};
}

Outcome cmd_check_cspo(const Globals &g, const std::string &channel) {
    auto c = channel_from_json(resolve_argument(channel, g.dir), g.dir);
    const auto &s = stabilizer_set_for_dim(c.dim_in() * c.dim_out());
    auto m = is_cspo(c, s);
    return {membership_json(m, s.size()), m.inside.feasible ? kOk : kDomainFailure};
}

Outcome cmd_check_superchannel(const Globals &g, const std::string &text, bool complete) {
    auto theta = superchannel_from_json(resolve_argument(text, g.dir), g.dir);
    Outcome r;
    auto violations = validate_superchannel(theta);
    r.payload["valid"] = violations.empty();
    if (!violations.empty()) {
        r.payload["violations"] = violations;
        r.code = kDomainFailure;
        return r;
    }
    if (complete) {
        const auto &s = stabilizer_set_for_dim(theta.dims.total());
        auto m = is_completely_cspo_preserving(theta, s);
        Json mj = membership_json(m, s.size());
        r.payload["completely_cspo_preserving"] = m.inside.feasible;
        if (mj.contains("witness")) {
            r.payload["witness"] = mj["witness"];
        }
        r.code = m.inside.feasible ? kOk : kDomainFailure;
    } else {
        auto p = is_cspo_preserving_qubit(theta);
        r.payload["cspo_preserving"] = p.preserving;
        r.payload["vertices_checked"] = p.vertices_checked;
        if (p.counterexample) {
            r.payload["counterexample"] = channel_to_json(*p.counterexample);
        }
        r.code = p.preserving ? kOk : kDomainFailure;
    }
    return r;
}

Outcome cmd_monotone(const Globals &g, const std::string &kind, const std::string &state, const std::string &channel,
                     double epsilon, std::uint64_t seed) {
    Outcome r;
    if (!channel.empty()) {
        auto c = channel_from_json(resolve_argument(channel, g.dir), g.dir);
        const auto &s = stabilizer_set_for_dim(c.dim_in() * c.dim_out());
        if (kind == "robustness") {
            r.payload = report_json(robustness_channel(c, s));
        } else if (kind == "gen-robustness") {
            GeneralizedRobustnessOptions o;
            o.cuts = cut_options(g);
            r.payload = report_json(log_generalized_robustness_channel(c, s, o));
        } else if (kind == "dmin") {
            auto b = dmin_channel_bracket(c, s, seed);
            r.payload = Json{{"monotone", "dmin-channel"},
                             {"lower", round12(b.lower)},
                             {"upper_estimate", round12(b.upper_estimate)},
                             {"upper_certified", b.upper_certified}};
        } else if (kind == "dmin-eps") {
            r.payload = report_json(dmin_eps_state(DensityOperator(c.normalized()), s, epsilon, cut_options(g)));
            r.payload["input"] = "normalized Choi state";
        } else {
            throw Error(ErrorCode::invalid_input, "monotone " + kind + " is defined for states only");
        }
        return r;
    }
    auto rho = state_from_json(resolve_argument(state, g.dir), g.dir);
    const auto &s = stabilizer_set_for_dim(rho.dim());
    if (kind == "robustness") {
        r.payload = report_json(robustness_state(rho, s));
    } else if (kind == "gen-robustness") {
        GeneralizedRobustnessOptions o;
        o.cuts = cut_options(g);
        r.payload = report_json(generalized_robustness_state(rho, s, o));
    } else if (kind == "dmin") {
        r.payload = report_json(dmin_state(rho, s));
    } else if (kind == "dmin-eps") {
        r.payload = report_json(dmin_eps_state(rho, s, epsilon, cut_options(g)));
    } else {
        GeometricOptions o;
        if (g.tol > 0) {
            o.tolerance = g.tol;
        }
        r.payload = report_json(geometric_measure(rho, s, o));
    }
    return r;
}

Outcome cmd_convert(const Globals &g, const std::string &from, const std::string &to, bool polytope) {
    auto rho = state_from_json(resolve_argument(from, g.dir), g.dir, "from");
    auto sigma = state_from_json(resolve_argument(to, g.dir), g.dir, "to");
    if (rho.dim() != 2 || sigma.dim() != 2) {
        throw Error(ErrorCode::unsupported_dimension, "convert: qubit states only");
    }
    auto f = qubit_convertible(rho, sigma);
    Outcome r;
    r.payload = Json{{"feasible", f.feasible}, {"from", bloch_json(bloch_vector(rho))}, {"to", bloch_json(bloch_vector(sigma))}};
    auto sys = build_interconversion_system(rho, sigma);
    if (f.feasible) {
        r.payload["weights"] = real_vector_to_json(f.x);
    } else {
        r.payload["certificate"] = Json{{"y", real_vector_to_json(f.certificate)},
                                        {"min_AT_y", round12((sys.a.transpose() * f.certificate).minCoeff())},
                                        {"b_dot_y", round12(sys.b.dot(f.certificate))}};
        r.code = kDomainFailure;
    }
    if (polytope) {
        auto hull = reachable_hull(rho);
        Json orbit = Json::array(), octa = Json::array(), facets = Json::array();
        for (const auto &v : clifford_orbit(rho)) {
            orbit.push_back(bloch_json(v));
        }
        for (const auto &v : octahedron_vertices()) {
            octa.push_back(bloch_json(v));
        }
        Json points = Json::array();
        for (const auto &p : hull.points) {
            points.push_back(bloch_json(p));
        }
        for (const auto &t : hull.facets) {
            facets.push_back(t);
        }
        r.payload["polytope"] = Json{{"orbit", orbit}, {"octahedron", octa}, {"points", points}, {"facets", facets}};
    }
    return r;
}

Outcome cmd_distance(const Globals &g, const std::string &from, const std::string &to) {
    auto rho = state_from_json(resolve_argument(from, g.dir), g.dir, "from");
    auto sigma = state_from_json(resolve_argument(to, g.dir), g.dir, "to");
    if (rho.dim() != 2) {
        throw Error(ErrorCode::unsupported_dimension, "distance: qubit states only");
    }
    Outcome r;
    r.payload = Json{{"distance", round12(interconversion_distance(rho, sigma))},
                     {"convertible", qubit_convertible(rho, sigma).feasible}};
    return r;
}

struct BoundArgs {
    std::string state, channel;
    double lr = NAN, dmin = NAN, dmin_channel = NAN, dmin_eps = NAN, lr_state = NAN, epsilon = 0.0;
    bool skip_three = false;
};

Outcome cmd_bounds(const Globals &g, const std::string &kind, const BoundArgs &a, std::ostream &out) {
    Outcome r;
    if (kind == "table1") {
        auto t = table1_report(!a.skip_three);
        if (g.text) {
            out << table1_text(t);
            r.code = -1;  // already written
        } else {
            r.payload = table1_json(t);
        }
        return r;
    }
    const bool from_objects = !a.state.empty() || !a.channel.empty();
    if (from_objects && (a.state.empty() || a.channel.empty())) {
        throw Error(ErrorCode::invalid_input, "bounds: --state and --channel go together");
    }
    Json reports = Json::array();
    if (kind == "cost") {
        BoundReport up{BoundQuantity::cost_upper};
        up.integral = true;
        up.convention = "ceil(LR(N) / D_min(psi)), LR = log2(1 + R) of the channel";
        if (from_objects) {
            auto c = channel_from_json(resolve_argument(a.channel, g.dir), g.dir);
            auto psi = state_from_json(resolve_argument(a.state, g.dir), g.dir);
            const auto &sc = stabilizer_set_for_dim(c.dim_in() * c.dim_out());
            const auto &ss = stabilizer_set_for_dim(psi.dim());
            double lr = robustness_channel(c, sc).detail("LR");
            double dmin = dmin_state(psi, ss).value;
            up.value = (double)cost_upper_bound(lr, dmin);
            up.inputs = {{"LR_channel", lr}, {"dmin_state", dmin}};
            GeneralizedRobustnessOptions o;
            o.cuts = cut_options(g);
            double lrg_c = log_generalized_robustness_channel(c, sc, o).value;
            double lrg_s = generalized_robustness_state(psi, ss, o).value;
            BoundReport low{BoundQuantity::cost_lower};
            low.value = cost_lower_bound(lrg_c, lrg_s);
            low.inputs = {{"LRg_channel", lrg_c}, {"LRg_state", lrg_s}};
            low.convention = "LR_g(N) / LR_g(psi)";
            reports.push_back(bound_json(up));
            reports.push_back(bound_json(low));
        } else {
            if (std::isnan(a.lr) || std::isnan(a.dmin)) {
                throw Error(ErrorCode::invalid_input, "bounds cost: give --lr and --dmin, or --channel and --state");
            }
            up.value = (double)cost_upper_bound(a.lr, a.dmin);
            up.inputs = {{"LR_channel", a.lr}, {"dmin_state", a.dmin}};
            reports.push_back(bound_json(up));
        }
    } else {
        BoundReport up{BoundQuantity::distill_upper};
        up.convention = "D_min(N) / D_min(psi)";
        BoundReport low{BoundQuantity::distill_lower};
        low.integral = true;
        low.convention = "floor(D_min^eps(normalized Choi) / log2 R_HC(psi))";
        if (from_objects) {
            auto c = channel_from_json(resolve_argument(a.channel, g.dir), g.dir);
            auto psi = state_from_json(resolve_argument(a.state, g.dir), g.dir);
            const auto &sc = stabilizer_set_for_dim(c.dim_in() * c.dim_out());
            const auto &ss = stabilizer_set_for_dim(psi.dim());
            auto bracket = dmin_channel_bracket(c, sc);
            double dmin = dmin_state(psi, ss).value;
            up.value = distill_upper_bound(bracket.lower, dmin);
            up.bound_on_bound = !bracket.upper_certified;
            up.inputs = {{"dmin_channel_lower", bracket.lower}, {"dmin_channel_upper_estimate", bracket.upper_estimate},
                         {"dmin_state", dmin}};
            double de = dmin_eps_state(DensityOperator(c.normalized()), sc, a.epsilon, cut_options(g)).value;
            double lr = robustness_state(psi, ss).detail("LR_HC");
            low.value = (double)distill_lower_bound(de, lr);
            low.inputs = {{"epsilon", a.epsilon}, {"dmin_eps_choi", de}, {"LR_state", lr}};
            reports.push_back(bound_json(up));
            reports.push_back(bound_json(low));
        } else {
            bool any = false;
            if (!std::isnan(a.dmin_channel) || !std::isnan(a.dmin)) {
                if (std::isnan(a.dmin_channel) || std::isnan(a.dmin)) {
                    throw Error(ErrorCode::invalid_input, "bounds distill: --dmin-channel needs --dmin");
                }
                up.value = distill_upper_bound(a.dmin_channel, a.dmin);
                up.inputs = {{"dmin_channel", a.dmin_channel}, {"dmin_state", a.dmin}};
                reports.push_back(bound_json(up));
                any = true;
            }
            if (!std::isnan(a.dmin_eps) || !std::isnan(a.lr_state)) {
                if (std::isnan(a.dmin_eps) || std::isnan(a.lr_state)) {
                    throw Error(ErrorCode::invalid_input, "bounds distill: --dmin-eps needs --lr-state");
                }
                low.value = (double)distill_lower_bound(a.dmin_eps, a.lr_state);
                low.inputs = {{"dmin_eps_choi", a.dmin_eps}, {"LR_state", a.lr_state}};
                reports.push_back(bound_json(low));
                any = true;
            }
            if (!any) {
                throw Error(ErrorCode::invalid_input,
                            "bounds distill: give --channel and --state, or --dmin-channel/--dmin and/or --dmin-eps/--lr-state");
            }
        }
    }
    r.payload["bounds"] = reports;
    return r;
}

Outcome cmd_simulate(const Globals &g, const std::string &mode, const std::string &circuit_text, const SimulationConfig &cfg,
                     std::ostream &err) {
    auto circuit = circuit_from_json(resolve_argument(circuit_text, g.dir), g.dir);
    auto start = std::chrono::steady_clock::now();
    SimEstimate e = mode == "static" ? static_monte_carlo(circuit, cfg) : constrained_path(circuit, cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Outcome r;
    r.payload = Json{{"mode", mode},
                     {"estimate", round12(e.estimate)},
                     {"error_bound", round12(e.error_bound)},
                     {"samples", e.samples},
                     {"q1", round12(e.q1)}};
    if (mode == "constrained") {
        r.payload["replaced"] = e.replaced;
        r.payload["lambda"] = round12(e.lambda);
        r.payload["lambda_star"] = round12(e.lambda_star);
    }
    r.payload["seed"] = cfg.seed;
    r.payload["exact_reference"] = round12(expectation_exact(circuit));
    err << Json{{"N", e.samples}, {"replaced", e.replaced}, {"lambda", e.lambda}, {"lambda_star", e.lambda_star},
                {"wall_seconds", secs}}
               .dump()
        << "\n";
    return r;
}

int code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::numerical_failure:
        case ErrorCode::no_convergence:
            return kNumerical;
        default:
            return kDomainFailure;
    }
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Stabilizer-resource toolkit: magic monotones, interconversion, bounds and simulation."};
    app.name("magickit");
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    bool json_flag = false;
    auto *json_opt = app.add_flag("--json", json_flag, "JSON output (default)");
    app.add_flag("--text", g.text, "Plain text output")->excludes(json_opt);
    app.add_option("--tol", g.tol, "Solver tolerance override")->check(CLI::PositiveNumber);
    app.add_option("--cache-dir", g.cache_dir, "Stabilizer enumeration cache directory");
    app.add_option("--fixtures", g.fixtures, "Fixture directory");

    int n = 0;
    bool emit_states = false, no_cache = false;
    auto *enumerate = app.add_subcommand("enumerate", "Enumerate pure stabilizer states");
    enumerate->add_option("--n", n, "Qubit count (1-3)")->required()->check(CLI::Range(1, 3));
    enumerate->add_flag("--emit-states", emit_states, "Include the state vectors");
    enumerate->add_flag("--no-cache", no_cache, "Ignore the on-disk cache");

    std::string state, channel, superchannel, from, to, circuit;
    auto *check_stab = app.add_subcommand("check-stab", "Is a state a stabilizer mixture?");
    check_stab->add_option("--state", state, "State JSON, file or fixture name")->required();

    auto *check_cspo = app.add_subcommand("check-cspo", "Is a channel completely stabilizer preserving?");
    check_cspo->add_option("--channel", channel, "Channel JSON, file or fixture name")->required();

    bool complete = false, preserving = false;
    auto *check_super = app.add_subcommand("check-superchannel", "Superchannel membership checks");
    check_super->add_option("--superchannel", superchannel, "Superchannel JSON or file")->required();
    auto *complete_opt = check_super->add_flag("--complete", complete, "Completely CSPO preserving");
    check_super->add_flag("--preserving", preserving, "CSPO preserving (qubit)")->excludes(complete_opt);

    std::string kind;
    double epsilon = NAN;
    std::uint64_t seed = 1;
    auto *monotone = app.add_subcommand("monotone", "Evaluate a magic monotone");
    monotone->add_option("kind", kind, "robustness|gen-robustness|dmin|dmin-eps|geometric")
        ->required()
        ->check(CLI::IsMember({"robustness", "gen-robustness", "dmin", "dmin-eps", "geometric"}));
    auto *mstate = monotone->add_option("--state", state, "State JSON, file or fixture name");
    monotone->add_option("--channel", channel, "Channel JSON, file or fixture name")->excludes(mstate);
    monotone->add_option("--epsilon", epsilon, "Smoothing for dmin-eps")->check(CLI::Range(0.0, 1.0));
    monotone->add_option("--seed", seed, "Seed for the channel D_min input search");

    bool emit_polytope = false;
    auto *convert = app.add_subcommand("convert", "Qubit state interconversion under CSPOs");
    convert->add_option("--from", from, "Source state")->required();
    convert->add_option("--to", to, "Target state")->required();
    convert->add_flag("--emit-polytope", emit_polytope, "Include the reachable polytope");

    auto *distance = app.add_subcommand("distance", "Trace distance to the reachable set");
    distance->add_option("--from", from, "Source state")->required();
    distance->add_option("--to", to, "Target state")->required();

    BoundArgs ba;
    std::string bkind;
    auto *bounds = app.add_subcommand("bounds", "Cost and distillation bounds");
    bounds->add_option("kind", bkind, "cost|distill|table1")->required()->check(CLI::IsMember({"cost", "distill", "table1"}));
    bounds->add_option("--state", ba.state, "Resource state");
    bounds->add_option("--channel", ba.channel, "Target channel");
    bounds->add_option("--lr", ba.lr, "LR of the channel (bits)");
    bounds->add_option("--dmin", ba.dmin, "D_min of the resource state (bits)");
    bounds->add_option("--dmin-channel", ba.dmin_channel, "D_min of the channel, or its certified lower bound");
    bounds->add_option("--dmin-eps", ba.dmin_eps, "Smoothed D_min of the normalized Choi state");
    bounds->add_option("--lr-state", ba.lr_state, "log2 R_HC of the resource state");
    bounds->add_option("--epsilon", ba.epsilon, "Smoothing for the distill lower bound")->check(CLI::Range(0.0, 1.0));
    bounds->add_flag("--skip-three-qubit", ba.skip_three, "table1: only rows up to two qubits");

    SimulationConfig cfg;
    std::string smode;
    auto *simulate = app.add_subcommand("simulate", "Quasiprobability Monte Carlo estimate");
    simulate->add_option("mode", smode, "static|constrained")->required()->check(CLI::IsMember({"static", "constrained"}));
    simulate->add_option("--circuit", circuit, "Circuit JSON or file")->required();
    simulate->add_option("--epsilon", cfg.epsilon, "Target accuracy (static)")->check(CLI::PositiveNumber);
    simulate->add_option("--p-fail", cfg.p_fail, "Failure probability");
    simulate->add_option("--c", cfg.c, "Accuracy constant (constrained)");
    simulate->add_option("--delta-star", cfg.delta_star, "Error budget (constrained)");
    simulate->add_option("--seed", cfg.seed, "RNG seed");
    simulate->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::Range(1, 256));
    simulate->add_flag("--approximate-lambda-star", cfg.approximate_lambda_star, "Use (delta*+1)^(1/n)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (check_super->parsed() && !complete && !preserving) {
            throw CLI::RequiredError("check-superchannel needs --complete or --preserving");
        }
        if (monotone->parsed() && state.empty() && channel.empty()) {
            throw CLI::RequiredError("monotone needs --state or --channel");
        }
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kOk;
        }
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (!g.cache_dir.empty()) {
            setenv("MAGICKIT_CACHE", g.cache_dir.c_str(), 1);
        }
        g.dir = fixture_dir(g.fixtures);
        Outcome r;
        if (enumerate->parsed()) {
            r = cmd_enumerate(g, n, emit_states, no_cache, err);
        } else if (check_stab->parsed()) {
            r = cmd_check_stab(g, state);
        } else if (check_cspo->parsed()) {
            r = cmd_check_cspo(g, channel);
        } else if (check_super->parsed()) {
            r = cmd_check_superchannel(g, superchannel, complete);
        } else if (monotone->parsed()) {
            r = cmd_monotone(g, kind, state, channel, std::isnan(epsilon) ? 0.01 : epsilon, seed);
        } else if (convert->parsed()) {
            r = cmd_convert(g, from, to, emit_polytope);
        } else if (distance->parsed()) {
            r = cmd_distance(g, from, to);
        } else if (bounds->parsed()) {
            r = cmd_bounds(g, bkind, ba, out);
        } else {
            r = cmd_simulate(g, smode, circuit, cfg, err);
        }
        if (r.code == -1) {
            return kOk;
        }
        if (g.text) {
            emit_text(r.payload, "", out);
        } else {
            out << r.payload.dump(2) << "\n";
        }
        out.flush();
        if (!out) {
            err << "error: cannot write output\n";
            return kNumerical;
        }
        return r.code;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return code_for(e.code());
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kNumerical;
    }
}

}  // namespace magickit::cli
