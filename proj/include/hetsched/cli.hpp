#pragma once

// Command-line front end. run_cli() takes the argument vector and output
// streams so the commands can be driven from tests; the hetsched tool is a
// thin wrapper around it.
//
// Exit codes: 0 ok, 1 parse or usage error, 2 infeasible or rejected system,
// 3 soundness alarm (bound exceeded or property violated).

#include "hetsched/audit.hpp"
#include "hetsched/bounds.hpp"
#include "hetsched/experiment.hpp"
#include "hetsched/io.hpp"
#include "hetsched/oracle.hpp"
#include "hetsched/simulator.hpp"
#include "hetsched/taskgen.hpp"
#include "hetsched/trace_io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace hetsched::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRejected = 2, kAlarm = 3 };

// Thrown from command bodies to leave with a given exit code and message.
struct Exit {
    int code;
    std::string message;
};

struct SystemOptions {
    std::string input;
    std::string policy = "gedf-h";
    std::string selector;
    std::string horizon;
    std::string arrivals = "periodic";
    std::uint64_t seed = 0;
    bool allow_infeasible = false;
    bool json = false;
};

inline TaskSystemFile load_system(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        throw Exit{kUsage, e.what()};
    }
    try {
        return parse_task_system(text);
    } catch (const ParseError& e) {
        throw Exit{kUsage, path + ": " + e.what()};
    }
}

inline PolicyConfig policy_from(const SystemOptions& o) {
    try {
        PolicyConfig p;
        p.policy = parse_policy(o.policy);
        if (!o.selector.empty()) p.selector = parse_selector(o.selector);
        if (p.policy == Policy::GedfPlain && !p.selector) p.selector = Selector::ArbitraryLowestId;
        p.validate();
        return p;
    } catch (const std::invalid_argument& e) {
        throw Exit{kUsage, e.what()};
    }
}

inline Rational horizon_from(const SystemOptions& o, const TaskSystem& tasks) {
    if (o.horizon.empty()) return default_horizon(tasks);
    Rational h;
    try {
        h = parse_rational(o.horizon);
    } catch (const std::invalid_argument& e) {
        throw Exit{kUsage, std::string("--horizon: ") + e.what()};
    }
    if (!(0 < h)) throw Exit{kUsage, "--horizon must be positive"};
    return h;
}

inline ArrivalSource arrivals_from(const SystemOptions& o) {
    if (o.arrivals == "periodic") return ArrivalSource::periodic();
    if (o.arrivals == "sporadic") return ArrivalSource::sporadic_random(o.seed);
    throw Exit{kUsage, "--arrivals must be periodic or sporadic"};
}

// Rejected systems may only run under gedf-plain with --allow-infeasible.
inline void gate(const FeasibilityReport& report, const PolicyConfig& policy, bool allow_infeasible) {
    if (report.accepted) return;
    if (policy.policy == Policy::GedfPlain && allow_infeasible) return;
    throw Exit{kRejected, "task system rejected: " + report.failures().front()};
}

inline json feasibility_json(const FeasibilityReport& r) {
    json checks = json::array();
    for (const auto& c : r.eq1_checks)
        checks.push_back({{"i", c.class_index}, {"phi", c.phi_count}, {"psi", c.psi_count}, {"ok", c.ok}});
    json speed = json::object();
    for (const auto& [id, ok] : r.per_task_speed_ok) speed[std::to_string(id)] = ok;
    return {{"accepted", r.accepted},
            {"u_sum", format_rational(r.u_sum)},
            {"r_sum", format_rational(r.r_sum)},
            {"capacity_ok", r.capacity_ok()},
            {"per_task_speed_ok", speed},
            {"class_checks", checks},
            {"failures", r.failures()}};
}

inline json bounds_json(const BoundReport& b) {
    json per_task = json::object();
    for (const auto& [id, v] : b.per_task_bound) per_task[std::to_string(id)] = format_rational(v);
    return {{"mode", to_string(b.mode)},
            {"u_bar", format_rational(b.u_bar)},
            {"e_term", format_rational(b.e_term)},
            {"x", format_rational(b.x)},
            {"p_min", format_rational(b.p_min)},
            {"r_sum", format_rational(b.r_sum)},
            {"per_task_bound", per_task}};
}

inline void print_feasibility(std::ostream& out, const FeasibilityReport& r) {
    out << (r.accepted ? "accepted" : "rejected") << "  U_sum=" << format_rational(r.u_sum)
        << "  R_sum=" << format_rational(r.r_sum) << '\n';
    for (const auto& c : r.eq1_checks)
        out << "  i=" << c.class_index << "  |Phi_i|=" << c.phi_count << "  |Psi_i|=" << c.psi_count
            << (c.ok ? "  ok" : "  VIOLATED") << '\n';
    for (const auto& f : r.failures()) out << "  " << f << '\n';
}

inline void print_bounds(std::ostream& out, const BoundReport& b, const TaskSystem& tasks) {
    out << to_string(b.mode) << ": U_bar=" << format_rational(b.u_bar) << "  E=" << format_rational(b.e_term)
        << "  x=" << format_rational(b.x) << '\n';
    for (const auto& t : tasks) {
        const Rational& v = b.per_task_bound.at(t.id());
        out << "  task " << t.id() << "  bound " << format_rational(v) << "  (" << format_decimal(v / t.period(), 3)
            << " periods)\n";
    }
}

inline int cmd_analyze(const SystemOptions& o, std::ostream& out) {
    TaskSystemFile sys = load_system(o.input);
    FeasibilityReport feas = validate_task_system(sys.tasks, sys.platform);
    std::optional<BoundReport> pre, np;
    if (feas.accepted) {
        pre = compute_bounds(sys.tasks, sys.platform, BoundMode::Preemptive);
        np = compute_bounds(sys.tasks, sys.platform, BoundMode::NonPreemptive);
    }
    if (o.json) {
        json j;
        j["feasibility"] = feasibility_json(feas);
        j["bounds"] = pre ? json{{"preemptive", bounds_json(*pre)}, {"nonpreemptive", bounds_json(*np)}} : json(nullptr);
        out << j.dump(2) << '\n';
    } else {
        print_feasibility(out, feas);
        if (pre) {
            print_bounds(out, *pre, sys.tasks);
            print_bounds(out, *np, sys.tasks);
        }
    }
    return feas.accepted ? kOk : kRejected;
}

inline int cmd_simulate(const SystemOptions& o, const std::string& trace_path, std::ostream& out) {
    TaskSystemFile sys = load_system(o.input);
    PolicyConfig policy = policy_from(o);
    Rational horizon = horizon_from(o, sys.tasks);
    ArrivalSource arrivals = arrivals_from(o);
    FeasibilityReport feas = validate_task_system(sys.tasks, sys.platform);
    gate(feas, policy, o.allow_infeasible);

    ScheduleTrace trace = simulate(sys.tasks, sys.platform, arrivals, policy, horizon);
    if (!trace_path.empty()) {
        std::ofstream f(trace_path, std::ios::binary);
        if (!f) throw Exit{kUsage, "cannot write " + trace_path};
        write_trace_jsonl(f, trace);
    }
    auto responses = response_times(trace);
    auto migrations = migration_count(trace);
    std::optional<BoundReport> bounds;
    std::vector<BoundViolation> violations;
    if (feas.accepted && policy.uses_gedf_h()) {
        bounds = compute_bounds(sys.tasks, sys.platform, bound_mode_for(policy));
        violations = bound_violations(trace, bounds->per_task_bound);
    }

    if (o.json) {
        json tasks = json::array();
        for (const auto& t : sys.tasks) {
            const TaskResponse& r = responses.at(t.id());
            json jobs = json::array();
            for (const auto& [k, v] : r.per_job) jobs.push_back({{"job", k}, {"response", format_rational(v)}});
            json row{{"id", t.id()},
                     {"max_response", format_rational(r.max)},
                     {"mean_response", format_rational(r.mean)},
                     {"completed", r.per_job.size()},
                     {"censored", r.censored},
                     {"migrations", migrations.at(t.id())},
                     {"responses", jobs}};
            if (bounds) row["bound"] = format_rational(bounds->per_task_bound.at(t.id()));
            tasks.push_back(row);
        }
        json j{{"policy", to_string(policy.policy)},
               {"selector", policy.selector ? json(to_string(*policy.selector)) : json(nullptr)},
               {"horizon", format_rational(horizon)},
               {"tasks", tasks}};
        if (bounds) {
            json v = json::array();
            for (const auto& b : violations) v.push_back(describe(b));
            j["bound_check"] = {{"mode", to_string(bounds->mode)}, {"x", format_rational(bounds->x)}, {"violations", v}};
        } else {
            j["bound_check"] = nullptr;
        }
        out << j.dump(2) << '\n';
    } else {
        out << "policy " << to_string(policy.policy);
        if (policy.selector) out << " (" << to_string(*policy.selector) << ')';
        out << "  horizon " << format_rational(horizon) << "  jobs " << trace.jobs.size() << '\n';
        for (const auto& t : sys.tasks) {
            const TaskResponse& r = responses.at(t.id());
            out << "  task " << t.id() << "  max " << format_rational(r.max) << "  mean " << format_rational(r.mean)
                << "  completed " << r.per_job.size() << "  censored " << r.censored << "  migrations "
                << migrations.at(t.id());
            if (bounds) out << "  bound " << format_rational(bounds->per_task_bound.at(t.id()));
            out << '\n';
        }
        if (bounds)
            out << "bound check (" << to_string(bounds->mode) << "): "
                << (violations.empty() ? "ok" : std::to_string(violations.size()) + " violation(s)") << '\n';
        for (const auto& b : violations) out << "  " << describe(b) << '\n';
    }
    return violations.empty() ? kOk : kAlarm;
}

inline json verdict_json(const PropertyVerdict& v) {
    json samples = json::array();
    for (const auto& s : v.samples) samples.push_back({{"t", format_rational(s.time)}, {"detail", s.detail}});
    return {{"checked", v.checked}, {"violations", v.violations}, {"samples", samples}};
}

inline int cmd_verify(const SystemOptions& o, const std::string& replay, std::size_t budget, std::ostream& out) {
    ScheduleTrace trace;
    if (!replay.empty()) {
        std::ifstream f(replay, std::ios::binary);
        if (!f) throw Exit{kUsage, "cannot read " + replay};
        try {
            trace = read_trace_jsonl(f);
        } catch (const ParseError& e) {
            throw Exit{kUsage, replay + ": " + e.what()};
        }
    } else {
        if (o.input.empty()) throw Exit{kUsage, "verify needs a task-system file or --replay"};
        TaskSystemFile sys = load_system(o.input);
        PolicyConfig policy = policy_from(o);
        Rational horizon = horizon_from(o, sys.tasks);
        ArrivalSource arrivals = arrivals_from(o);
        gate(validate_task_system(sys.tasks, sys.platform), policy, o.allow_infeasible);
        trace = simulate(sys.tasks, sys.platform, arrivals, policy, horizon);
    }
    VerifyResult result = verify_trace(trace, budget);
    const PropertyReport& r = result.report;
    if (o.json) {
        json pivots = json::array();
        for (const auto& p : result.pivots) pivots.push_back(to_string(p));
        json j{{"pivots", pivots},
               {"P0", verdict_json(r.p0)},
               {"P1", verdict_json(r.p1)},
               {"P2", verdict_json(r.p2)},
               {"ok", r.ok()}};
        out << j.dump(2) << '\n';
    } else {
        out << "pivots " << result.pivots.size() << '\n';
        auto line = [&](const char* name, const PropertyVerdict& v) {
            out << name << ' ' << (v.ok() ? "pass" : "FAIL") << "  checked " << v.checked << "  violations "
                << v.violations << '\n';
            for (const auto& s : v.samples) out << "  t=" << format_rational(s.time) << "  " << s.detail << '\n';
        };
        line("P0", r.p0);
        line("P1", r.p1);
        line("P2", r.p2);
    }
    return r.ok() ? kOk : kAlarm;
}

struct ExperimentOptions {
    std::string spec_file;
    std::string scenario = "period-sweep";
    std::string period = "100";
    std::string util_class = "medium";
    std::vector<std::string> points;
    std::size_t sets = 1000;
    std::uint64_t seed = 0;
    bool simulate = false;
    std::string csv;
};

inline ExperimentSpec experiment_spec_from(const ExperimentOptions& o) {
    ExperimentSpec spec;
    std::vector<std::string> points = o.points;
    try {
        if (!o.spec_file.empty()) {
            json doc;
            try {
                doc = parse_json_text(read_file(o.spec_file));
            } catch (const ParseError& e) {
                throw Exit{kUsage, o.spec_file + ": " + e.what()};
            }
            if (!doc.is_object()) throw Exit{kUsage, o.spec_file + ": experiment spec must be a JSON object"};
            spec.scenario = parse_scenario(doc.value("scenario", std::string("period-sweep")));
            if (doc.contains("fixed_period")) spec.fixed_period = rational_from_json(doc["fixed_period"], "fixed_period");
            if (doc.contains("util_class")) spec.util_class = parse_util_class(doc["util_class"].get<std::string>());
            if (doc.contains("sets_per_point")) spec.sets_per_point = doc["sets_per_point"].get<std::size_t>();
            if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
            if (doc.contains("simulate")) spec.simulate = doc["simulate"].get<bool>();
            if (doc.contains("horizon_multiplier"))
                spec.horizon_multiplier = rational_from_json(doc["horizon_multiplier"], "horizon_multiplier");
            if (doc.contains("points"))
                for (const auto& p : doc["points"]) spec.points.push_back(rational_from_json(p, "points"));
        } else {
            spec.scenario = parse_scenario(o.scenario);
            spec.fixed_period = parse_rational(o.period);
            spec.util_class = parse_util_class(o.util_class);
            spec.sets_per_point = o.sets;
            spec.seed = o.seed;
            spec.simulate = o.simulate;
        }
        for (const auto& p : points) spec.points.push_back(parse_rational(p));
        if (spec.points.empty()) spec.points = ExperimentSpec::default_points(spec.scenario);
        spec.validate();
    } catch (const Exit&) {
        throw;
    } catch (const std::exception& e) {
        throw Exit{kUsage, std::string("experiment spec: ") + e.what()};
    }
    return spec;
}

inline int cmd_experiment(const ExperimentOptions& o, std::ostream& out) {
    ExperimentSpec spec = experiment_spec_from(o);
    auto rows = run_experiment(spec);
    std::string csv = experiment_csv(rows, spec.simulate);
    if (o.csv.empty()) {
        out << csv;
    } else {
        std::ofstream f(o.csv, std::ios::binary);
        if (!f) throw Exit{kUsage, "cannot write " + o.csv};
        f << csv;
    }
    for (const auto& r : rows)
        if (r.violations.value_or(0) > 0) return kAlarm;
    return kOk;
}

struct GenerateOptions {
    std::string util_class = "medium";
    std::string period;  // fixed period; empty for uniform
    std::string target;
    std::size_t max_phi1 = 2;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    std::string out;
};

inline int cmd_generate(const GenerateOptions& o, std::ostream& out) {
    GenConfig config;
    try {
        config.util_class = parse_util_class(o.util_class);
        if (!o.period.empty()) config.fixed_period = parse_rational(o.period);
        if (!o.target.empty()) config.target_usum = parse_rational(o.target);
        config.max_phi1_count = o.max_phi1;
        config.seed = o.seed;
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw Exit{kUsage, e.what()};
    }
    std::ostringstream buf;
    if (o.count == 1) {
        json doc = task_system_to_json(generate(config, 0), config.platform);
        doc["generator"] = gen_config_to_json(config);
        buf << doc.dump(2) << '\n';
    } else {
        buf << json{{"header", gen_config_to_json(config)}}.dump() << '\n';
        for (std::size_t k = 0; k < o.count; ++k) {
            json doc = task_system_to_json(generate(config, k), config.platform);
            doc["stream"] = k;
            buf << doc.dump() << '\n';
        }
    }
    if (o.out.empty()) {
        out << buf.str();
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw Exit{kUsage, "cannot write " + o.out};
        f << buf.str();
    }
    return kOk;
}

inline void add_system_options(CLI::App* cmd, SystemOptions& o, bool input_required) {
    auto* in = cmd->add_option("input", o.input, "task-system JSON file");
    if (input_required) in->required();
    cmd->add_option("--policy", o.policy, "gedf-h, np-gedf-h or gedf-plain");
    cmd->add_option("--selector", o.selector,
                    "gedf-plain processor selector: arbitrary-lowest-id, fastest-first, adversarial-slow-for-heavy");
    cmd->add_option("--horizon", o.horizon, "simulation horizon (rational; default 50 x max period)");
    cmd->add_option("--arrivals", o.arrivals, "periodic or sporadic");
    cmd->add_option("--seed", o.seed, "seed for sporadic arrivals");
    cmd->add_flag("--allow-infeasible", o.allow_infeasible, "run a rejected system under gedf-plain");
    cmd->add_flag("--json", o.json, "machine-readable output");
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"GEDF-H simulator and response-time analyzer for heterogeneous multiprocessors", "hetsched"};
    app.require_subcommand(1);

    SystemOptions analyze_opts;
    auto* analyze = app.add_subcommand("analyze", "feasibility check and response-time bounds");
    analyze->add_option("input", analyze_opts.input, "task-system JSON file")->required();
    analyze->add_flag("--json", analyze_opts.json, "machine-readable output");

    SystemOptions sim_opts;
    std::string trace_path;
    auto* sim = app.add_subcommand("simulate", "simulate a task system and check observed responses against the bound");
    add_system_options(sim, sim_opts, true);
    sim->add_option("--trace", trace_path, "write the schedule as JSON lines");

    SystemOptions verify_opts;
    std::string replay;
    std::size_t budget = kDefaultPivotBudget;
    auto* verify = app.add_subcommand("verify", "check assignment legality and the LAG properties on a schedule");
    add_system_options(verify, verify_opts, false);
    verify->add_option("--replay", replay, "verify a recorded JSON-lines trace instead of simulating");
    verify->add_option("--pivot-budget", budget, "number of pivot jobs for the LAG checks");

    ExperimentOptions exp_opts;
    auto* exp = app.add_subcommand("experiment", "bound statistics over random task sets (CSV)");
    exp->add_option("--spec", exp_opts.spec_file, "experiment spec JSON file");
    exp->add_option("--scenario", exp_opts.scenario, "period-sweep or util-sweep");
    exp->add_option("--period", exp_opts.period, "fixed period for util-sweep");
    exp->add_option("--util-class", exp_opts.util_class, "light, medium or heavy for period-sweep");
    exp->add_option("--points", exp_opts.points, "sweep points (rationals)")->delimiter(',');
    exp->add_option("--sets", exp_opts.sets, "task sets per point");
    exp->add_option("--seed", exp_opts.seed, "experiment seed");
    exp->add_flag("--simulate", exp_opts.simulate, "also simulate each set under GEDF-H");
    exp->add_option("--csv", exp_opts.csv, "write the CSV here instead of stdout");

    GenerateOptions gen_opts;
    auto* gen = app.add_subcommand("generate", "random task systems for the QuickIA platform");
    gen->add_option("--util-class", gen_opts.util_class, "light, medium or heavy");
    gen->add_option("--period", gen_opts.period, "fixed period for every task (default uniform in [10, 600])");
    gen->add_option("--target", gen_opts.target, "total utilization (default R_sum)");
    gen->add_option("--max-phi1", gen_opts.max_phi1, "largest number of tasks with utilization in (1, 2]");
    gen->add_option("--count", gen_opts.count, "number of systems; more than one gives a JSON-lines batch")
        ->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_opts.seed, "generator seed");
    gen->add_option("--out", gen_opts.out, "write here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*analyze) return cmd_analyze(analyze_opts, out);
        if (*sim) return cmd_simulate(sim_opts, trace_path, out);
        if (*verify) return cmd_verify(verify_opts, replay, budget, out);
        if (*exp) return cmd_experiment(exp_opts, out);
        if (*gen) return cmd_generate(gen_opts, out);
    } catch (const Exit& e) {
        err << "hetsched: " << e.message << '\n';
        return e.code;
    } catch (const std::invalid_argument& e) {
        err << "hetsched: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace hetsched::cli
