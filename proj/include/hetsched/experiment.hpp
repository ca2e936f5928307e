#pragma once

// Response-time bound experiments over random task systems on the QuickIA
// platform. Two sweeps are supported:
//   period-sweep  every task shares the period given by the point, with
//                 utilizations from one class (light, medium or heavy);
//   util-sweep    every task has one fixed period (100, 300 or 600 ms) and
//                 the point is the mean utilization of the non-heavy tasks,
//                 drawn uniformly from [0.001, 2 * point - 0.001].
// Each point aggregates max/avg/min over all tasks of all sets of the
// per-task bound x + 2 p_i and of its ratio to p_i.

#include "hetsched/audit.hpp"
#include "hetsched/bounds.hpp"
#include "hetsched/random.hpp"
#include "hetsched/taskgen.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hetsched {

enum class Scenario { UtilSweep, PeriodSweep };

inline const char* to_string(Scenario s) { return s == Scenario::UtilSweep ? "util-sweep" : "period-sweep"; }

inline Scenario parse_scenario(const std::string& s) {
    if (s == "util-sweep") return Scenario::UtilSweep;
    if (s == "period-sweep") return Scenario::PeriodSweep;
    throw std::invalid_argument("unknown scenario '" + s + "' (expected util-sweep or period-sweep)");
}

struct ExperimentSpec {
    Scenario scenario = Scenario::PeriodSweep;
    Rational fixed_period = 100;                 // util-sweep only
    UtilClass util_class = UtilClass::Medium;    // period-sweep only
    std::size_t sets_per_point = 1000;
    std::vector<Rational> points;
    std::uint64_t seed = 0;
    bool simulate = false;
    Rational horizon_multiplier = kDefaultHorizonMultiplier;

    static std::vector<Rational> default_points(Scenario s) {
        if (s == Scenario::PeriodSweep) return {10, 100, 200, 300, 400, 500, 600};
        return {make_rational(1, 20), make_rational(1, 10), make_rational(1, 5),
                make_rational(3, 10), make_rational(2, 5),  make_rational(1, 2)};
    }

    void validate() const {
        if (sets_per_point == 0) throw std::invalid_argument("sets_per_point must be at least 1");
        if (points.empty()) throw std::invalid_argument("points must be non-empty");
        if (horizon_multiplier <= 0) throw std::invalid_argument("horizon multiplier must be positive");
        if (scenario == Scenario::UtilSweep && fixed_period <= 0)
            throw std::invalid_argument("fixed period must be positive");
        for (const auto& p : points) {
            if (scenario == Scenario::PeriodSweep && p <= 0)
                throw std::invalid_argument("period point must be positive: " + format_rational(p));
            if (scenario == Scenario::UtilSweep && (p <= make_rational(1, 1000) || make_rational(1, 2) < p))
                throw std::invalid_argument("mean utilization point must lie in (0.001, 0.5]: " + format_rational(p));
        }
    }

    /// Generator settings for sweep point `index`.
    GenConfig config_for(std::size_t index) const {
        GenConfig c;
        c.seed = derive_stream_seed(seed, index);
        const Rational& point = points.at(index);
        if (scenario == Scenario::PeriodSweep) {
            c.fixed_period = point;
            c.util_class = util_class;
        } else {
            c.fixed_period = fixed_period;
            c.util_range_override = RationalRange{make_rational(1, 1000), 2 * point - make_rational(1, 1000)};
        }
        return c;
    }
};

struct ExperimentRow {
    Scenario scenario;
    Rational point;
    std::size_t n_sets = 0;
    Rational bound_max, bound_avg, bound_min;
    Rational ratio_max, ratio_avg, ratio_min;
    std::optional<Rational> obs_max;       // with simulation only
    std::optional<std::size_t> violations;
};

namespace detail {

struct SetSummary {
    std::size_t tasks = 0;
    Rational bound_max, bound_min, bound_sum;
    Rational ratio_max, ratio_min, ratio_sum;
    Rational obs_max = 0;
    std::size_t violations = 0;
};

inline SetSummary summarize_set(const TaskSystem& tasks, const Platform& platform, const ExperimentSpec& spec) {
    SetSummary s;
    BoundReport bounds = compute_bounds(tasks, platform, BoundMode::Preemptive);
    for (const auto& t : tasks) {
        const Rational& b = bounds.per_task_bound.at(t.id());
        Rational ratio = b / t.period();
        if (s.tasks == 0) {
            s.bound_max = s.bound_min = b;
            s.ratio_max = s.ratio_min = ratio;
        } else {
            if (s.bound_max < b) s.bound_max = b;
            if (b < s.bound_min) s.bound_min = b;
            if (s.ratio_max < ratio) s.ratio_max = ratio;
            if (ratio < s.ratio_min) s.ratio_min = ratio;
        }
        s.bound_sum += b;
        s.ratio_sum += ratio;
        ++s.tasks;
    }
    if (spec.simulate && !tasks.empty()) {
        Rational horizon = spec.horizon_multiplier * tasks.max_period();
        ScheduleTrace trace = simulate(tasks, platform, ArrivalSource::periodic(), PolicyConfig::gedf_h(), horizon);
        for (const Job& job : trace.jobs)
            if (job.completion && s.obs_max < *job.completion - job.release) s.obs_max = *job.completion - job.release;
        s.violations = bound_violations(trace, bounds.per_task_bound).size();
    }
    return s;
}

}  // namespace detail

/// Worker count from HETSCHED_THREADS, else the hardware concurrency.
inline std::size_t experiment_threads() {
    if (const char* env = std::getenv("HETSCHED_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates every point of the spec. Sets are generated from independent
/// streams and reduced in set order, so the result does not depend on the
/// thread count.
inline std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec, std::size_t threads = experiment_threads()) {
    spec.validate();
    threads = std::max<std::size_t>(threads, 1);
    std::vector<ExperimentRow> rows;
    for (std::size_t pi = 0; pi < spec.points.size(); ++pi) {
        GenConfig config = spec.config_for(pi);
        std::vector<detail::SetSummary> sets(spec.sets_per_point);
        auto work = [&](std::size_t first) {
            for (std::size_t k = first; k < sets.size(); k += threads)
                sets[k] = detail::summarize_set(generate(config, k), config.platform, spec);
        };
        std::size_t n_workers = std::min(threads, sets.size());
        if (n_workers <= 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(n_workers);
            for (std::size_t w = 0; w < n_workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        work(w);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            for (auto& t : pool) t.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }

        ExperimentRow row{spec.scenario, spec.points[pi]};
        row.n_sets = sets.size();
        Rational bound_sum = 0, ratio_sum = 0, obs_max = 0;
        std::size_t task_count = 0, violations = 0;
        bool first = true;
        for (const auto& s : sets) {
            if (s.tasks == 0) continue;
            if (first) {
                row.bound_max = s.bound_max;
                row.bound_min = s.bound_min;
                row.ratio_max = s.ratio_max;
                row.ratio_min = s.ratio_min;
                first = false;
            } else {
                row.bound_max = rmax(row.bound_max, s.bound_max);
                row.bound_min = rmin(row.bound_min, s.bound_min);
                row.ratio_max = rmax(row.ratio_max, s.ratio_max);
                row.ratio_min = rmin(row.ratio_min, s.ratio_min);
            }
            bound_sum += s.bound_sum;
            ratio_sum += s.ratio_sum;
            task_count += s.tasks;
            obs_max = rmax(obs_max, s.obs_max);
            violations += s.violations;
        }
        if (task_count > 0) {
            row.bound_avg = bound_sum / Rational(task_count);
            row.ratio_avg = ratio_sum / Rational(task_count);
        }
        if (spec.simulate) {
            row.obs_max = obs_max;
            row.violations = violations;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string format_decimal(const Rational& r, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, to_double(r));
    return buf;
}

inline void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, bool with_simulation) {
    out << "scenario,point,n_sets,bound_max_ms,bound_avg_ms,bound_min_ms,ratio_max,ratio_avg,ratio_min";
    if (with_simulation) out << ",obs_max_ms,violations";
    out << '\n';
    for (const auto& r : rows) {
        out << to_string(r.scenario) << ',' << format_rational(r.point) << ',' << r.n_sets << ','
            << format_decimal(r.bound_max) << ',' << format_decimal(r.bound_avg) << ',' << format_decimal(r.bound_min)
            << ',' << format_decimal(r.ratio_max) << ',' << format_decimal(r.ratio_avg) << ','
            << format_decimal(r.ratio_min);
        if (with_simulation)
            out << ',' << format_decimal(r.obs_max.value_or(0)) << ',' << r.violations.value_or(0);
        out << '\n';
    }
}

inline std::string experiment_csv(const std::vector<ExperimentRow>& rows, bool with_simulation) {
    std::ostringstream ss;
    write_experiment_csv(ss, rows, with_simulation);
    return ss.str();
}

}  // namespace hetsched
