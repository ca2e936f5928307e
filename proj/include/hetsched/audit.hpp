#pragma once

// Whole-trace checks: property verification over a pivot sweep, and the
// empirical bound audit that compares observed response times with the
// analytical bound of the matching mode.

#include "hetsched/bounds.hpp"
#include "hetsched/oracle.hpp"
#include "hetsched/simulator.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hetsched {

inline constexpr std::size_t kDefaultPivotBudget = 20;
inline constexpr long kDefaultHorizonMultiplier = 50;

/// Fifty times the largest period; a system without tasks gets horizon 1.
inline Rational default_horizon(const TaskSystem& tasks, long multiplier = kDefaultHorizonMultiplier) {
    if (tasks.empty()) return 1;
    return Rational(multiplier) * tasks.max_period();
}

inline BoundMode bound_mode_for(const PolicyConfig& policy) {
    return policy.preemptive() ? BoundMode::Preemptive : BoundMode::NonPreemptive;
}

struct VerifyResult {
    std::vector<JobRef> pivots;
    PropertyReport report;
};

/// P0 over the whole trace plus P1 and P2 for each selected pivot.
inline VerifyResult verify_trace(const ScheduleTrace& trace, std::size_t pivot_budget = kDefaultPivotBudget) {
    VerifyResult out;
    out.report.p0 = check_assignment_legality(trace);
    out.pivots = select_pivots(trace, pivot_budget);
    if (out.pivots.empty()) return out;
    detail::TraceTimeline timeline(trace);
    for (const auto& pivot : out.pivots) {
        JobSetD d(trace, pivot);
        PropertyReport r = check_lag_properties(trace, d, timeline);
        out.report.p1.merge(r.p1);
        out.report.p2.merge(r.p2);
    }
    return out;
}

inline std::string describe(const BoundViolation& v) {
    std::string s = to_string(v.job) + " released at " + format_rational(v.release);
    if (v.completion)
        s += ", completed at " + format_rational(*v.completion) + ", response " + format_rational(v.response);
    else
        s += ", still running at the horizon after " + format_rational(v.response);
    return s + " > bound " + format_rational(v.bound);
}

struct SoundnessAudit {
    BoundReport bounds;
    ScheduleTrace trace;
    std::vector<BoundViolation> violations;
    std::optional<VerifyResult> properties;

    bool ok() const { return violations.empty() && (!properties || properties->report.ok()); }
};

/// Simulates an accepted system, computes the bound for the policy's mode and
/// lists every job that exceeds it. Property checks run when pivot_budget is
/// set.
inline SoundnessAudit audit_soundness(const TaskSystem& tasks, const Platform& platform, const PolicyConfig& policy,
                                      const Rational& horizon, const ArrivalSource& arrivals = ArrivalSource::periodic(),
                                      std::optional<std::size_t> pivot_budget = std::nullopt) {
    SoundnessAudit audit;
    audit.bounds = compute_bounds(tasks, platform, bound_mode_for(policy));
    audit.trace = simulate(tasks, platform, arrivals, policy, horizon);
    audit.violations = bound_violations(audit.trace, audit.bounds.per_task_bound);
    if (pivot_budget) audit.properties = verify_trace(audit.trace, *pivot_budget);
    return audit;
}

}  // namespace hetsched
