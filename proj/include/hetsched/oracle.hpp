#pragma once

// Processor-share (PS) reference schedule and lag bookkeeping against a
// simulated trace. Everything here is a pure query over an immutable
// ScheduleTrace; lag and LAG are evaluated at trace boundaries, where both
// schedules' cumulative allocations are exact.

#include "hetsched/simulator.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetsched {

struct Interval {
    Rational start;
    Rational end;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Jobs with priority at least that of the pivot: earlier deadline, or the
/// same deadline and a task id no larger than the pivot's. Only jobs present
/// in the trace are considered.
class JobSetD {
public:
    JobSetD(const ScheduleTrace& trace, const JobRef& pivot) : pivot_(pivot) {
        auto j = trace.find(pivot);
        if (!j) throw std::invalid_argument("pivot job " + to_string(pivot) + " is not in the trace");
        t_d_ = trace.jobs[*j].deadline;
        member_.assign(trace.jobs.size(), false);
        prefix_.assign(trace.tasks.size(), 0);
        for (std::size_t ti = 0; ti < trace.tasks.size(); ++ti) {
            for (JobIndex k : trace.jobs_of_task[ti]) {
                if (!contains(trace.jobs[k])) break;
                member_[k] = true;
                members_.push_back(k);
                ++prefix_[ti];
            }
        }
    }

    const JobRef& pivot() const { return pivot_; }
    const Rational& t_d() const { return t_d_; }

    bool contains(const Job& job) const {
        return job.deadline < t_d_ || (job.deadline == t_d_ && job.ref.task <= pivot_.task);
    }
    bool contains(JobIndex j) const { return j != kIdle && j < member_.size() && member_[j]; }

    const std::vector<JobIndex>& members() const { return members_; }
    /// Number of leading jobs of each task (trace task order) that are in d.
    const std::vector<std::size_t>& prefix_counts() const { return prefix_; }

private:
    JobRef pivot_;
    Rational t_d_;
    std::vector<bool> member_;
    std::vector<JobIndex> members_;
    std::vector<std::size_t> prefix_;
};

/// PS allocation of one task over [t1, t2): utilization times the measure
/// of the time the task is active (some job released and not yet at its
/// deadline).
inline Rational ps_allocation(const SporadicTask& task, const Rational& t1, const Rational& t2,
                              std::span<const Rational> releases) {
    if (t2 < t1) throw std::invalid_argument("ps_allocation: t1 > t2");
    Rational active = 0;
    Rational covered_until = t1;
    for (const auto& r : releases) {
        Rational lo = rmax(r, covered_until);
        Rational hi = rmin(r + task.period(), t2);
        if (lo < hi) {
            active += hi - lo;
            covered_until = hi;
        }
    }
    return task.utilization() * active;
}

/// PS allocation of a single job up to time t.
inline Rational ps_job_allocation(const SporadicTask& task, const Job& job, const Rational& t) {
    return task.utilization() * clamp(t - job.release, 0, task.period());
}

/// Per-job execution record of a trace with cumulative sums for O(log n)
/// allocation queries.
class AllocationIndex {
public:
    explicit AllocationIndex(const ScheduleTrace& trace) : pieces_(trace.jobs.size()) {
        for (const auto& seg : trace.segments) {
            for (ProcessorIndex p = 0; p < seg.assignment.size(); ++p) {
                JobIndex j = seg.assignment[p];
                if (j == kIdle) continue;
                auto& list = pieces_[j];
                const Rational& speed = trace.platform.speed(p);
                if (!list.empty() && list.back().end == seg.start && list.back().speed == speed) {
                    Rational extra = speed * (seg.end - seg.start);
                    list.back().end = seg.end;
                    list.back().cumulative += extra;
                } else {
                    Rational before = list.empty() ? Rational(0) : list.back().cumulative;
                    list.push_back({seg.start, seg.end, speed, before + speed * (seg.end - seg.start)});
                }
            }
        }
    }

    /// Work done by job j in [0, t).
    Rational allocated(JobIndex j, const Rational& t) const {
        const auto& list = pieces_.at(j);
        auto it = std::upper_bound(list.begin(), list.end(), t,
                                   [](const Rational& v, const Piece& p) { return v < p.end; });
        // Pieces before `it` end at or before t.
        Rational total = it == list.begin() ? Rational(0) : std::prev(it)->cumulative;
        if (it != list.end() && it->start < t) total += it->speed * (t - it->start);
        return total;
    }

    Rational total(JobIndex j) const {
        const auto& list = pieces_.at(j);
        return list.empty() ? Rational(0) : list.back().cumulative;
    }

private:
    struct Piece {
        Rational start;
        Rational end;
        Rational speed;
        Rational cumulative;  // through `end`
    };
    std::vector<std::vector<Piece>> pieces_;
};

/// Lag of one job: PS allocation minus actual allocation up to t.
inline Rational job_lag(const ScheduleTrace& trace, const AllocationIndex& index, JobIndex j, const Rational& t) {
    return ps_job_allocation(trace.task_of(j), trace.jobs[j], t) - index.allocated(j, t);
}

/// Lag of a task summed over its jobs in d.
inline Rational lag(const SporadicTask& task, const Rational& t, const ScheduleTrace& trace, const JobSetD& d,
                    const AllocationIndex& index) {
    if (trace.horizon < t) throw std::invalid_argument("lag: t beyond the trace horizon");
    auto ti = trace.tasks.index_of(task.id());
    if (!ti) throw std::invalid_argument("lag: task not in trace");
    Rational sum = 0;
    const auto& jobs = trace.jobs_of_task[*ti];
    for (std::size_t k = 0; k < d.prefix_counts()[*ti]; ++k) sum += job_lag(trace, index, jobs[k], t);
    return sum;
}

inline Rational lag(const SporadicTask& task, const Rational& t, const ScheduleTrace& trace, const JobSetD& d) {
    return lag(task, t, trace, d, AllocationIndex(trace));
}

/// LAG of the job set d at t.
inline Rational big_lag(const JobSetD& d, const Rational& t, const ScheduleTrace& trace, const AllocationIndex& index) {
    Rational sum = 0;
    for (std::size_t ti = 0; ti < trace.tasks.size(); ++ti)
        if (d.prefix_counts()[ti] > 0) sum += lag(trace.tasks[ti], t, trace, d, index);
    return sum;
}

inline Rational big_lag(const JobSetD& d, const Rational& t, const ScheduleTrace& trace) {
    return big_lag(d, t, trace, AllocationIndex(trace));
}

namespace detail {

inline bool segment_busy(const Segment& seg, const JobSetD& d) {
    for (JobIndex j : seg.assignment)
        if (!d.contains(j)) return false;
    return true;
}

inline void push_interval(std::vector<Interval>& out, const Rational& a, const Rational& b) {
    if (!(a < b)) return;
    if (!out.empty() && out.back().end == a)
        out.back().end = b;
    else
        out.push_back({a, b});
}

inline Rational analysis_limit(const ScheduleTrace& trace, const JobSetD& d) { return rmin(d.t_d(), trace.horizon); }

// Release, deadline and completion instants of every job in a trace, sorted
// once so that per-pivot sweeps only filter by membership in d.
class TraceTimeline {
public:
    enum class Kind { Release, Deadline, Completion };
    struct Entry {
        const Rational* time;
        JobIndex job;
        std::size_t task;  // position in the trace's task system
        Kind kind;
    };

    explicit TraceTimeline(const ScheduleTrace& trace) {
        entries_.reserve(trace.jobs.size() * 3);
        for (JobIndex j = 0; j < trace.jobs.size(); ++j) {
            const Job& job = trace.jobs[j];
            std::size_t ti = *trace.tasks.index_of(job.ref.task);
            entries_.push_back({&job.release, j, ti, Kind::Release});
            entries_.push_back({&job.deadline, j, ti, Kind::Deadline});
            if (job.completion) entries_.push_back({&*job.completion, j, ti, Kind::Completion});
        }
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const Entry& a, const Entry& b) { return *a.time < *b.time; });
    }

    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
};

// Counts tasks with a pending job of d (released at or before t, completed
// strictly after t) while boundaries are visited in increasing order.
class PendingSweep {
public:
    PendingSweep(const ScheduleTrace& trace, const JobSetD& d, const TraceTimeline& timeline)
        : trace_(&trace), d_(&d), timeline_(&timeline), balance_(trace.tasks.size(), 0) {}

    std::size_t pending_tasks_at(const Rational& t) {
        const auto& entries = timeline_->entries();
        while (next_ < entries.size() && *entries[next_].time <= t) {
            const auto& e = entries[next_++];
            if (e.kind == TraceTimeline::Kind::Deadline || !d_->contains(e.job)) continue;
            std::size_t task = e.task;
            long before = balance_[task];
            balance_[task] += e.kind == TraceTimeline::Kind::Release ? 1 : -1;
            if (before == 0 && balance_[task] > 0) ++positive_;
            if (before > 0 && balance_[task] == 0) --positive_;
        }
        return positive_;
    }

private:
    const ScheduleTrace* trace_;
    const JobSetD* d_;
    const TraceTimeline* timeline_;
    std::vector<long> balance_;
    std::size_t next_ = 0;
    std::size_t positive_ = 0;
};

// Cumulative PS allocation to the jobs of d, evaluated at increasing times.
class PsSweep {
public:
    PsSweep(const ScheduleTrace& trace, const JobSetD& d, const TraceTimeline& timeline)
        : trace_(&trace), d_(&d), timeline_(&timeline) {}

    const Rational& at(const Rational& t) {
        const auto& entries = timeline_->entries();
        while (next_ < entries.size() && *entries[next_].time <= t) {
            const auto& e = entries[next_++];
            if (e.kind == TraceTimeline::Kind::Completion || !d_->contains(e.job)) continue;
            advance_to(*e.time);
            const Rational& u = trace_->tasks[e.task].utilization();
            if (e.kind == TraceTimeline::Kind::Release)
                rate_ += u;
            else
                rate_ -= u;
        }
        advance_to(t);
        return value_;
    }

private:
    void advance_to(const Rational& t) {
        if (rate_ != 0) {
            step_ = t - last_;
            step_ *= rate_;
            value_ += step_;
        }
        last_ = t;
    }

    const ScheduleTrace* trace_;
    const JobSetD* d_;
    const TraceTimeline* timeline_;
    std::size_t next_ = 0;
    Rational rate_ = 0;
    Rational value_ = 0;
    Rational last_ = 0;
    Rational step_;
};

}  // namespace detail

/// Maximal intervals in which every processor executes a job of d.
inline std::vector<Interval> busy_intervals(const ScheduleTrace& trace, const JobSetD& d) {
    std::vector<Interval> out;
    for (const auto& seg : trace.segments)
        if (detail::segment_busy(seg, d)) detail::push_interval(out, seg.start, seg.end);
    return out;
}

/// Complement of the busy set within [0, min(t_d, horizon)). Boundary
/// instants take the classification of the segment to their right.
inline std::vector<Interval> non_busy_intervals(const ScheduleTrace& trace, const JobSetD& d) {
    std::vector<Interval> out;
    const Rational limit = detail::analysis_limit(trace, d);
    for (const auto& seg : trace.segments) {
        if (!(seg.start < limit)) break;
        if (!detail::segment_busy(seg, d)) detail::push_interval(out, seg.start, rmin(seg.end, limit));
    }
    return out;
}

struct PropertyViolation {
    Rational time;
    std::string detail;
};

struct PropertyVerdict {
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::vector<PropertyViolation> samples;

    bool ok() const { return violations == 0; }

    void add(Rational t, std::string what) {
        ++violations;
        if (samples.size() < kMaxSamples) samples.push_back({std::move(t), std::move(what)});
    }

    void merge(const PropertyVerdict& other) {
        checked += other.checked;
        violations += other.violations;
        for (const auto& s : other.samples)
            if (samples.size() < kMaxSamples) samples.push_back(s);
    }

    static constexpr std::size_t kMaxSamples = 32;
};

struct PropertyReport {
    PropertyVerdict p0;  // assignment legality
    PropertyVerdict p1;  // LAG grows only across non-busy time
    PropertyVerdict p2;  // at most m-1 tasks pending at non-busy instants

    bool ok() const { return p0.ok() && p1.ok() && p2.ok(); }

    void merge(const PropertyReport& o) {
        p0.merge(o.p0);
        p1.merge(o.p1);
        p2.merge(o.p2);
    }
};

/// P0 holds in a segment when every executing job's utilization is at most
/// the speed of its processor.
inline PropertyVerdict check_assignment_legality(const ScheduleTrace& trace) {
    PropertyVerdict v;
    for (const auto& seg : trace.segments) {
        for (ProcessorIndex p = 0; p < seg.assignment.size(); ++p) {
            JobIndex j = seg.assignment[p];
            if (j == kIdle) continue;
            ++v.checked;
            const Rational& u = trace.task_of(j).utilization();
            if (trace.platform.speed(p) < u)
                v.add(seg.start, to_string(trace.jobs[j].ref) + " (u=" + format_rational(u) + ") on M" +
                                     std::to_string(p + 1) + " (speed " + format_rational(trace.platform.speed(p)) +
                                     ") during [" + format_rational(seg.start) + ", " + format_rational(seg.end) +
                                     ")");
        }
    }
    return v;
}

/// P1 and P2 for job set d at every trace boundary in [0, min(t_d, horizon)].
inline PropertyReport check_lag_properties(const ScheduleTrace& trace, const JobSetD& d,
                                           const detail::TraceTimeline& timeline) {
    PropertyReport report;
    const Rational limit = detail::analysis_limit(trace, d);
    const std::size_t m = trace.platform.m();
    detail::PsSweep ps(trace, d, timeline);
    detail::PendingSweep pending(trace, d, timeline);

    Rational done = 0;       // cumulative actual allocation to d
    Rational prev_lag = 0;   // LAG at segment start
    Rational rate, step;
    for (const auto& seg : trace.segments) {
        if (!(seg.start < limit)) break;
        const Rational end = rmin(seg.end, limit);
        const bool busy = detail::segment_busy(seg, d);

        ++report.p2.checked;
        if (!busy) {
            std::size_t n_pending = pending.pending_tasks_at(seg.start);
            if (n_pending > m - 1)
                report.p2.add(seg.start, std::to_string(n_pending) + " tasks have pending jobs of d at non-busy t=" +
                                             format_rational(seg.start) + " (m=" + std::to_string(m) + ")");
        }

        rate = 0;
        for (ProcessorIndex p = 0; p < seg.assignment.size(); ++p)
            if (d.contains(seg.assignment[p])) rate += trace.platform.speed(p);
        if (rate != 0) {
            step = end - seg.start;
            step *= rate;
            done += step;
        }
        Rational lag_end = ps.at(end) - done;
        ++report.p1.checked;
        if (busy && prev_lag < lag_end)
            report.p1.add(seg.start, "LAG rose from " + format_rational(prev_lag) + " to " + format_rational(lag_end) +
                                         " over busy [" + format_rational(seg.start) + ", " + format_rational(end) +
                                         ")");
        prev_lag = std::move(lag_end);
    }
    return report;
}

inline PropertyReport check_lag_properties(const ScheduleTrace& trace, const JobSetD& d) {
    return check_lag_properties(trace, d, detail::TraceTimeline(trace));
}

inline PropertyReport check_properties(const ScheduleTrace& trace, const JobSetD& d) {
    PropertyReport report = check_lag_properties(trace, d);
    report.p0 = check_assignment_legality(trace);
    return report;
}

/// LAG at every boundary in [0, min(t_d, horizon)], as (time, LAG) pairs.
inline std::vector<std::pair<Rational, Rational>> lag_profile(const ScheduleTrace& trace, const JobSetD& d) {
    std::vector<std::pair<Rational, Rational>> out;
    const Rational limit = detail::analysis_limit(trace, d);
    detail::TraceTimeline timeline(trace);
    detail::PsSweep ps(trace, d, timeline);
    Rational done = 0;
    out.emplace_back(Rational(0), Rational(0));
    for (const auto& seg : trace.segments) {
        if (!(seg.start < limit)) break;
        const Rational end = rmin(seg.end, limit);
        for (ProcessorIndex p = 0; p < seg.assignment.size(); ++p)
            if (d.contains(seg.assignment[p])) done += trace.platform.speed(p) * (end - seg.start);
        out.emplace_back(end, ps.at(end) - done);
    }
    return out;
}

/// Maximal intervals before min(t_d, horizon) in which some enabled job of d
/// waits while a job outside d executes.
inline std::vector<Interval> blocking_intervals(const ScheduleTrace& trace, const JobSetD& d) {
    std::vector<Interval> out;
    const Rational limit = detail::analysis_limit(trace, d);
    detail::TraceTimeline timeline(trace);
    detail::PendingSweep pending(trace, d, timeline);
    for (const auto& seg : trace.segments) {
        if (!(seg.start < limit)) break;
        std::size_t running_d = 0;
        bool outsider = false;
        for (JobIndex j : seg.assignment) {
            if (j == kIdle) continue;
            if (d.contains(j))
                ++running_d;
            else
                outsider = true;
        }
        if (outsider && pending.pending_tasks_at(seg.start) > running_d)
            detail::push_interval(out, seg.start, rmin(seg.end, limit));
    }
    return out;
}

/// Pending workload at t_d of jobs outside d that execute at a blocking
/// instant before t_d and are still executing at t_d.
inline Rational blocking_workload(const ScheduleTrace& trace, const JobSetD& d, const AllocationIndex& index) {
    auto blocks = blocking_intervals(trace, d);
    if (blocks.empty() || trace.horizon < d.t_d()) return 0;
    std::vector<bool> blocker(trace.jobs.size(), false);
    std::size_t b = 0;
    const Segment* at_td = nullptr;
    for (const auto& seg : trace.segments) {
        while (b < blocks.size() && !(seg.start < blocks[b].end)) ++b;
        if (b < blocks.size() && !(seg.start < blocks[b].start))
            for (JobIndex j : seg.assignment)
                if (j != kIdle && !d.contains(j)) blocker[j] = true;
        if (!(d.t_d() < seg.start) && d.t_d() < seg.end) at_td = &seg;
    }
    Rational total = 0;
    if (!at_td) return total;
    for (JobIndex j : at_td->assignment)
        if (j != kIdle && blocker[j]) total += trace.jobs[j].workload - index.allocated(j, d.t_d());
    return total;
}

/// Up to `budget` pivot jobs spread evenly over the jobs whose deadline lies
/// within the horizon, in priority order.
inline std::vector<JobRef> select_pivots(const ScheduleTrace& trace, std::size_t budget) {
    std::vector<JobIndex> eligible;
    for (JobIndex j = 0; j < trace.jobs.size(); ++j)
        if (!(trace.horizon < trace.jobs[j].deadline)) eligible.push_back(j);
    std::sort(eligible.begin(), eligible.end(), [&](JobIndex a, JobIndex b) {
        const Job& x = trace.jobs[a];
        const Job& y = trace.jobs[b];
        if (x.deadline != y.deadline) return x.deadline < y.deadline;
        return x.ref.task < y.ref.task;
    });
    std::vector<JobRef> out;
    if (eligible.empty() || budget == 0) return out;
    if (eligible.size() <= budget) {
        for (JobIndex j : eligible) out.push_back(trace.jobs[j].ref);
        return out;
    }
    for (std::size_t k = 0; k < budget; ++k) {
        std::size_t pos = budget == 1 ? eligible.size() - 1 : k * (eligible.size() - 1) / (budget - 1);
        out.push_back(trace.jobs[eligible[pos]].ref);
    }
    return out;
}

struct BoundViolation {
    JobRef job;
    Rational release;
    std::optional<Rational> completion;  // nullopt: still running at the horizon
    Rational response;                   // observed, or age at the horizon when censored
    Rational bound;
};

/// Jobs whose response time exceeds their task's bound. A job still running
/// at the horizon counts once its age there already exceeds the bound.
inline std::vector<BoundViolation> bound_violations(const ScheduleTrace& trace,
                                                    const std::map<TaskId, Rational>& per_task_bound) {
    std::vector<BoundViolation> out;
    for (const Job& job : trace.jobs) {
        auto it = per_task_bound.find(job.ref.task);
        if (it == per_task_bound.end()) continue;
        Rational response = job.completion ? Rational(*job.completion - job.release) : Rational(trace.horizon - job.release);
        if (it->second < response) out.push_back({job.ref, job.release, job.completion, response, it->second});
    }
    return out;
}

}  // namespace hetsched
