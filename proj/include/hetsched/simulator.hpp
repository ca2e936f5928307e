#pragma once

// Exact event-driven simulation of sporadic task systems under GEDF-H
// (preemptive and non-preemptive) and plain GEDF with a pluggable processor
// selector. Time only advances between decision points (releases and
// completions); the next completion of each running job is computed exactly
// as remaining workload / processor speed.

#include "hetsched/model.hpp"
#include "hetsched/random.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetsched {

using JobIndex = std::size_t;
inline constexpr JobIndex kIdle = std::numeric_limits<JobIndex>::max();

struct JobRef {
    TaskId task = 0;
    std::uint64_t index = 0;  // 1-based job number within its task

    friend auto operator<=>(const JobRef&, const JobRef&) = default;
};

inline std::string to_string(const JobRef& ref) {
    return "T" + std::to_string(ref.task) + "." + std::to_string(ref.index);
}

inline JobRef parse_job_ref(const std::string& text) {
    auto dot = text.find('.');
    if (text.size() < 4 || text[0] != 'T' || dot == std::string::npos)
        throw std::invalid_argument("malformed job reference '" + text + "'");
    try {
        std::size_t used = 0;
        JobRef ref;
        ref.task = std::stoull(text.substr(1, dot - 1), &used);
        if (used != dot - 1) throw std::invalid_argument("");
        ref.index = std::stoull(text.substr(dot + 1), &used);
        if (used != text.size() - dot - 1 || ref.task == 0 || ref.index == 0) throw std::invalid_argument("");
        return ref;
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed job reference '" + text + "'");
    }
}

struct Job {
    JobRef ref;
    Rational release;
    Rational deadline;
    Rational workload;
    Rational completed_work = 0;
    std::optional<Rational> completion;
    std::optional<Rational> first_start;

    bool completed() const { return completed_work == workload; }
};

enum class EventKind { Release, Completion, Deadline, Preemption, Migration, BlockStart, BlockEnd };

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Release: return "release";
        case EventKind::Completion: return "completion";
        case EventKind::Deadline: return "deadline";
        case EventKind::Preemption: return "preemption";
        case EventKind::Migration: return "migration";
        case EventKind::BlockStart: return "block-start";
        case EventKind::BlockEnd: return "block-end";
    }
    return "?";
}

inline EventKind parse_event_kind(const std::string& s) {
    for (auto k : {EventKind::Release, EventKind::Completion, EventKind::Deadline, EventKind::Preemption,
                   EventKind::Migration, EventKind::BlockStart, EventKind::BlockEnd})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown event kind '" + s + "'");
}

struct TraceEvent {
    Rational time;
    EventKind kind;
    JobIndex job;
    std::vector<ProcessorIndex> processors;  // migration: {from, to}
};

/// Per-processor job index (kIdle when idle).
using Assignment = std::vector<JobIndex>;

struct Segment {
    Rational start;
    Rational end;
    Assignment assignment;
};

enum class Policy { GedfH, NpGedfH, GedfPlain };
enum class Selector { ArbitraryLowestId, FastestFirst, AdversarialSlowForHeavy };

inline const char* to_string(Policy p) {
    switch (p) {
        case Policy::GedfH: return "gedf-h";
        case Policy::NpGedfH: return "np-gedf-h";
        case Policy::GedfPlain: return "gedf-plain";
    }
    return "?";
}

inline const char* to_string(Selector s) {
    switch (s) {
        case Selector::ArbitraryLowestId: return "arbitrary-lowest-id";
        case Selector::FastestFirst: return "fastest-first";
        case Selector::AdversarialSlowForHeavy: return "adversarial-slow-for-heavy";
    }
    return "?";
}

inline Policy parse_policy(const std::string& s) {
    if (s == "gedf-h" || s == "gedf-h-preemptive") return Policy::GedfH;
    if (s == "np-gedf-h" || s == "gedf-h-nonpreemptive") return Policy::NpGedfH;
    if (s == "gedf-plain") return Policy::GedfPlain;
    throw std::invalid_argument("unknown policy '" + s + "'");
}

inline Selector parse_selector(const std::string& s) {
    for (auto sel : {Selector::ArbitraryLowestId, Selector::FastestFirst, Selector::AdversarialSlowForHeavy})
        if (s == to_string(sel)) return sel;
    throw std::invalid_argument("unknown selector '" + s + "'");
}

struct PolicyConfig {
    Policy policy = Policy::GedfH;
    std::optional<Selector> selector;

    static PolicyConfig gedf_h() { return {Policy::GedfH, std::nullopt}; }
    static PolicyConfig np_gedf_h() { return {Policy::NpGedfH, std::nullopt}; }
    static PolicyConfig gedf_plain(Selector s) { return {Policy::GedfPlain, s}; }

    bool preemptive() const { return policy != Policy::NpGedfH; }
    bool uses_gedf_h() const { return policy != Policy::GedfPlain; }

    void validate() const {
        if ((policy == Policy::GedfPlain) != selector.has_value())
            throw std::invalid_argument("a selector is required for gedf-plain and only for gedf-plain");
    }
};

/// Release-time generator for every task of a system.
class ArrivalSource {
public:
    enum class Mode { Periodic, Trace, SporadicRandom };

    static ArrivalSource periodic() { return ArrivalSource(Mode::Periodic); }

    static ArrivalSource from_trace(std::map<TaskId, std::vector<Rational>> releases) {
        ArrivalSource a(Mode::Trace);
        a.explicit_ = std::move(releases);
        return a;
    }

    /// Inter-arrival = period * (1 + f), f uniform on the grid k/1000 of
    /// [0, max_extra]; the first release is offset by period * f as well.
    static ArrivalSource sporadic_random(std::uint64_t seed, Rational max_extra = make_rational(1, 2)) {
        if (max_extra < 0) throw std::invalid_argument("sporadic jitter must be non-negative");
        ArrivalSource a(Mode::SporadicRandom);
        a.seed_ = seed;
        a.max_extra_ = std::move(max_extra);
        return a;
    }

    Mode mode() const { return mode_; }

    /// All releases of the task strictly before the horizon.
    std::vector<Rational> releases(const SporadicTask& task, const Rational& horizon) const {
        std::vector<Rational> out;
        switch (mode_) {
            case Mode::Periodic:
                for (Rational r = 0; r < horizon; r += task.period()) out.push_back(r);
                break;
            case Mode::Trace: {
                auto it = explicit_.find(task.id());
                if (it == explicit_.end()) break;
                for (std::size_t i = 0; i < it->second.size(); ++i) {
                    const Rational& r = it->second[i];
                    if (r < 0) throw std::invalid_argument("negative release time for task " + std::to_string(task.id()));
                    if (i > 0 && r < it->second[i - 1] + task.period())
                        throw std::invalid_argument("release trace of task " + std::to_string(task.id()) +
                                                    " violates sporadic separation at job " + std::to_string(i + 1));
                    if (r < horizon) out.push_back(r);
                }
                break;
            }
            case Mode::SporadicRandom: {
                Rng rng(seed_, task.id());
                Rational r = task.period() * rng.uniform_grid(0, max_extra_, 1000);
                while (r < horizon) {
                    out.push_back(r);
                    r += task.period() * (1 + rng.uniform_grid(0, max_extra_, 1000));
                }
                break;
            }
        }
        return out;
    }

private:
    explicit ArrivalSource(Mode m) : mode_(m) {}

    Mode mode_;
    std::map<TaskId, std::vector<Rational>> explicit_;
    std::uint64_t seed_ = 0;
    Rational max_extra_ = 0;
};

struct ScheduleTrace {
    TaskSystem tasks;
    Platform platform{{{1, 1}}};
    PolicyConfig policy;
    Rational horizon = 0;
    std::vector<Job> jobs;
    std::vector<std::vector<JobIndex>> jobs_of_task;  // parallel to tasks, release order
    std::vector<Segment> segments;
    std::vector<TraceEvent> events;

    const SporadicTask& task_of(JobIndex j) const { return tasks.by_id(jobs[j].ref.task); }

    std::optional<JobIndex> find(const JobRef& ref) const {
        auto idx = tasks.index_of(ref.task);
        if (!idx || ref.index == 0 || ref.index > jobs_of_task[*idx].size()) return std::nullopt;
        return jobs_of_task[*idx][ref.index - 1];
    }
};

/// A job competing for a processor, in priority order when passed in a span.
struct CandidateJob {
    JobIndex job;
    const SporadicTask* task;
};

namespace detail {

// Slowest adequate idle processor; processors are indexed slowest first, so
// the first hit is also the lowest id within the slowest adequate class.
inline std::optional<ProcessorIndex> slowest_free_adequate(const Platform& platform, const Assignment& a,
                                                           const Rational& utilization) {
    for (ProcessorIndex p = 0; p < platform.m(); ++p)
        if (a[p] == kIdle && utilization <= platform.speed(p)) return p;
    return std::nullopt;
}

struct GedfHPlacer {
    const Platform& platform;
    Assignment& result;
    std::vector<const SporadicTask*>& task_on;  // per processor

    void place(JobIndex job, const SporadicTask* task, int depth = 0) {
        if (depth > static_cast<int>(platform.class_count()) + 1)
            throw std::logic_error("GEDF-H: displacement chain did not terminate");
        const Rational& u = task->utilization();
        if (auto p = slowest_free_adequate(platform, result, u)) {
            result[*p] = job;
            task_on[*p] = task;
            return;
        }
        // Case 2: every processor fast enough for this job is taken. Some
        // occupant of those processors must not need them (u <= alpha_i,
        // the fastest class speed strictly below u); move it out.
        std::optional<Rational> below;
        for (const auto& c : platform.classes())
            if (c.speed < u) below = c.speed;
        std::optional<ProcessorIndex> victim;
        if (below) {
            for (ProcessorIndex p = 0; p < platform.m(); ++p) {
                if (result[p] == kIdle || platform.speed(p) < u) continue;
                const SporadicTask* occ = task_on[p];
                if (!(occ->utilization() <= *below)) continue;
                if (!victim || occ->utilization() < task_on[*victim]->utilization() ||
                    (occ->utilization() == task_on[*victim]->utilization() && occ->id() < task_on[*victim]->id()))
                    victim = p;
            }
        }
        if (!victim)
            throw std::logic_error("GEDF-H: no legal processor for task " + std::to_string(task->id()) +
                                   " (heavy-task count condition violated?)");
        JobIndex moved = result[*victim];
        const SporadicTask* moved_task = task_on[*victim];
        result[*victim] = job;
        task_on[*victim] = task;
        place(moved, moved_task, depth + 1);
    }
};

}  // namespace detail

/// GEDF-H processor selection for the min(m, |enabled|) highest-priority
/// jobs. Jobs stay on their previous processor when it is still fast enough;
/// others go to the slowest adequate free processor, displacing a job that
/// does not need a fast processor when none is free.
inline Assignment gedfh_assign(std::span<const CandidateJob> enabled, const Platform& platform,
                               const Assignment& previous) {
    const std::size_t m = platform.m();
    const std::size_t k = std::min(m, enabled.size());
    Assignment result(m, kIdle);
    std::vector<const SporadicTask*> task_on(m, nullptr);
    std::vector<bool> placed(k, false);

    for (std::size_t i = 0; i < k; ++i) {
        if (!(enabled[i].task->utilization() <= platform.alpha_max()))
            throw std::logic_error("GEDF-H: task " + std::to_string(enabled[i].task->id()) +
                                   " utilization exceeds alpha_max");
        for (ProcessorIndex p = 0; p < previous.size() && p < m; ++p) {
            if (previous[p] == enabled[i].job) {
                if (enabled[i].task->utilization() <= platform.speed(p)) {
                    result[p] = enabled[i].job;
                    task_on[p] = enabled[i].task;
                    placed[i] = true;
                }
                break;
            }
        }
    }
    detail::GedfHPlacer placer{platform, result, task_on};
    for (std::size_t i = 0; i < k; ++i)
        if (!placed[i]) placer.place(enabled[i].job, enabled[i].task);
    return result;
}

/// Plain GEDF: the top-m jobs go to processors chosen by the selector,
/// ignoring utilizations and previous placement.
inline Assignment plain_assign(std::span<const CandidateJob> enabled, const Platform& platform, Selector selector) {
    const std::size_t m = platform.m();
    const std::size_t k = std::min(m, enabled.size());
    Assignment result(m, kIdle);
    std::vector<CandidateJob> order(enabled.begin(), enabled.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<ProcessorIndex> procs(m);
    for (ProcessorIndex p = 0; p < m; ++p) procs[p] = p;
    switch (selector) {
        case Selector::ArbitraryLowestId:
            break;
        case Selector::FastestFirst:
            std::stable_sort(procs.begin(), procs.end(),
                             [&](ProcessorIndex a, ProcessorIndex b) { return platform.speed(b) < platform.speed(a); });
            break;
        case Selector::AdversarialSlowForHeavy:
            std::stable_sort(order.begin(), order.end(), [](const CandidateJob& a, const CandidateJob& b) {
                if (a.task->utilization() != b.task->utilization())
                    return b.task->utilization() < a.task->utilization();
                return a.task->id() < b.task->id();
            });
            break;
    }
    for (std::size_t i = 0; i < k; ++i) result[procs[i]] = order[i].job;
    return result;
}

/// Non-preemptive GEDF-H dispatch. Started jobs keep their processors; the
/// remaining enabled jobs are scanned in priority order and each starts on
/// the slowest adequate idle processor if there is one.
inline Assignment np_dispatch(std::span<const CandidateJob> enabled, const Platform& platform,
                              const Assignment& running) {
    Assignment result = running;
    result.resize(platform.m(), kIdle);
    std::size_t free_count = 0;
    for (JobIndex j : result) free_count += j == kIdle;
    for (const auto& c : enabled) {
        if (free_count == 0) break;
        if (std::find(result.begin(), result.end(), c.job) != result.end()) continue;
        if (auto p = detail::slowest_free_adequate(platform, result, c.task->utilization())) {
            result[*p] = c.job;
            --free_count;
        }
    }
    return result;
}

namespace detail {

class Engine {
public:
    Engine(const TaskSystem& tasks, const Platform& platform, const ArrivalSource& arrivals,
           const PolicyConfig& policy, const Rational& horizon) {
        trace_.tasks = tasks;
        trace_.platform = platform;
        trace_.policy = policy;
        trace_.horizon = horizon;
        const std::size_t n = tasks.size();
        releases_.resize(n);
        next_release_.assign(n, 0);
        pending_.resize(n);
        trace_.jobs_of_task.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            releases_[i] = arrivals.releases(tasks[i], horizon);
            if (!releases_[i].empty()) release_queue_.push({releases_[i][0], i});
        }
        current_.assign(platform.m(), kIdle);
    }

    ScheduleTrace run() {
        const Platform& platform = trace_.platform;
        Rational t = 0;
        while (true) {
            release_due(t);
            Assignment next_assignment = decide();
            record_transitions(t, next_assignment);
            current_ = std::move(next_assignment);
            if (!(t < trace_.horizon)) break;

            Rational next = trace_.horizon;
            if (!release_queue_.empty() && release_queue_.top().time < next) next = release_queue_.top().time;
            for (ProcessorIndex p = 0; p < platform.m(); ++p) {
                JobIndex j = current_[p];
                if (j == kIdle) continue;
                const Job& job = trace_.jobs[j];
                Rational done = t + (job.workload - job.completed_work) / platform.speed(p);
                if (done < next) next = done;
            }
            advance(t, next);
            t = next;
        }
        finish();
        return std::move(trace_);
    }

private:
    struct ReleaseItem {
        Rational time;
        std::size_t task;
        bool operator>(const ReleaseItem& o) const {
            if (time != o.time) return time > o.time;
            return task > o.task;
        }
    };

    // Priority order: earlier deadline first, ties to the lower task id.
    struct ReadyLess {
        const std::vector<Job>* jobs;
        bool operator()(JobIndex a, JobIndex b) const {
            const Job& x = (*jobs)[a];
            const Job& y = (*jobs)[b];
            int c = cmp(x.deadline, y.deadline);
            if (c != 0) return c < 0;
            return x.ref.task < y.ref.task;
        }
    };

    void release_due(const Rational& t) {
        while (!release_queue_.empty() && release_queue_.top().time <= t) {
            ReleaseItem item = release_queue_.top();
            release_queue_.pop();
            std::size_t ti = item.task;
            const SporadicTask& task = trace_.tasks[ti];
            Job job;
            job.ref = {task.id(), trace_.jobs_of_task[ti].size() + 1};
            job.release = item.time;
            job.deadline = item.time + task.period();
            job.workload = task.exec();
            JobIndex j = trace_.jobs.size();
            trace_.jobs.push_back(std::move(job));
            job_task_.push_back(ti);
            blocked_.push_back(false);
            trace_.jobs_of_task[ti].push_back(j);
            trace_.events.push_back({item.time, EventKind::Release, j, {}});
            pending_[ti].push_back(j);
            if (pending_[ti].size() == 1) ready_.insert(j);
            if (++next_release_[ti] < releases_[ti].size())
                release_queue_.push({releases_[ti][next_release_[ti]], ti});
        }
    }

    Assignment decide() {
        const Platform& platform = trace_.platform;
        const PolicyConfig& policy = trace_.policy;
        candidates_.clear();
        std::size_t limit = policy.preemptive() ? platform.m() : ready_.size();
        for (auto it = ready_.begin(); it != ready_.end() && candidates_.size() < limit; ++it)
            candidates_.push_back({*it, &trace_.tasks[job_task_[*it]]});
        switch (policy.policy) {
            case Policy::GedfH: return gedfh_assign(candidates_, platform, current_);
            case Policy::GedfPlain: return plain_assign(candidates_, platform, *policy.selector);
            case Policy::NpGedfH: return np_dispatch(candidates_, platform, current_);
        }
        throw std::logic_error("unknown policy");
    }

    void record_transitions(const Rational& t, const Assignment& next) {
        const std::size_t m = trace_.platform.m();
        for (ProcessorIndex p = 0; p < m; ++p) {
            JobIndex j = current_[p];
            if (j == kIdle) continue;
            auto q = std::find(next.begin(), next.end(), j);
            if (q == next.end()) {
                trace_.events.push_back({t, EventKind::Preemption, j, {p}});
            } else if (static_cast<ProcessorIndex>(q - next.begin()) != p) {
                trace_.events.push_back(
                    {t, EventKind::Migration, j, {p, static_cast<ProcessorIndex>(q - next.begin())}});
            }
        }
        for (ProcessorIndex p = 0; p < m; ++p) {
            JobIndex j = next[p];
            if (j != kIdle && !trace_.jobs[j].first_start) trace_.jobs[j].first_start = t;
        }
        update_blocking(t, next);
    }

    // A job is blocked while it is enabled and idle but some lower-priority
    // job executes.
    void update_blocking(const Rational& t, const Assignment& next) {
        const ReadyLess less = ready_.key_comp();
        JobIndex lowest = kIdle;
        for (JobIndex j : next)
            if (j != kIdle && (lowest == kIdle || less(lowest, j))) lowest = j;
        std::vector<JobIndex> now_blocked;
        if (lowest != kIdle) {
            for (auto it = ready_.begin(); it != ready_.end() && less(*it, lowest); ++it)
                if (std::find(next.begin(), next.end(), *it) == next.end()) now_blocked.push_back(*it);
        }
        for (auto it = blocked_list_.begin(); it != blocked_list_.end();) {
            if (std::find(now_blocked.begin(), now_blocked.end(), *it) == now_blocked.end()) {
                trace_.events.push_back({t, EventKind::BlockEnd, *it, {}});
                blocked_[*it] = false;
                it = blocked_list_.erase(it);
            } else {
                ++it;
            }
        }
        for (JobIndex j : now_blocked) {
            if (blocked_[j]) continue;
            blocked_[j] = true;
            blocked_list_.push_back(j);
            trace_.events.push_back({t, EventKind::BlockStart, j, {}});
        }
    }

    void advance(const Rational& t, const Rational& next) {
        const Platform& platform = trace_.platform;
        Rational dt = next - t;
        trace_.segments.push_back({t, next, current_});
        for (ProcessorIndex p = 0; p < platform.m(); ++p) {
            JobIndex j = current_[p];
            if (j == kIdle) continue;
            Job& job = trace_.jobs[j];
            job.completed_work += platform.speed(p) * dt;
            if (job.workload < job.completed_work)
                throw std::logic_error("simulator overshot the workload of " + to_string(job.ref));
            if (job.completed_work == job.workload) complete(j, next);
        }
    }

    void complete(JobIndex j, const Rational& t) {
        Job& job = trace_.jobs[j];
        job.completion = t;
        trace_.events.push_back({t, EventKind::Completion, j, {}});
        if (job.deadline < t) trace_.events.push_back({job.deadline, EventKind::Deadline, j, {}});
        std::size_t ti = job_task_[j];
        ready_.erase(j);
        pending_[ti].pop_front();
        if (!pending_[ti].empty()) ready_.insert(pending_[ti].front());
        for (auto& p : current_)
            if (p == j) p = kIdle;
    }

    void finish() {
        for (JobIndex j = 0; j < trace_.jobs.size(); ++j) {
            const Job& job = trace_.jobs[j];
            if (!job.completion && job.deadline < trace_.horizon)
                trace_.events.push_back({job.deadline, EventKind::Deadline, j, {}});
        }
        std::stable_sort(trace_.events.begin(), trace_.events.end(),
                         [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; });
    }

    ScheduleTrace trace_;
    std::vector<std::vector<Rational>> releases_;
    std::vector<std::size_t> next_release_;
    std::priority_queue<ReleaseItem, std::vector<ReleaseItem>, std::greater<>> release_queue_;
    std::vector<std::deque<JobIndex>> pending_;
    std::set<JobIndex, ReadyLess> ready_{ReadyLess{&trace_.jobs}};
    std::vector<std::size_t> job_task_;
    std::vector<bool> blocked_;
    std::vector<JobIndex> blocked_list_;
    std::vector<CandidateJob> candidates_;
    Assignment current_;
};

}  // namespace detail

/// Runs the task system over [0, horizon). Jobs still running at the horizon
/// are left incomplete (censored).
inline ScheduleTrace simulate(const TaskSystem& tasks, const Platform& platform, const ArrivalSource& arrivals,
                              const PolicyConfig& policy, const Rational& horizon) {
    policy.validate();
    if (!(0 < horizon)) throw std::invalid_argument("simulation horizon must be positive");
    if (policy.uses_gedf_h()) {
        auto report = validate_task_system(tasks, platform);
        if (!report.accepted)
            throw std::invalid_argument("GEDF-H requires a feasible task system: " + report.failures().front());
    }
    return detail::Engine(tasks, platform, arrivals, policy, horizon).run();
}

struct TaskResponse {
    Rational max = 0;
    Rational mean = 0;
    std::vector<std::pair<std::uint64_t, Rational>> per_job;  // (job number, response)
    std::size_t censored = 0;
};

inline std::map<TaskId, TaskResponse> response_times(const ScheduleTrace& trace) {
    std::map<TaskId, TaskResponse> out;
    for (std::size_t ti = 0; ti < trace.tasks.size(); ++ti) {
        TaskResponse& r = out[trace.tasks[ti].id()];
        Rational sum = 0;
        for (JobIndex j : trace.jobs_of_task[ti]) {
            const Job& job = trace.jobs[j];
            if (!job.completion) {
                ++r.censored;
                continue;
            }
            Rational resp = *job.completion - job.release;
            if (resp < 0) resp = 0;
            r.max = rmax(r.max, resp);
            sum += resp;
            r.per_job.emplace_back(job.ref.index, std::move(resp));
        }
        if (!r.per_job.empty()) r.mean = sum / static_cast<unsigned long>(r.per_job.size());
    }
    return out;
}

/// Segment boundaries where a job keeps running but on another processor.
inline std::map<TaskId, std::size_t> migration_count(const ScheduleTrace& trace) {
    std::map<TaskId, std::size_t> out;
    for (const auto& t : trace.tasks) out[t.id()] = 0;
    for (std::size_t s = 1; s < trace.segments.size(); ++s) {
        const Assignment& prev = trace.segments[s - 1].assignment;
        const Assignment& cur = trace.segments[s].assignment;
        for (ProcessorIndex p = 0; p < prev.size(); ++p) {
            JobIndex j = prev[p];
            if (j == kIdle) continue;
            for (ProcessorIndex q = 0; q < cur.size(); ++q)
                if (cur[q] == j && q != p) ++out[trace.jobs[j].ref.task];
        }
    }
    return out;
}

}  // namespace hetsched
