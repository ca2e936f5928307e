#include "hetsched/oracle.hpp"
#include "hetsched/simulator.hpp"
#include "hetsched/trace_io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <stdexcept>

using namespace hetsched;
using namespace hetsched::testing;

namespace {

const Job& job_of(const ScheduleTrace& trace, TaskId task, std::uint64_t index) {
    auto j = trace.find({task, index});
    if (!j) throw std::out_of_range("job not in trace");
    return trace.jobs[*j];
}

Rational response(const ScheduleTrace& trace, TaskId task, std::uint64_t index) {
    const Job& job = job_of(trace, task, index);
    if (!job.completion) throw std::logic_error("job did not complete");
    return *job.completion - job.release;
}

// Jobs that may run at t: released, not complete, predecessor complete.
std::vector<JobIndex> enabled_at(const ScheduleTrace& trace, const Rational& t) {
    std::vector<JobIndex> out;
    for (std::size_t ti = 0; ti < trace.tasks.size(); ++ti) {
        for (JobIndex j : trace.jobs_of_task[ti]) {
            const Job& job = trace.jobs[j];
            if (t < job.release) break;
            if (job.completion && !(t < *job.completion)) continue;
            out.push_back(j);
            break;
        }
    }
    std::sort(out.begin(), out.end(), [&](JobIndex a, JobIndex b) {
        const Job& x = trace.jobs[a];
        const Job& y = trace.jobs[b];
        if (x.deadline != y.deadline) return x.deadline < y.deadline;
        return x.ref.task < y.ref.task;
    });
    return out;
}

struct RandomCase {
    TaskSystem tasks;
    Platform platform;
    Rational horizon;
};

RandomCase random_case(Rng& rng) {
    Platform p = random_platform(rng, 3, 5);
    TaskSystem t = random_accepted_tasks(rng, p, rng.uniform_int(1, 6));
    return {t, p, 12};
}

}  // namespace

TEST(Simulator, Example1ScheduleMatchesHandDerivation) {
    auto trace = simulate(example1_tasks(), example1_platform(), ArrivalSource::periodic(), PolicyConfig::gedf_h(), 2);
    ASSERT_GE(trace.segments.size(), 3u);
    const Segment& s0 = trace.segments[0];
    EXPECT_EQ(s0.start, Rational(0));
    EXPECT_EQ(s0.end, q(4, 5));
    EXPECT_EQ(trace.jobs[s0.assignment[0]].ref, (JobRef{3, 1}));
    EXPECT_EQ(trace.jobs[s0.assignment[1]].ref, (JobRef{1, 1}));
    EXPECT_EQ(trace.jobs[s0.assignment[2]].ref, (JobRef{2, 1}));
    const Segment& s1 = trace.segments[1];
    EXPECT_EQ(s1.end, Rational(1));
    EXPECT_EQ(trace.jobs[s1.assignment[1]].ref, (JobRef{4, 1}));

    EXPECT_EQ(response(trace, 1, 1), q(4, 5));
    EXPECT_EQ(response(trace, 4, 1), q(3, 2));

    bool moved = false;
    for (const auto& e : trace.events)
        if (e.kind == EventKind::Migration && trace.jobs[e.job].ref == JobRef{4, 1}) {
            EXPECT_EQ(e.time, Rational(1));
            EXPECT_EQ(e.processors, (std::vector<ProcessorIndex>{1, 0}));
            moved = true;
        }
    EXPECT_TRUE(moved);
    EXPECT_GE(migration_count(trace).at(4), 1u);
}

TEST(Simulator, AdversarialPlainGedfGrowsResponses) {
    auto trace = simulate(growth_tasks(), growth_platform(), ArrivalSource::periodic(),
                          PolicyConfig::gedf_plain(Selector::AdversarialSlowForHeavy), 50);
    Rational prev = -1;
    for (std::uint64_t k = 1; k <= 10; ++k) {
        Rational r = response(trace, 2, k);
        EXPECT_LT(prev, r) << "job " << k;
        prev = r;
    }
}

TEST(Simulator, GrowthSystemUnderGedfHHasConstantResponses) {
    auto trace = simulate(growth_tasks(), growth_platform(), ArrivalSource::periodic(), PolicyConfig::gedf_h(), 20);
    for (TaskId id : {1u, 2u})
        for (std::uint64_t k = 1; k <= 10; ++k) EXPECT_EQ(response(trace, id, k), Rational(2));
    EXPECT_EQ(migration_count(trace).at(2), 0u);
}

TEST(Simulator, GedfHRejectsInfeasibleSystems) {
    EXPECT_THROW(simulate(counterexample_tasks(), counterexample_platform(3), ArrivalSource::periodic(),
                          PolicyConfig::gedf_h(), 5),
                 std::invalid_argument);
    EXPECT_NO_THROW(simulate(counterexample_tasks(), counterexample_platform(3), ArrivalSource::periodic(),
                             PolicyConfig::gedf_plain(Selector::FastestFirst), 5));
}

TEST(Simulator, AssignmentWithTooManyHeavyJobsIsAHardFault) {
    auto tasks = counterexample_tasks();
    Platform p = counterexample_platform(3);
    std::vector<CandidateJob> jobs{{0, &tasks[0]}, {1, &tasks[1]}};
    EXPECT_THROW(gedfh_assign(jobs, p, Assignment(p.m(), kIdle)), std::logic_error);
}

TEST(Simulator, GedfHDisplacesAJobThatDoesNotNeedTheFastProcessor) {
    auto tasks = example1_tasks();
    Platform p = example1_platform();
    // tau_4's job sits on M2; tau_1 and tau_2 both need a fast processor.
    std::vector<CandidateJob> jobs{{10, &tasks[3]}, {11, &tasks[0]}, {12, &tasks[1]}};
    Assignment previous{kIdle, 10, kIdle};
    Assignment a = gedfh_assign(jobs, p, previous);
    EXPECT_EQ(a[0], 10u);
    EXPECT_TRUE((a[1] == 11 && a[2] == 12) || (a[1] == 12 && a[2] == 11));
}

TEST(Simulator, InvalidPolicyAndHorizon) {
    EXPECT_THROW(simulate(growth_tasks(), growth_platform(), ArrivalSource::periodic(), PolicyConfig::gedf_h(), 0),
                 std::invalid_argument);
    PolicyConfig bad{Policy::GedfPlain, std::nullopt};
    EXPECT_THROW(simulate(growth_tasks(), growth_platform(), ArrivalSource::periodic(), bad, 5), std::invalid_argument);
}

TEST(Simulator, NonPreemptiveBlockingIsRecorded) {
    TaskSystem tasks = system_of({{3, 6}, {6, 6}, {1, 1}});
    Platform p({{1, 1}, {2, 1}});
    auto arrivals = ArrivalSource::from_trace({{1, {0}}, {2, {0}}, {3, {1}}});
    auto trace = simulate(tasks, p, arrivals, PolicyConfig::np_gedf_h(), 10);
    bool started = false;
    for (const auto& e : trace.events)
        if (e.kind == EventKind::BlockStart && trace.jobs[e.job].ref == JobRef{3, 1}) {
            EXPECT_EQ(e.time, Rational(1));
            started = true;
        }
    EXPECT_TRUE(started);
    EXPECT_EQ(*job_of(trace, 3, 1).first_start, Rational(3));

    auto pre = simulate(tasks, p, arrivals, PolicyConfig::gedf_h(), 10);
    for (const auto& e : pre.events) EXPECT_NE(e.kind, EventKind::BlockStart);
    EXPECT_EQ(*job_of(pre, 3, 1).first_start, Rational(1));
}

TEST(Simulator, DeadlineMissEvents) {
    auto trace = simulate(growth_tasks(), growth_platform(), ArrivalSource::periodic(),
                          PolicyConfig::gedf_plain(Selector::AdversarialSlowForHeavy), 10);
    std::size_t misses = 0;
    for (const auto& e : trace.events) {
        if (e.kind != EventKind::Deadline) continue;
        ++misses;
        EXPECT_EQ(e.time, trace.jobs[e.job].deadline);
    }
    EXPECT_GT(misses, 0u);
    EXPECT_TRUE(std::is_sorted(trace.events.begin(), trace.events.end(),
                               [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; }));
}

TEST(Simulator, ArrivalSources) {
    SporadicTask t(1, 1, 2);
    auto periodic = ArrivalSource::periodic().releases(t, 7);
    EXPECT_EQ(periodic, (std::vector<Rational>{0, 2, 4, 6}));
    auto sporadic = ArrivalSource::sporadic_random(9).releases(t, 100);
    for (std::size_t i = 1; i < sporadic.size(); ++i) {
        EXPECT_LE(sporadic[i - 1] + 2, sporadic[i]);
        EXPECT_LE(sporadic[i], sporadic[i - 1] + 3);
    }
    EXPECT_EQ(sporadic, ArrivalSource::sporadic_random(9).releases(t, 100));
    EXPECT_THROW(ArrivalSource::from_trace({{1, {0, 1}}}).releases(t, 10), std::invalid_argument);
    EXPECT_THROW(ArrivalSource::from_trace({{1, {-1}}}).releases(t, 10), std::invalid_argument);
    EXPECT_EQ(ArrivalSource::from_trace({{1, {0, 5, 20}}}).releases(t, 10), (std::vector<Rational>{0, 5}));
}

TEST(Simulator, EmptySystemYieldsIdleTrace) {
    auto trace = simulate(TaskSystem{}, Platform({{1, 2}}), ArrivalSource::periodic(), PolicyConfig::gedf_h(), 3);
    EXPECT_TRUE(trace.jobs.empty());
    ASSERT_EQ(trace.segments.size(), 1u);
    EXPECT_EQ(trace.segments[0].end, Rational(3));
}

// Invariants over random accepted systems under every policy.

TEST(SimulatorProperty, AssignmentLegalityUnderGedfH) {
    Rng rng(201);
    for (int iter = 0; iter < 150; ++iter) {
        auto c = random_case(rng);
        for (auto policy : {PolicyConfig::gedf_h(), PolicyConfig::np_gedf_h()}) {
            auto trace = simulate(c.tasks, c.platform, ArrivalSource::sporadic_random(iter), policy, c.horizon);
            EXPECT_TRUE(check_assignment_legality(trace).ok());
        }
    }
}

TEST(SimulatorProperty, PreemptiveGedfHRunsTheTopMJobs) {
    Rng rng(202);
    for (int iter = 0; iter < 150; ++iter) {
        auto c = random_case(rng);
        auto trace = simulate(c.tasks, c.platform, ArrivalSource::sporadic_random(iter), PolicyConfig::gedf_h(),
                              c.horizon);
        for (const auto& seg : trace.segments) {
            auto enabled = enabled_at(trace, seg.start);
            enabled.resize(std::min(enabled.size(), c.platform.m()));
            std::vector<JobIndex> running;
            for (JobIndex j : seg.assignment)
                if (j != kIdle) running.push_back(j);
            std::sort(enabled.begin(), enabled.end());
            std::sort(running.begin(), running.end());
            ASSERT_EQ(running, enabled) << "segment at " << format_rational(seg.start);
        }
    }
}

TEST(SimulatorProperty, JobsExecuteSequentiallyAndExactly) {
    Rng rng(203);
    for (int iter = 0; iter < 150; ++iter) {
        auto c = random_case(rng);
        for (auto policy : {PolicyConfig::gedf_h(), PolicyConfig::np_gedf_h(),
                            PolicyConfig::gedf_plain(Selector::FastestFirst)}) {
            auto trace = simulate(c.tasks, c.platform, ArrivalSource::periodic(), policy, c.horizon);
            std::vector<Rational> work(trace.jobs.size(), 0);
            for (std::size_t s = 0; s < trace.segments.size(); ++s) {
                const Segment& seg = trace.segments[s];
                EXPECT_EQ(seg.start, s == 0 ? Rational(0) : trace.segments[s - 1].end);
                std::map<TaskId, int> per_task;
                for (ProcessorIndex p = 0; p < seg.assignment.size(); ++p) {
                    JobIndex j = seg.assignment[p];
                    if (j == kIdle) continue;
                    const Job& job = trace.jobs[j];
                    EXPECT_EQ(++per_task[job.ref.task], 1);
                    EXPECT_LE(job.release, seg.start);
                    if (job.ref.index > 1) {
                        const Job& prev = job_of(trace, job.ref.task, job.ref.index - 1);
                        ASSERT_TRUE(prev.completion);
                        EXPECT_LE(*prev.completion, seg.start);
                    }
                    work[j] += c.platform.speed(p) * (seg.end - seg.start);
                }
            }
            EXPECT_EQ(trace.segments.back().end, c.horizon);
            for (JobIndex j = 0; j < trace.jobs.size(); ++j) {
                const Job& job = trace.jobs[j];
                EXPECT_EQ(work[j], job.completed_work);
                if (job.completion)
                    EXPECT_EQ(work[j], job.workload);
                else
                    EXPECT_LT(work[j], job.workload);
            }
        }
    }
}

TEST(SimulatorProperty, NonPreemptiveJobsNeverMoveOrPause) {
    Rng rng(204);
    for (int iter = 0; iter < 150; ++iter) {
        auto c = random_case(rng);
        auto trace = simulate(c.tasks, c.platform, ArrivalSource::sporadic_random(iter), PolicyConfig::np_gedf_h(),
                              c.horizon);
        std::vector<std::optional<ProcessorIndex>> where(trace.jobs.size());
        std::vector<bool> finished_running(trace.jobs.size(), false);
        for (const auto& seg : trace.segments) {
            std::vector<bool> seen(trace.jobs.size(), false);
            for (ProcessorIndex p = 0; p < seg.assignment.size(); ++p) {
                JobIndex j = seg.assignment[p];
                if (j == kIdle) continue;
                seen[j] = true;
                EXPECT_FALSE(finished_running[j]) << "job resumed after a pause";
                if (where[j])
                    EXPECT_EQ(*where[j], p);
                else
                    where[j] = p;
            }
            for (JobIndex j = 0; j < trace.jobs.size(); ++j)
                if (where[j] && !seen[j]) finished_running[j] = true;
        }
        for (const auto& e : trace.events) {
            EXPECT_NE(e.kind, EventKind::Migration);
            EXPECT_NE(e.kind, EventKind::Preemption);
        }
        for (JobIndex j = 0; j < trace.jobs.size(); ++j)
            if (finished_running[j]) EXPECT_TRUE(trace.jobs[j].completion);
    }
}

TEST(SimulatorProperty, SimulationIsDeterministic) {
    Rng rng(205);
    for (int iter = 0; iter < 40; ++iter) {
        auto c = random_case(rng);
        for (auto policy : {PolicyConfig::gedf_h(), PolicyConfig::np_gedf_h()}) {
            auto a = simulate(c.tasks, c.platform, ArrivalSource::sporadic_random(iter), policy, c.horizon);
            auto b = simulate(c.tasks, c.platform, ArrivalSource::sporadic_random(iter), policy, c.horizon);
            EXPECT_EQ(trace_to_jsonl(a), trace_to_jsonl(b));
        }
    }
}

TEST(Simulator, ResponseStatistics) {
    auto trace = simulate(growth_tasks(), growth_platform(), ArrivalSource::periodic(), PolicyConfig::gedf_h(), 7);
    auto r = response_times(trace);
    EXPECT_EQ(r.at(1).max, Rational(2));
    EXPECT_EQ(r.at(1).mean, Rational(2));
    EXPECT_EQ(r.at(1).per_job.size(), 3u);
    EXPECT_EQ(r.at(1).censored, 1u);
}
