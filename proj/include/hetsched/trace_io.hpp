#pragma once

// JSON-lines trace export and replay. The first record is a header carrying
// the task system, platform, policy and horizon; then event records
//   {"t":"1","event":"migration","job":"T4.1","proc":[2,1]}
// and segment records
//   {"t0":"4/5","t1":"1","proc":[{"id":2,"job":"T4.1"}]}
// in time order (events before the segment starting at the same instant).
// Processor ids are 1-based, slowest class first.

#include "hetsched/io.hpp"
#include "hetsched/simulator.hpp"

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace hetsched {

inline json event_to_json(const ScheduleTrace& trace, const TraceEvent& e) {
    json j;
    j["t"] = format_rational(e.time);
    j["event"] = to_string(e.kind);
    j["job"] = to_string(trace.jobs[e.job].ref);
    if (!e.processors.empty()) {
        json procs = json::array();
        for (auto p : e.processors) procs.push_back(p + 1);
        j["proc"] = procs;
    }
    return j;
}

inline json segment_to_json(const ScheduleTrace& trace, const Segment& s) {
    json procs = json::array();
    for (ProcessorIndex p = 0; p < s.assignment.size(); ++p)
        if (s.assignment[p] != kIdle) procs.push_back({{"id", p + 1}, {"job", to_string(trace.jobs[s.assignment[p]].ref)}});
    return {{"t0", format_rational(s.start)}, {"t1", format_rational(s.end)}, {"proc", procs}};
}

inline json trace_header(const ScheduleTrace& trace) {
    json h;
    h["format"] = "hetsched-trace";
    h["version"] = 1;
    h["horizon"] = format_rational(trace.horizon);
    h["policy"] = to_string(trace.policy.policy);
    h["selector"] = trace.policy.selector ? json(to_string(*trace.policy.selector)) : json(nullptr);
    h["system"] = task_system_to_json(trace.tasks, trace.platform);
    return {{"header", h}};
}

inline void write_trace_jsonl(std::ostream& out, const ScheduleTrace& trace) {
    out << trace_header(trace).dump() << '\n';
    std::size_t e = 0;
    for (const auto& seg : trace.segments) {
        while (e < trace.events.size() && !(seg.start < trace.events[e].time))
            out << event_to_json(trace, trace.events[e++]).dump() << '\n';
        out << segment_to_json(trace, seg).dump() << '\n';
    }
    while (e < trace.events.size()) out << event_to_json(trace, trace.events[e++]).dump() << '\n';
}

inline std::string trace_to_jsonl(const ScheduleTrace& trace) {
    std::ostringstream ss;
    write_trace_jsonl(ss, trace);
    return ss.str();
}

/// Rebuilds a trace from its JSON-lines form. Work accounting, completion
/// and first-start times are recomputed from the records.
inline ScheduleTrace read_trace_jsonl(std::istream& in) {
    ScheduleTrace trace;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::map<JobRef, JobIndex> by_ref;

    auto fail = [&](const std::string& what) -> ParseError { return ParseError("trace: " + what, line_no, 1); };
    auto job_of = [&](const json& rec) -> JobIndex {
        JobRef ref;
        try {
            ref = parse_job_ref(rec.at("job").get<std::string>());
        } catch (const std::exception& ex) {
            throw fail(ex.what());
        }
        auto it = by_ref.find(ref);
        if (it == by_ref.end()) throw fail("job " + to_string(ref) + " used before its release record");
        return it->second;
    };
    auto rational_at = [&](const json& rec, const char* key) {
        if (!rec.contains(key)) throw fail(std::string("missing \"") + key + "\"");
        return rational_from_json(rec[key], std::string("line ") + std::to_string(line_no) + "." + key);
    };
    auto processor_at = [&](const json& v) -> ProcessorIndex {
        if (!v.is_number_unsigned() || v.get<std::size_t>() == 0 || v.get<std::size_t>() > trace.platform.m())
            throw fail("processor id out of range");
        return v.get<std::size_t>() - 1;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("trace: ") + e.what(), line_no, e.byte);
        }
        if (!have_header) {
            if (!rec.contains("header")) throw fail("first record must be the header");
            const json& h = rec["header"];
            auto sys = task_system_from_json(h.at("system"));
            trace.tasks = std::move(sys.tasks);
            trace.platform = std::move(sys.platform);
            trace.horizon = rational_from_json(h.at("horizon"), "header.horizon");
            try {
                trace.policy.policy = parse_policy(h.at("policy").get<std::string>());
                if (h.contains("selector") && !h["selector"].is_null())
                    trace.policy.selector = parse_selector(h["selector"].get<std::string>());
            } catch (const std::exception& ex) {
                throw fail(ex.what());
            }
            trace.jobs_of_task.resize(trace.tasks.size());
            have_header = true;
            continue;
        }
        if (rec.contains("event")) {
            TraceEvent e;
            e.time = rational_at(rec, "t");
            try {
                e.kind = parse_event_kind(rec["event"].get<std::string>());
            } catch (const std::exception& ex) {
                throw fail(ex.what());
            }
            if (e.kind == EventKind::Release) {
                JobRef ref;
                try {
                    ref = parse_job_ref(rec.at("job").get<std::string>());
                } catch (const std::exception& ex) {
                    throw fail(ex.what());
                }
                auto ti = trace.tasks.index_of(ref.task);
                if (!ti) throw fail("release of unknown task " + std::to_string(ref.task));
                if (ref.index != trace.jobs_of_task[*ti].size() + 1) throw fail("job releases out of order for " + to_string(ref));
                const SporadicTask& task = trace.tasks[*ti];
                Job job;
                job.ref = ref;
                job.release = e.time;
                job.deadline = e.time + task.period();
                job.workload = task.exec();
                e.job = trace.jobs.size();
                by_ref[ref] = e.job;
                trace.jobs_of_task[*ti].push_back(e.job);
                trace.jobs.push_back(std::move(job));
            } else {
                e.job = job_of(rec);
            }
            if (rec.contains("proc"))
                for (const auto& p : rec["proc"]) e.processors.push_back(processor_at(p));
            if (e.kind == EventKind::Completion) trace.jobs[e.job].completion = e.time;
            trace.events.push_back(std::move(e));
        } else if (rec.contains("t0")) {
            Segment s;
            s.start = rational_at(rec, "t0");
            s.end = rational_at(rec, "t1");
            if (!(s.start < s.end)) throw fail("segment with t0 >= t1");
            Rational expected = trace.segments.empty() ? Rational(0) : trace.segments.back().end;
            if (s.start != expected) throw fail("segments are not contiguous at " + format_rational(s.start));
            s.assignment.assign(trace.platform.m(), kIdle);
            for (const auto& p : rec.at("proc")) {
                ProcessorIndex idx = processor_at(p.at("id"));
                if (s.assignment[idx] != kIdle) throw fail("processor assigned twice in one segment");
                JobIndex j = job_of(p);
                if (std::find(s.assignment.begin(), s.assignment.end(), j) != s.assignment.end())
                    throw fail("job on two processors in one segment");
                s.assignment[idx] = j;
                Job& job = trace.jobs[j];
                job.completed_work += trace.platform.speed(idx) * (s.end - s.start);
                if (!job.first_start) job.first_start = s.start;
            }
            trace.segments.push_back(std::move(s));
        } else {
            throw fail("unrecognized record");
        }
    }
    if (!have_header) throw ParseError("trace: empty input");
    if (!trace.segments.empty() && trace.segments.back().end != trace.horizon)
        throw ParseError("trace: segments do not end at the horizon");
    return trace;
}

inline ScheduleTrace read_trace_jsonl(const std::string& text) {
    std::istringstream ss(text);
    return read_trace_jsonl(ss);
}

}  // namespace hetsched
