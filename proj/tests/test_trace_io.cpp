#include "hetsched/oracle.hpp"
#include "hetsched/trace_io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace hetsched;
using namespace hetsched::testing;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    for (std::string line; std::getline(ss, line);) out.push_back(line);
    return out;
}

std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

}  // namespace

TEST(TraceIo, Example1RecordsLookRight) {
    auto trace = simulate(example1_tasks(), example1_platform(), ArrivalSource::periodic(), PolicyConfig::gedf_h(), 2);
    auto lines = lines_of(trace_to_jsonl(trace));
    ASSERT_FALSE(lines.empty());
    EXPECT_NE(lines[0].find("\"header\""), std::string::npos);
    bool found = false;
    for (const auto& l : lines)
        found = found || l == R"({"event":"migration","job":"T4.1","proc":[2,1],"t":"1"})";
    EXPECT_TRUE(found);
    EXPECT_NE(std::find(lines.begin(), lines.end(),
                        R"({"proc":[{"id":1,"job":"T3.1"},{"id":2,"job":"T1.1"},{"id":3,"job":"T2.1"}],"t0":"0","t1":"4/5"})"),
              lines.end());
}

TEST(TraceIo, RoundTripPreservesTheTraceProperty) {
    Rng rng(501);
    for (int iter = 0; iter < 60; ++iter) {
        Platform p = random_platform(rng, 3, 5);
        TaskSystem t = random_accepted_tasks(rng, p, rng.uniform_int(0, 5));
        for (auto policy : {PolicyConfig::gedf_h(), PolicyConfig::np_gedf_h(),
                            PolicyConfig::gedf_plain(Selector::AdversarialSlowForHeavy)}) {
            auto trace = simulate(t, p, ArrivalSource::sporadic_random(iter), policy, 15);
            std::string text = trace_to_jsonl(trace);
            auto back = read_trace_jsonl(text);
            EXPECT_EQ(trace_to_jsonl(back), text);
            ASSERT_EQ(back.jobs.size(), trace.jobs.size());
            for (JobIndex j = 0; j < trace.jobs.size(); ++j) {
                EXPECT_EQ(back.jobs[j].completed_work, trace.jobs[j].completed_work);
                EXPECT_EQ(back.jobs[j].completion, trace.jobs[j].completion);
                EXPECT_EQ(back.jobs[j].first_start, trace.jobs[j].first_start);
                EXPECT_EQ(back.jobs[j].deadline, trace.jobs[j].deadline);
            }
            EXPECT_EQ(back.policy.policy, trace.policy.policy);
            EXPECT_EQ(back.policy.selector, trace.policy.selector);
        }
    }
}

TEST(TraceIo, ReplayedMutationIsCaughtByP0) {
    auto trace = simulate(example1_tasks(), example1_platform(), ArrivalSource::periodic(), PolicyConfig::gedf_h(), 2);
    std::string text = trace_to_jsonl(trace);
    const std::string good = R"({"id":1,"job":"T3.1"},{"id":2,"job":"T1.1"})";
    const std::string bad = R"({"id":1,"job":"T1.1"},{"id":2,"job":"T3.1"})";
    auto pos = text.find(good);
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, good.size(), bad);
    auto v = check_assignment_legality(read_trace_jsonl(text));
    EXPECT_FALSE(v.ok());
    EXPECT_EQ(v.samples.at(0).time, Rational(0));
}

TEST(TraceIo, MalformedTracesAreRejected) {
    auto trace = simulate(growth_tasks(), growth_platform(), ArrivalSource::periodic(), PolicyConfig::gedf_h(), 4);
    auto lines = lines_of(trace_to_jsonl(trace));

    EXPECT_THROW(read_trace_jsonl(std::string()), ParseError);
    EXPECT_THROW(read_trace_jsonl(join({lines.begin() + 1, lines.end()})), ParseError);

    auto truncated = lines;
    truncated.pop_back();
    while (!truncated.empty() && truncated.back().find("\"t0\"") == std::string::npos) truncated.pop_back();
    truncated.pop_back();
    EXPECT_THROW(read_trace_jsonl(join(truncated)), ParseError);

    auto garbage = lines;
    garbage.insert(garbage.begin() + 1, "{not json");
    try {
        read_trace_jsonl(join(garbage));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }

    auto unknown = lines;
    unknown.insert(unknown.begin() + 1, R"({"t0":"0","t1":"1","proc":[{"id":1,"job":"T9.1"}]})");
    EXPECT_THROW(read_trace_jsonl(join(unknown)), ParseError);
}
