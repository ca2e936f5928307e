#pragma once

#include "hetsched/model.hpp"
#include "hetsched/random.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace hetsched::testing {

inline std::string data_path(const std::string& name) { return std::string(HETSCHED_DATA_DIR) + "/" + name; }

inline Rational q(long num, long den = 1) { return make_rational(num, den); }

// Tasks are written (exec, period).
inline TaskSystem system_of(const std::vector<std::pair<Rational, Rational>>& tasks) {
    std::vector<SporadicTask> out;
    TaskId id = 1;
    for (const auto& [e, p] : tasks) out.emplace_back(id++, e, p);
    return TaskSystem(std::move(out));
}

inline TaskSystem example1_tasks() { return system_of({{2, 1}, {2, 1}, {1, 1}, {1, 1}}); }
inline Platform example1_platform() { return Platform({{1, 1}, {q(5, 2), 2}}); }

inline TaskSystem growth_tasks() { return system_of({{2, 2}, {4, 2}}); }
inline Platform growth_platform() { return Platform({{1, 1}, {2, 1}}); }

inline TaskSystem counterexample_tasks() { return system_of({{2, 1}, {2, 1}}); }
inline Platform counterexample_platform(std::size_t m) { return Platform({{1, m - 1}, {2, 1}}); }

// Small random platform: 1..max_classes classes with speeds from a short
// list, 1..max_count processors each, at most max_m processors in total.
inline Platform random_platform(Rng& rng, std::size_t max_classes, std::size_t max_m) {
    static const std::vector<Rational> speeds = {q(1, 2), q(1), q(3, 2), q(2), q(5, 2), q(3)};
    std::size_t classes = rng.uniform_int(1, max_classes);
    std::vector<std::size_t> pick;
    while (pick.size() < classes) {
        std::size_t s = rng.uniform_int(0, speeds.size() - 1);
        bool dup = false;
        for (auto p : pick) dup = dup || p == s;
        if (!dup) pick.push_back(s);
    }
    std::sort(pick.begin(), pick.end());
    std::vector<SpeedClass> out;
    std::size_t total = 0;
    for (auto s : pick) {
        if (total >= max_m) break;
        std::size_t count = rng.uniform_int(1, std::min<std::size_t>(2, max_m - total));
        out.push_back({speeds[s], count});
        total += count;
    }
    return Platform(std::move(out));
}

// Random tasks with periods in {1..max_period}/den and utilization on a
// 1/den grid of (0, max_u].
inline TaskSystem random_tasks(Rng& rng, std::size_t n, const Rational& max_u, long max_period = 6, long den = 4) {
    std::vector<SporadicTask> out;
    for (std::size_t i = 0; i < n; ++i) {
        Rational p = q(static_cast<long>(rng.uniform_int(1, static_cast<std::uint64_t>(max_period))));
        Rational u = rng.uniform_grid(0, max_u, static_cast<std::uint64_t>(den), true);
        out.emplace_back(i + 1, u * p, p);
    }
    return TaskSystem(std::move(out));
}

// Random accepted system: tasks are redrawn until the feasibility check
// passes, dropping the last task when it keeps failing.
inline TaskSystem random_accepted_tasks(Rng& rng, const Platform& platform, std::size_t n, long max_period = 6,
                                        long den = 4) {
    for (;;) {
        TaskSystem t = random_tasks(rng, n, platform.alpha_max(), max_period, den);
        if (validate_task_system(t, platform).accepted) return t;
        if (n > 0 && rng.uniform_int(0, 3) == 0) --n;
    }
}

}  // namespace hetsched::testing
