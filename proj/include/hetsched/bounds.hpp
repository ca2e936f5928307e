#pragma once

// Response-time bounds for preemptive and non-preemptive GEDF-H:
//   x = max(0, (E - p_min) / (R_sum - U_{m-1})),  bound_i = x + 2 p_i
// where E is the preemptive pending-work term E-bar or the non-preemptive
// term E*.

#include "hetsched/model.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetsched {

enum class BoundMode { Preemptive, NonPreemptive };

inline const char* to_string(BoundMode m) { return m == BoundMode::Preemptive ? "preemptive" : "nonpreemptive"; }

struct BoundReport {
    BoundMode mode = BoundMode::Preemptive;
    Rational u_bar;   // sum of the m-1 largest utilizations
    Rational e_term;  // E-bar (preemptive) or E* (non-preemptive)
    Rational x;
    Rational p_min;
    Rational r_sum;
    std::map<TaskId, Rational> per_task_bound;
};

/// Sum of the min(m-1, n) largest utilizations.
inline Rational u_bar(const TaskSystem& tasks, std::size_t m) {
    if (m == 0) throw std::invalid_argument("u_bar: m must be >= 1");
    std::vector<Rational> us;
    for (const auto& t : tasks) us.push_back(t.utilization());
    std::sort(us.begin(), us.end(), [](const Rational& a, const Rational& b) { return b < a; });
    Rational sum = 0;
    for (std::size_t i = 0; i < us.size() && i + 1 < m; ++i) sum += us[i];
    return sum;
}

namespace detail {

// Maximizes sum over matched pairs of (base_i - w_i / speed_j), choosing
// exactly speeds.size() tasks and matching each to one speed. Sorting
// candidates by w descending and speeds descending, an optimal matching pairs
// them in the same order (rearrangement), so a take/skip DP over the sorted
// candidates suffices.
struct PairTerm {
    Rational base;
    Rational w;
};

inline std::optional<Rational> best_pairing(std::vector<PairTerm> items, const std::vector<Rational>& speeds_desc) {
    const std::size_t k = speeds_desc.size();
    if (k == 0) return Rational(0);
    if (items.size() < k) return std::nullopt;
    std::stable_sort(items.begin(), items.end(), [](const PairTerm& a, const PairTerm& b) { return b.w < a.w; });
    std::vector<Rational> inv(k);
    for (std::size_t j = 0; j < k; ++j) inv[j] = 1 / speeds_desc[j];
    std::vector<std::optional<Rational>> dp(k + 1), next(k + 1);
    dp[0] = Rational(0);
    for (const auto& item : items) {
        next = dp;
        for (std::size_t j = 1; j <= k; ++j) {
            if (!dp[j - 1]) continue;
            Rational cand = *dp[j - 1] + item.base - item.w * inv[j - 1];
            if (!next[j] || *next[j] < cand) next[j] = std::move(cand);
        }
        dp.swap(next);
    }
    return dp[k];
}

inline std::vector<Rational> phi_speeds(const TaskSystem& tasks, const Platform& platform) {
    std::size_t slots = std::min(platform.m() - 1, tasks.size());
    return platform.fastest_speeds(slots);
}

}  // namespace detail

/// Largest sum of e_i + u_i (p_i - e_i / alpha_j) over sets of min(m-1, n)
/// tasks matched one-to-one with the fastest processor speeds.
inline Rational e_bar(const TaskSystem& tasks, const Platform& platform) {
    auto speeds = detail::phi_speeds(tasks, platform);
    std::vector<detail::PairTerm> items;
    for (const auto& t : tasks) {
        Rational w = t.utilization() * t.exec();
        items.push_back({t.exec() + t.utilization() * t.period(), w});
    }
    return *detail::best_pairing(std::move(items), speeds);
}

/// Largest sum of e_i + u_i e_i (1 - 1/alpha_j) over matched sets as for
/// e_bar, plus the largest execution cost of a task left out of the set
/// (zero when every task is in the set).
inline Rational e_star(const TaskSystem& tasks, const Platform& platform) {
    auto speeds = detail::phi_speeds(tasks, platform);
    auto item_of = [](const SporadicTask& t) {
        Rational w = t.utilization() * t.exec();
        return detail::PairTerm{t.exec() + w, w};
    };
    if (tasks.size() <= speeds.size()) {
        std::vector<detail::PairTerm> items;
        for (const auto& t : tasks) items.push_back(item_of(t));
        return *detail::best_pairing(std::move(items), speeds);
    }
    std::optional<Rational> best;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        std::vector<detail::PairTerm> items;
        for (std::size_t i = 0; i < tasks.size(); ++i)
            if (i != k) items.push_back(item_of(tasks[i]));
        auto v = detail::best_pairing(std::move(items), speeds);
        if (!v) continue;
        Rational total = *v + tasks[k].exec();
        if (!best || *best < total) best = std::move(total);
    }
    return best.value_or(Rational(0));
}

inline BoundReport compute_bounds(const TaskSystem& tasks, const Platform& platform, BoundMode mode) {
    auto feasibility = validate_task_system(tasks, platform);
    if (!feasibility.accepted)
        throw std::domain_error("response-time bound undefined for a rejected task system: " +
                                feasibility.failures().front());
    BoundReport r;
    r.mode = mode;
    r.u_bar = u_bar(tasks, platform.m());
    r.e_term = mode == BoundMode::Preemptive ? e_bar(tasks, platform) : e_star(tasks, platform);
    r.p_min = tasks.min_period();
    r.r_sum = platform.r_sum();
    Rational denom = r.r_sum - r.u_bar;
    if (!(0 < denom)) throw std::logic_error("R_sum - U_{m-1} must be positive for an accepted system");
    r.x = rmax(0, (r.e_term - r.p_min) / denom);
    for (const auto& t : tasks) r.per_task_bound[t.id()] = r.x + 2 * t.period();
    return r;
}

}  // namespace hetsched
