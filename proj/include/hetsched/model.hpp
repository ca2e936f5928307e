#pragma once

// Task and platform model: sporadic implicit-deadline tasks on a uniform
// heterogeneous multiprocessor, plus the feasibility gate that every
// GEDF-H analysis and simulation relies on.

#include "hetsched/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetsched {

using TaskId = std::uint64_t;

class SporadicTask {
public:
    SporadicTask(TaskId id, Rational exec, Rational period)
        : id_(id), exec_(std::move(exec)), period_(std::move(period)) {
        if (id_ == 0) throw std::invalid_argument("task id must be positive");
        if (exec_ <= 0) throw std::invalid_argument("task exec must be positive");
        if (period_ <= 0) throw std::invalid_argument("task period must be positive");
        utilization_ = exec_ / period_;
    }

    TaskId id() const { return id_; }
    const Rational& exec() const { return exec_; }
    const Rational& period() const { return period_; }
    // Relative deadline; always equal to the period.
    const Rational& deadline() const { return period_; }
    const Rational& utilization() const { return utilization_; }

    friend bool operator==(const SporadicTask& a, const SporadicTask& b) {
        return a.id_ == b.id_ && a.exec_ == b.exec_ && a.period_ == b.period_;
    }

private:
    TaskId id_;
    Rational exec_;
    Rational period_;
    Rational utilization_;
};

/// Tasks kept sorted by id, which is also the EDF tie-break order.
class TaskSystem {
public:
    TaskSystem() = default;
    explicit TaskSystem(std::vector<SporadicTask> tasks) : tasks_(std::move(tasks)) {
        std::sort(tasks_.begin(), tasks_.end(),
                  [](const SporadicTask& a, const SporadicTask& b) { return a.id() < b.id(); });
        for (std::size_t i = 1; i < tasks_.size(); ++i)
            if (tasks_[i].id() == tasks_[i - 1].id())
                throw std::invalid_argument("duplicate task id " + std::to_string(tasks_[i].id()));
    }

    const std::vector<SporadicTask>& tasks() const { return tasks_; }
    std::size_t size() const { return tasks_.size(); }
    bool empty() const { return tasks_.empty(); }
    const SporadicTask& operator[](std::size_t i) const { return tasks_[i]; }
    auto begin() const { return tasks_.begin(); }
    auto end() const { return tasks_.end(); }

    /// Position of a task in id order, or nullopt.
    std::optional<std::size_t> index_of(TaskId id) const {
        auto it = std::lower_bound(tasks_.begin(), tasks_.end(), id,
                                   [](const SporadicTask& t, TaskId v) { return t.id() < v; });
        if (it == tasks_.end() || it->id() != id) return std::nullopt;
        return static_cast<std::size_t>(it - tasks_.begin());
    }

    const SporadicTask& by_id(TaskId id) const {
        auto idx = index_of(id);
        if (!idx) throw std::out_of_range("unknown task id " + std::to_string(id));
        return tasks_[*idx];
    }

    TaskSystem without(TaskId id) const {
        std::vector<SporadicTask> rest;
        for (const auto& t : tasks_)
            if (t.id() != id) rest.push_back(t);
        return TaskSystem(std::move(rest));
    }

    Rational max_period() const {
        Rational best = 0;
        for (const auto& t : tasks_) best = rmax(best, t.period());
        return best;
    }

    Rational min_period() const {
        if (tasks_.empty()) return 0;
        Rational best = tasks_.front().period();
        for (const auto& t : tasks_) best = rmin(best, t.period());
        return best;
    }

    friend bool operator==(const TaskSystem& a, const TaskSystem& b) { return a.tasks_ == b.tasks_; }

private:
    std::vector<SporadicTask> tasks_;
};

struct SpeedClass {
    Rational speed;
    std::size_t count = 0;

    friend bool operator==(const SpeedClass&, const SpeedClass&) = default;
};

using ProcessorIndex = std::size_t;

/// Processors are numbered 0..m-1 from the slowest class upwards; the
/// user-facing id of processor k is k + 1 (M_1 is a slowest processor).
class Platform {
public:
    explicit Platform(std::vector<SpeedClass> classes) : classes_(std::move(classes)) {
        if (classes_.empty()) throw std::invalid_argument("platform needs at least one speed class");
        for (std::size_t i = 0; i < classes_.size(); ++i) {
            const auto& c = classes_[i];
            if (c.speed <= 0) throw std::invalid_argument("processor speed must be positive");
            if (c.count == 0) throw std::invalid_argument("speed class count must be >= 1");
            if (i > 0 && !(classes_[i - 1].speed < c.speed))
                throw std::invalid_argument("speed classes must be strictly increasing");
            for (std::size_t k = 0; k < c.count; ++k) {
                speeds_.push_back(c.speed);
                class_of_.push_back(i);
            }
            r_sum_ += c.speed * c.count;
        }
    }

    const std::vector<SpeedClass>& classes() const { return classes_; }
    std::size_t class_count() const { return classes_.size(); }
    std::size_t m() const { return speeds_.size(); }
    const Rational& r_sum() const { return r_sum_; }
    const Rational& alpha_max() const { return classes_.back().speed; }
    const Rational& alpha_min() const { return classes_.front().speed; }
    const Rational& speed(ProcessorIndex p) const { return speeds_.at(p); }
    std::size_t class_of(ProcessorIndex p) const { return class_of_.at(p); }
    const std::vector<Rational>& speeds() const { return speeds_; }

    /// The k fastest processor speeds, fastest first.
    std::vector<Rational> fastest_speeds(std::size_t k) const {
        k = std::min(k, speeds_.size());
        return {speeds_.rbegin(), speeds_.rbegin() + static_cast<std::ptrdiff_t>(k)};
    }

    friend bool operator==(const Platform& a, const Platform& b) { return a.classes_ == b.classes_; }

private:
    std::vector<SpeedClass> classes_;
    std::vector<Rational> speeds_;
    std::vector<std::size_t> class_of_;
    Rational r_sum_ = 0;
};

inline Rational total_utilization(const TaskSystem& tasks) {
    Rational sum = 0;
    for (const auto& t : tasks) sum += t.utilization();
    return sum;
}

inline Rational total_capacity(const Platform& platform) { return platform.r_sum(); }

/// Ids of tasks whose utilization strictly exceeds the threshold.
inline std::vector<TaskId> phi_set(const TaskSystem& tasks, const Rational& speed_threshold) {
    std::vector<TaskId> ids;
    for (const auto& t : tasks)
        if (speed_threshold < t.utilization()) ids.push_back(t.id());
    return ids;
}

struct ProcessorSubset {
    std::vector<ProcessorIndex> processors;
    std::size_t count = 0;
};

/// Processors in the classes strictly above the first `class_index`
/// classes. class_index 0 is the whole platform.
inline ProcessorSubset psi_set(const Platform& platform, std::size_t class_index) {
    if (class_index >= platform.class_count())
        throw std::out_of_range("psi_set: class index " + std::to_string(class_index) +
                                " out of range [0, " + std::to_string(platform.class_count()) + ")");
    ProcessorSubset out;
    for (ProcessorIndex p = 0; p < platform.m(); ++p)
        if (platform.class_of(p) >= class_index) out.processors.push_back(p);
    out.count = out.processors.size();
    return out;
}

/// Slowest class speed that is at least the task's utilization (v_i).
inline const Rational& min_speed_class(const SporadicTask& task, const Platform& platform) {
    for (const auto& c : platform.classes())
        if (task.utilization() <= c.speed) return c.speed;
    throw std::domain_error("task " + std::to_string(task.id()) + " utilization " +
                            format_rational(task.utilization()) + " exceeds alpha_max " +
                            format_rational(platform.alpha_max()));
}

struct Eq1Check {
    std::size_t class_index = 0;  // i, 1 <= i < z
    std::size_t phi_count = 0;
    std::size_t psi_count = 0;
    bool ok = true;
};

struct FeasibilityReport {
    bool accepted = true;
    Rational u_sum;
    Rational r_sum;
    std::map<TaskId, bool> per_task_speed_ok;
    std::vector<Eq1Check> eq1_checks;

    bool capacity_ok() const { return u_sum <= r_sum; }

    std::vector<std::string> failures() const {
        std::vector<std::string> out;
        if (!capacity_ok())
            out.push_back("U_sum " + format_rational(u_sum) + " exceeds R_sum " + format_rational(r_sum));
        for (const auto& [id, ok] : per_task_speed_ok)
            if (!ok) out.push_back("task " + std::to_string(id) + " utilization exceeds alpha_max");
        for (const auto& c : eq1_checks)
            if (!c.ok)
                out.push_back("|Phi_i| <= |Psi_i| violated at i=" + std::to_string(c.class_index) + ": " +
                              std::to_string(c.phi_count) + " > " + std::to_string(c.psi_count));
        return out;
    }
};

inline FeasibilityReport validate_task_system(const TaskSystem& tasks, const Platform& platform) {
    FeasibilityReport report;
    report.u_sum = total_utilization(tasks);
    report.r_sum = platform.r_sum();
    bool ok = report.capacity_ok();
    for (const auto& t : tasks) {
        bool speed_ok = t.utilization() <= platform.alpha_max();
        report.per_task_speed_ok[t.id()] = speed_ok;
        ok = ok && speed_ok;
    }
    // Class i (1-based) has speed classes()[i-1]; Psi_i covers classes i+1..z.
    for (std::size_t i = 1; i < platform.class_count(); ++i) {
        Eq1Check c;
        c.class_index = i;
        c.phi_count = phi_set(tasks, platform.classes()[i - 1].speed).size();
        c.psi_count = psi_set(platform, i).count;
        c.ok = c.phi_count <= c.psi_count;
        ok = ok && c.ok;
        report.eq1_checks.push_back(c);
    }
    report.accepted = ok;
    return report;
}

}  // namespace hetsched
