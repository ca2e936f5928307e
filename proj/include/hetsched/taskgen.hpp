#pragma once

// Random task systems in the style of the QuickIA experiments: up to two
// tasks with utilization in (1, 2], then tasks from one utilization class
// until the total passes the target, with the last task trimmed so that the
// total equals the target exactly.

#include "hetsched/io.hpp"
#include "hetsched/model.hpp"
#include "hetsched/random.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hetsched {

enum class UtilClass { Light, Medium, Heavy };

inline const char* to_string(UtilClass c) {
    switch (c) {
        case UtilClass::Light: return "light";
        case UtilClass::Medium: return "medium";
        case UtilClass::Heavy: return "heavy";
    }
    return "?";
}

inline UtilClass parse_util_class(const std::string& s) {
    if (s == "light") return UtilClass::Light;
    if (s == "medium") return UtilClass::Medium;
    if (s == "heavy") return UtilClass::Heavy;
    throw std::invalid_argument("unknown utilization class '" + s + "'");
}

struct RationalRange {
    Rational lo;
    Rational hi;
};

/// Two unit-speed and two double-speed processors.
inline Platform quickia_platform() { return Platform({{1, 2}, {2, 2}}); }

struct GenConfig {
    Platform platform = quickia_platform();
    RationalRange period_range{10, 600};
    std::optional<Rational> fixed_period;  // period_mode = fixed(value)
    UtilClass util_class = UtilClass::Medium;
    RationalRange light_range{make_rational(1, 1000), make_rational(1, 20)};
    RationalRange medium_range{make_rational(1, 20), make_rational(1, 5)};
    RationalRange heavy_range{make_rational(1, 5), make_rational(1, 2)};
    std::optional<RationalRange> util_range_override;  // replaces the class range
    RationalRange phi1_util_range{1, 2};                // open at lo
    std::size_t max_phi1_count = 2;
    std::optional<Rational> target_usum;  // defaults to the platform's R_sum
    std::uint64_t quantization_denominator = 1'000'000;
    std::uint64_t seed = 0;
    std::size_t max_retries = 1000;

    const RationalRange& class_range() const {
        if (util_range_override) return *util_range_override;
        switch (util_class) {
            case UtilClass::Light: return light_range;
            case UtilClass::Medium: return medium_range;
            case UtilClass::Heavy: return heavy_range;
        }
        return medium_range;
    }

    Rational target() const { return target_usum.value_or(platform.r_sum()); }

    /// Heavy-task count cap, clamped so generated systems satisfy the
    /// |Phi_1| <= |Psi_1| condition.
    std::size_t phi1_cap() const {
        if (platform.class_count() < 2) return 0;
        return std::min(max_phi1_count, psi_set(platform, 1).count);
    }

    void validate() const {
        auto check_range = [](const RationalRange& r, const char* what, bool open_lo) {
            if (r.lo < 0 || r.hi < r.lo || (open_lo && r.hi == r.lo))
                throw std::invalid_argument(std::string("empty or negative range: ") + what);
        };
        check_range(period_range, "period_range", false);
        if (period_range.lo <= 0) throw std::invalid_argument("periods must be positive");
        if (fixed_period && *fixed_period <= 0) throw std::invalid_argument("fixed period must be positive");
        check_range(class_range(), "utilization class range", false);
        if (class_range().hi <= 0) throw std::invalid_argument("utilization class range must contain positive values");
        check_range(phi1_util_range, "phi1 utilization range", true);
        if (quantization_denominator == 0) throw std::invalid_argument("quantization denominator must be positive");
        if (target() <= 0 || platform.r_sum() < target())
            throw std::invalid_argument("target utilization must lie in (0, R_sum]");
    }
};

inline json gen_config_to_json(const GenConfig& c) {
    json j;
    j["platform"] = platform_to_json(c.platform);
    j["period_range"] = {format_rational(c.period_range.lo), format_rational(c.period_range.hi)};
    j["period_mode"] = c.fixed_period ? json("fixed(" + format_rational(*c.fixed_period) + ")") : json("uniform");
    j["util_class"] = to_string(c.util_class);
    j["util_range"] = {format_rational(c.class_range().lo), format_rational(c.class_range().hi)};
    j["phi1_util_range"] = {format_rational(c.phi1_util_range.lo), format_rational(c.phi1_util_range.hi)};
    j["max_phi1_count"] = c.phi1_cap();
    j["target_usum"] = format_rational(c.target());
    j["quantization_denominator"] = c.quantization_denominator;
    j["seed"] = c.seed;
    j["generator"] = kGeneratorName;
    return j;
}

/// Generates one task system; `stream` selects an independent sub-stream of
/// the configured seed (batch index).
inline TaskSystem generate(const GenConfig& config, std::uint64_t stream = 0) {
    config.validate();
    Rng rng(config.seed, stream);
    const Rational target = config.target();
    const std::uint64_t den = config.quantization_denominator;

    auto draw_period = [&]() -> Rational {
        if (config.fixed_period) return *config.fixed_period;
        return rng.uniform_grid(config.period_range.lo, config.period_range.hi, den);
    };
    auto draw_class_util = [&]() -> Rational {
        const auto& r = config.class_range();
        // Zero utilization is not a valid task; fall back to the open range.
        return rng.uniform_grid(r.lo, r.hi, den, r.lo == 0);
    };

    for (std::size_t attempt = 0; attempt <= config.max_retries; ++attempt) {
        std::vector<std::pair<Rational, Rational>> drawn;  // (utilization, period)
        Rational sum = 0;
        std::size_t heavy = rng.uniform_int(0, config.phi1_cap());
        for (std::size_t i = 0; i < heavy; ++i) {
            Rational u = rng.uniform_grid(config.phi1_util_range.lo, config.phi1_util_range.hi, den, true);
            sum += u;
            drawn.emplace_back(std::move(u), draw_period());
        }
        if (target < sum) continue;
        while (sum < target) {
            Rational u = draw_class_util();
            sum += u;
            drawn.emplace_back(std::move(u), draw_period());
        }
        if (target < sum) drawn.back().first -= sum - target;

        std::vector<SporadicTask> tasks;
        TaskId id = 1;
        for (const auto& [u, p] : drawn) tasks.emplace_back(id++, u * p, p);
        TaskSystem system(std::move(tasks));
        if (validate_task_system(system, config.platform).accepted) return system;
    }
    throw std::runtime_error("task generation failed after " + std::to_string(config.max_retries + 1) + " attempts");
}

}  // namespace hetsched
