#pragma once

// JSON task-system files:
//   {"tasks":[{"id":1,"exec":"2","period":"1"}],
//    "platform":{"classes":[{"speed":"1","count":1},{"speed":"5/2","count":2}]}}
// Rationals are read from "p/q" strings, decimal strings or JSON integers and
// written back as lowest-terms "p/q" strings.

#include "hetsched/model.hpp"

#include <json.hpp>

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hetsched {

using nlohmann::json;

/// Malformed input file; carries a 1-based line/column when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ")"
                                  : what),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct TaskSystemFile {
    TaskSystem tasks;
    Platform platform;
};

inline Rational rational_from_json(const json& v, const std::string& where) {
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    if (v.is_number_integer()) return parse_rational(v.dump());
    if (v.is_number_float()) {
        // The textual JSON number is converted exactly, e.g. 2.5 -> 5/2.
        try {
            return parse_rational(v.dump());
        } catch (const std::invalid_argument&) {
            throw ParseError(where + ": use a \"p/q\" or decimal string instead of " + v.dump());
        }
    }
    throw ParseError(where + ": expected a rational string");
}

inline json rational_to_json(const Rational& r) { return format_rational(r); }

inline json task_system_to_json(const TaskSystem& tasks, const Platform& platform) {
    json out;
    out["tasks"] = json::array();
    for (const auto& t : tasks)
        out["tasks"].push_back({{"id", t.id()},
                                {"exec", rational_to_json(t.exec())},
                                {"period", rational_to_json(t.period())}});
    json classes = json::array();
    for (const auto& c : platform.classes())
        classes.push_back({{"speed", rational_to_json(c.speed)}, {"count", c.count}});
    out["platform"] = {{"classes", classes}};
    return out;
}

inline json platform_to_json(const Platform& platform) {
    json classes = json::array();
    for (const auto& c : platform.classes())
        classes.push_back({{"speed", rational_to_json(c.speed)}, {"count", c.count}});
    return {{"classes", classes}};
}

inline Platform platform_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("classes") || !doc["classes"].is_array())
        throw ParseError("platform: missing \"classes\" array");
    std::vector<SpeedClass> classes;
    std::size_t i = 0;
    for (const auto& c : doc["classes"]) {
        std::string where = "platform.classes[" + std::to_string(i++) + "]";
        if (!c.is_object() || !c.contains("speed") || !c.contains("count"))
            throw ParseError(where + ": needs \"speed\" and \"count\"");
        if (!c["count"].is_number_unsigned())
            throw ParseError(where + ".count: expected a positive integer");
        classes.push_back({rational_from_json(c["speed"], where + ".speed"), c["count"].get<std::size_t>()});
    }
    try {
        return Platform(std::move(classes));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("platform: ") + e.what());
    }
}

inline TaskSystem tasks_from_json(const json& arr) {
    if (!arr.is_array()) throw ParseError("\"tasks\" must be an array");
    std::vector<SporadicTask> tasks;
    std::size_t i = 0;
    for (const auto& t : arr) {
        std::string where = "tasks[" + std::to_string(i++) + "]";
        if (!t.is_object() || !t.contains("id") || !t.contains("exec") || !t.contains("period"))
            throw ParseError(where + ": needs \"id\", \"exec\" and \"period\"");
        if (!t["id"].is_number_unsigned() || t["id"].get<TaskId>() == 0)
            throw ParseError(where + ".id: expected a positive integer");
        try {
            tasks.emplace_back(t["id"].get<TaskId>(), rational_from_json(t["exec"], where + ".exec"),
                               rational_from_json(t["period"], where + ".period"));
        } catch (const std::invalid_argument& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    try {
        return TaskSystem(std::move(tasks));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

inline TaskSystemFile task_system_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("task-system document must be a JSON object");
    if (!doc.contains("platform")) throw ParseError("missing \"platform\"");
    TaskSystem tasks = doc.contains("tasks") ? tasks_from_json(doc["tasks"]) : TaskSystem{};
    return {std::move(tasks), platform_from_json(doc["platform"])};
}

namespace detail {

inline void line_column(const std::string& text, std::size_t byte, std::size_t& line, std::size_t& col) {
    line = 1;
    col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

}  // namespace detail

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 0, col = 0;
        detail::line_column(text, e.byte, line, col);
        std::string msg = e.what();
        if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
        throw ParseError(msg, line, col);
    }
}

inline TaskSystemFile parse_task_system(const std::string& text) {
    return task_system_from_json(parse_json_text(text));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline TaskSystemFile load_task_system(const std::string& path) { return parse_task_system(read_file(path)); }

}  // namespace hetsched
