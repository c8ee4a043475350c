#include "rpd/problem.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json_fields.hpp"
#include "rpd/errors.hpp"

namespace rpd {

std::vector<std::string> Problem::required_metrics() const {
    std::vector<std::string> names;
    auto add = [&](const std::string& n) {
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    };
    for (const auto& o : objectives) add(o.name);
    for (const auto& c : constraints) add(c.name);
    return names;
}

Problem parse_problem(std::string_view config_text) {
    const auto doc = detail::parse_document(config_text);
    auto space = space_from_json(doc);
    auto objectives = objectives_from_json(doc);
    auto constraints = constraints_from_json(doc);
    auto engine = engine_config_from_json(doc, space.dimension());
    return Problem{std::move(space), std::move(objectives), std::move(constraints), engine};
}

Problem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_problem(text.str());
}

}  // namespace rpd
