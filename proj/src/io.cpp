#include "kyle/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace kyle::io {

using nlohmann::json;

namespace {

double number(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("penalty: missing field '") + key + "'");
    if (!j.at(key).is_number()) throw ConfigError(std::string("penalty: field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

Penalty build(const json& j) {
    if (!j.is_object()) throw ConfigError("penalty: expected a JSON object");
    if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("penalty: missing string 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "zero") return Penalty::zero();
    if (kind == "constant_nonzero") return Penalty::constant_nonzero(number(j, "K"));
    if (kind == "constant_above") return Penalty::constant_above(number(j, "K"), number(j, "x0"));
    if (kind == "linear") return Penalty::linear(number(j, "alpha"));
    if (kind == "quadratic") return Penalty::quadratic(number(j, "alpha"));
    if (kind == "optimal_canonical") return Penalty::optimal_canonical(number(j, "K"));
    if (kind == "surface") return Penalty::surface(number(j, "v1"), number(j, "v2"));
    if (kind == "tabulated") {
        if (!j.contains("points") || !j.at("points").is_array()) throw ConfigError("tabulated: missing 'points' array");
        const auto& arr = j.at("points");
        std::vector<penalty_kind::TabulatedPoint> pts;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const auto& row = arr[k];
            if (!row.is_array() || row.size() < 2 || row.size() > 4) {
                throw ConfigError("tabulated: each point is [x, value, jump?, right?]");
            }
            penalty_kind::TabulatedPoint p{row[0].get<double>(), row[1].get<double>()};
            if (row.size() >= 3) p.jump = row[2].is_boolean() ? row[2].get<bool>() : row[2].get<double>() != 0.0;
            if (p.jump) {
                if (row.size() == 4) {
                    p.right_value = row[3].get<double>();
                } else if (k + 1 < arr.size()) {
                    p.right_value = arr[k + 1][1].get<double>();
                } else {
                    throw ConfigError("tabulated: a jump at the last point needs an explicit right value");
                }
            }
            pts.push_back(p);
        }
        return Penalty::tabulated(std::move(pts));
    }
    throw ConfigError("penalty: unknown kind '" + kind + "'");
}

} // namespace

Penalty penalty_from_json(const json& j) {
    try {
        return build(j);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("penalty: ") + e.what());
    }
}

json penalty_to_json(const Penalty& p) {
    using namespace penalty_kind;
    return std::visit(
        overloaded{
            [](const Zero&) { return json{{"kind", "zero"}}; },
            [](const ConstantNonzero& k) { return json{{"kind", "constant_nonzero"}, {"K", k.K}}; },
            [](const ConstantAbove& k) { return json{{"kind", "constant_above"}, {"K", k.K}, {"x0", k.x0}}; },
            [](const Linear& k) { return json{{"kind", "linear"}, {"alpha", k.alpha}}; },
            [](const Quadratic& k) { return json{{"kind", "quadratic"}, {"alpha", k.alpha}}; },
            [](const OptimalCanonical& k) { return json{{"kind", "optimal_canonical"}, {"K", k.K}}; },
            [](const Surface& k) { return json{{"kind", "surface"}, {"v1", k.v1}, {"v2", k.v2}}; },
            [](const Tabulated& t) {
                json pts = json::array();
                for (const auto& q : t.points) {
                    if (q.jump) {
                        pts.push_back(json::array({q.x, q.value, true, q.right_value}));
                    } else {
                        pts.push_back(json::array({q.x, q.value, false}));
                    }
                }
                return json{{"kind", "tabulated"}, {"points", pts}};
            },
        },
        p.spec());
}

Penalty parse_penalty(const std::string& text) {
    json j;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        j = json::parse(text, nullptr, false);
        if (j.is_discarded()) throw ConfigError("penalty: invalid JSON");
    } else {
        std::ifstream in(text);
        if (!in) throw ConfigError("penalty: cannot open '" + text + "'");
        j = json::parse(in, nullptr, false);
        if (j.is_discarded()) throw ConfigError("penalty: invalid JSON in '" + text + "'");
    }
    return penalty_from_json(j);
}

std::string format_double(double x) {
    if (x == 0.0) x = 0.0; // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << format_double(r[k]);
        os << '\n';
    }
}

} // namespace kyle::io
