#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oraclenet/env.hpp"

namespace oraclenet {

using nlohmann::json;

namespace {

Point2 read_point(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw FormatError("expected a 2-element point");
    }
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json write_point(const Point2& p) {
    return json::array({p.x(), p.y()});
}

}  // namespace

Environment environment_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("environment spec is not valid JSON: ") + e.what());
    }
    try {
        const auto kind_name = j.at("kind").get<std::string>();
        EnvKind kind;
        if (kind_name == "gridworld2d") {
            kind = EnvKind::GridWorld2D;
        } else if (kind_name == "planar_arm") {
            kind = EnvKind::PlanarArm;
        } else {
            throw FormatError("unknown environment kind '" + kind_name + "'");
        }
        std::vector<Interval> bounds;
        for (const auto& b : j.at("bounds")) {
            if (!b.is_array() || b.size() != 2) {
                throw FormatError("each bound must be [lo, hi]");
            }
            bounds.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
        }
        std::vector<Obstacle> obstacles;
        if (j.contains("obstacles")) {
            for (const auto& o : j.at("obstacles")) {
                if (o.contains("circle")) {
                    const auto& c = o.at("circle");
                    obstacles.emplace_back(Circle{read_point(c.at("center")), c.at("radius").get<double>()});
                } else if (o.contains("polygon")) {
                    ConvexPolygon poly;
                    for (const auto& v : o.at("polygon").at("vertices")) {
                        poly.vertices.push_back(read_point(v));
                    }
                    obstacles.emplace_back(std::move(poly));
                } else {
                    throw FormatError("obstacle must be a circle or a polygon");
                }
            }
        }
        std::vector<double> links;
        if (j.contains("link_lengths")) {
            links = j.at("link_lengths").get<std::vector<double>>();
        }
        return Environment(kind, std::move(bounds), std::move(obstacles), std::move(links));
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed environment spec: ") + e.what());
    }
}

std::string environment_to_json(const Environment& env) {
    json j;
    j["kind"] = env.kind() == EnvKind::GridWorld2D ? "gridworld2d" : "planar_arm";
    j["bounds"] = json::array();
    for (const auto& b : env.bounds()) {
        j["bounds"].push_back(json::array({b.lo, b.hi}));
    }
    j["obstacles"] = json::array();
    for (const auto& o : env.obstacles()) {
        if (const auto* c = std::get_if<Circle>(&o)) {
            j["obstacles"].push_back({{"circle", {{"center", write_point(c->center)}, {"radius", c->radius}}}});
        } else {
            json verts = json::array();
            for (const auto& v : std::get<ConvexPolygon>(o).vertices) {
                verts.push_back(write_point(v));
            }
            j["obstacles"].push_back({{"polygon", {{"vertices", verts}}}});
        }
    }
    j["link_lengths"] = env.link_lengths();
    return j.dump();
}

Environment load_environment(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open environment file '" + file + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return environment_from_json(buf.str());
}

std::string environment_hash(const Environment& env) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : environment_to_json(env)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

}  // namespace oraclenet
