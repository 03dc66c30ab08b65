#include "oraclenet/svg.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>

namespace oraclenet {

namespace {

constexpr const char* kStartColor = "#d62728";
constexpr const char* kGoalColor = "#2ca02c";

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

/// Workspace rectangle -> pixel frame with y pointing up.
struct Frame {
    double x0, y0, x1, y1, scale;
    double px(double x) const { return (x - x0) * scale; }
    double py(double y) const { return (y1 - y) * scale; }
};

void draw_obstacles(std::ostringstream& out, const Environment& env, const Frame& f) {
    for (const auto& o : env.obstacles()) {
        if (const auto* c = std::get_if<Circle>(&o)) {
            out << "  <circle class=\"obstacle\" cx=\"" << num(f.px(c->center.x())) << "\" cy=\""
                << num(f.py(c->center.y())) << "\" r=\"" << num(c->radius * f.scale)
                << "\" fill=\"#7f7f7f\"/>\n";
        } else {
            out << "  <polygon class=\"obstacle\" points=\"";
            const auto& v = std::get<ConvexPolygon>(o).vertices;
            for (std::size_t i = 0; i < v.size(); ++i) {
                out << (i ? " " : "") << num(f.px(v[i].x())) << ',' << num(f.py(v[i].y()));
            }
            out << "\" fill=\"#7f7f7f\"/>\n";
        }
    }
}

void draw_marker(std::ostringstream& out, const Frame& f, double x, double y, const char* cls, const char* color) {
    out << "  <circle class=\"" << cls << "\" cx=\"" << num(f.px(x)) << "\" cy=\"" << num(f.py(y))
        << "\" r=\"4\" fill=\"" << color << "\"/>\n";
}

}  // namespace

std::string render_svg(const Environment& env, const std::vector<Path>& paths, const SvgOptions& opts) {
    Frame f{};
    if (env.kind() == EnvKind::GridWorld2D) {
        f = {env.bounds()[0].lo, env.bounds()[1].lo, env.bounds()[0].hi, env.bounds()[1].hi, 0.0};
    } else {
        const double reach = 1.1 * std::accumulate(env.link_lengths().begin(), env.link_lengths().end(), 0.0);
        f = {-reach, -reach, reach, reach, 0.0};
    }
    f.scale = opts.width_px / (f.x1 - f.x0);
    const double height = (f.y1 - f.y0) * f.scale;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width_px << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << opts.width_px << ' ' << num(height) << "\">\n";
    out << "  <rect class=\"bounds\" x=\"0\" y=\"0\" width=\"" << opts.width_px << "\" height=\"" << num(height)
        << "\" fill=\"white\" stroke=\"black\"/>\n";
    draw_obstacles(out, env, f);

    for (std::size_t p = 0; p < paths.size(); ++p) {
        const auto& path = paths[p];
        const std::string color = p == 0 ? "black" : opts.path_color;
        if (env.kind() == EnvKind::GridWorld2D) {
            for (std::size_t i = 1; i < path.size(); ++i) {
                out << "  <line class=\"edge\" x1=\"" << num(f.px(path[i - 1][0])) << "\" y1=\""
                    << num(f.py(path[i - 1][1])) << "\" x2=\"" << num(f.px(path[i][0])) << "\" y2=\""
                    << num(f.py(path[i][1])) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
            }
            if (opts.mark_endpoints && !path.empty()) {
                draw_marker(out, f, path.front()[0], path.front()[1], "start", kStartColor);
                draw_marker(out, f, path.back()[0], path.back()[1], "goal", kGoalColor);
            }
        } else {
            for (std::size_t i = 0; i < path.size(); ++i) {
                const char* cls = "arm";
                std::string stroke = "#bbbbbb";
                if (opts.mark_endpoints && i == 0) {
                    cls = "arm start";
                    stroke = kStartColor;
                } else if (opts.mark_endpoints && i + 1 == path.size()) {
                    cls = "arm goal";
                    stroke = kGoalColor;
                }
                const auto links = env.forward_kinematics(path[i]);
                out << "  <polyline class=\"" << cls << "\" points=\"" << num(f.px(0.0)) << ',' << num(f.py(0.0));
                for (const auto& l : links) {
                    out << ' ' << num(f.px(l.b.x())) << ',' << num(f.py(l.b.y()));
                }
                out << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
            }
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace oraclenet
