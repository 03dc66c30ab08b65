#include "oraclenet/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace oraclenet {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

int orientation(const Point2& o, const Point2& a, const Point2& b) {
    const double v = cross(o, a, b);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment(const Point2& p, const Segment2& s) {
    return std::min(s.a.x(), s.b.x()) <= p.x() && p.x() <= std::max(s.a.x(), s.b.x()) &&
           std::min(s.a.y(), s.b.y()) <= p.y() && p.y() <= std::max(s.a.y(), s.b.y());
}

void validate_polygon(const ConvexPolygon& poly) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    if (n < 3) {
        throw UsageError("polygon needs at least 3 vertices");
    }
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p0 = v[i];
        const Point2& p1 = v[(i + 1) % n];
        const Point2& p2 = v[(i + 2) % n];
        if (!p0.allFinite()) {
            throw UsageError("polygon vertex is not finite");
        }
        if (cross(p0, p1, p2) <= 0.0) {
            throw UsageError("polygon must be strictly convex with counter-clockwise vertices");
        }
        const Point2 e0 = p1 - p0;
        const Point2 e1 = p2 - p1;
        turning += std::atan2(e0.x() * e1.y() - e0.y() * e1.x(), e0.dot(e1));
    }
    // A convex CCW polygon turns exactly once; star polygons turn more.
    if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
        throw UsageError("polygon is not simple");
    }
}

}  // namespace

double standard_normal(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) {
        u1 = uniform01(rng);
    }
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double path_length(const Path& path) {
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        total += (path[i] - path[i - 1]).norm();
    }
    return total;
}

double point_segment_distance(const Point2& p, const Segment2& s) {
    const Point2 ab = s.b - s.a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) {
        return (p - s.a).norm();
    }
    const double t = std::clamp((p - s.a).dot(ab) / len2, 0.0, 1.0);
    return (p - (s.a + t * ab)).norm();
}

bool point_in_polygon(const Point2& p, const ConvexPolygon& poly) {
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (cross(v[i], v[(i + 1) % v.size()], p) < 0.0) {
            return false;
        }
    }
    return true;
}

bool segments_intersect(const Segment2& s, const Segment2& t) {
    const int o1 = orientation(s.a, s.b, t.a);
    const int o2 = orientation(s.a, s.b, t.b);
    const int o3 = orientation(t.a, t.b, s.a);
    const int o4 = orientation(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) {
        return true;
    }
    return (o1 == 0 && on_segment(t.a, s)) || (o2 == 0 && on_segment(t.b, s)) ||
           (o3 == 0 && on_segment(s.a, t)) || (o4 == 0 && on_segment(s.b, t));
}

bool point_hits(const Point2& p, const Obstacle& obstacle) {
    if (const auto* c = std::get_if<Circle>(&obstacle)) {
        return (p - c->center).squaredNorm() <= c->radius * c->radius;
    }
    return point_in_polygon(p, std::get<ConvexPolygon>(obstacle));
}

bool segment_hits(const Segment2& s, const Obstacle& obstacle) {
    if (const auto* c = std::get_if<Circle>(&obstacle)) {
        return point_segment_distance(c->center, s) <= c->radius;
    }
    const auto& poly = std::get<ConvexPolygon>(obstacle);
    if (point_in_polygon(s.a, poly) || point_in_polygon(s.b, poly)) {
        return true;
    }
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (segments_intersect(s, Segment2{v[i], v[(i + 1) % v.size()]})) {
            return true;
        }
    }
    return false;
}

double segment_obstacle_distance(const Segment2& s, const Obstacle& obstacle) {
    if (const auto* c = std::get_if<Circle>(&obstacle)) {
        return std::max(0.0, point_segment_distance(c->center, s) - c->radius);
    }
    if (segment_hits(s, obstacle)) {
        return 0.0;
    }
    // Disjoint convex sets in the plane: the closest pair involves an endpoint of one segment.
    const auto& v = std::get<ConvexPolygon>(obstacle).vertices;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Segment2 e{v[i], v[(i + 1) % v.size()]};
        best = std::min({best, point_segment_distance(s.a, e), point_segment_distance(s.b, e),
                         point_segment_distance(e.a, s)});
    }
    return best;
}

Environment::Environment(EnvKind kind, std::vector<Interval> bounds, std::vector<Obstacle> obstacles,
                         std::vector<double> link_lengths)
    : kind_(kind),
      bounds_(std::move(bounds)),
      obstacles_(std::move(obstacles)),
      link_lengths_(std::move(link_lengths)) {
    if (bounds_.empty()) {
        throw UsageError("environment needs at least one axis");
    }
    for (const auto& b : bounds_) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
            throw UsageError("degenerate bounds: every axis needs lo < hi");
        }
    }
    for (const auto& o : obstacles_) {
        if (const auto* c = std::get_if<Circle>(&o)) {
            if (!(c->radius > 0.0) || !c->center.allFinite()) {
                throw UsageError("circle radius must be positive");
            }
        } else {
            validate_polygon(std::get<ConvexPolygon>(o));
        }
    }
    if (kind_ == EnvKind::GridWorld2D) {
        if (bounds_.size() != 2) {
            throw UsageError("gridworld2d needs exactly 2 axes");
        }
        if (!link_lengths_.empty()) {
            throw UsageError("gridworld2d takes no link lengths");
        }
    } else {
        if (link_lengths_.size() != bounds_.size()) {
            throw UsageError("planar_arm dimension must equal the number of links");
        }
        for (double l : link_lengths_) {
            if (!(l > 0.0) || !std::isfinite(l)) {
                throw UsageError("link lengths must be positive");
            }
        }
    }
}

Environment Environment::gridworld(double size, std::vector<Obstacle> obstacles) {
    return Environment(EnvKind::GridWorld2D, {{0.0, size}, {0.0, size}}, std::move(obstacles));
}

Environment Environment::planar_arm(std::vector<double> link_lengths, std::vector<Obstacle> obstacles) {
    std::vector<Interval> bounds;
    bounds.reserve(link_lengths.size());
    for (std::size_t i = 0; i < link_lengths.size(); ++i) {
        bounds.push_back(i == 0 ? Interval{0.0, 2.0 * std::numbers::pi}
                                : Interval{-std::numbers::pi, std::numbers::pi});
    }
    return Environment(EnvKind::PlanarArm, std::move(bounds), std::move(obstacles), std::move(link_lengths));
}

Config Environment::lower() const {
    Config q(dim());
    for (int i = 0; i < dim(); ++i) {
        q[i] = bounds_[i].lo;
    }
    return q;
}

Config Environment::upper() const {
    Config q(dim());
    for (int i = 0; i < dim(); ++i) {
        q[i] = bounds_[i].hi;
    }
    return q;
}

void Environment::check_dim(const Config& q) const {
    if (q.size() != dim()) {
        std::ostringstream msg;
        msg << "config has dimension " << q.size() << ", environment expects " << dim();
        throw UsageError(msg.str());
    }
}

bool Environment::in_bounds(const Config& q) const {
    check_dim(q);
    for (int i = 0; i < dim(); ++i) {
        if (!(q[i] >= bounds_[i].lo && q[i] <= bounds_[i].hi)) {
            return false;
        }
    }
    return true;
}

bool Environment::point_collides(const Point2& p) const {
    return std::any_of(obstacles_.begin(), obstacles_.end(),
                       [&](const Obstacle& o) { return point_hits(p, o); });
}

bool Environment::segment_collides(const Segment2& s) const {
    return std::any_of(obstacles_.begin(), obstacles_.end(),
                       [&](const Obstacle& o) { return segment_hits(s, o); });
}

bool Environment::is_free(const Config& q) const {
    if (!in_bounds(q)) {
        return false;
    }
    if (kind_ == EnvKind::GridWorld2D) {
        return !point_collides(Point2(q[0], q[1]));
    }
    Point2 joint = Point2::Zero();
    double angle = 0.0;
    for (int i = 0; i < dim(); ++i) {
        angle += q[i];
        const Point2 next = joint + link_lengths_[i] * Point2(std::cos(angle), std::sin(angle));
        if (segment_collides(Segment2{joint, next})) {
            return false;
        }
        joint = next;
    }
    return true;
}

std::vector<Segment2> Environment::forward_kinematics(const Config& q) const {
    if (kind_ != EnvKind::PlanarArm) {
        throw UsageError("forward kinematics requires a planar arm");
    }
    check_dim(q);
    std::vector<Segment2> links;
    links.reserve(dim());
    Point2 joint = Point2::Zero();
    double angle = 0.0;
    for (int i = 0; i < dim(); ++i) {
        angle += q[i];
        const Point2 next = joint + link_lengths_[i] * Point2(std::cos(angle), std::sin(angle));
        links.push_back({joint, next});
        joint = next;
    }
    return links;
}

bool Environment::segment_free(const Config& a, const Config& b, double resolution) const {
    check_dim(a);
    check_dim(b);
    if (!(resolution > 0.0)) {
        throw UsageError("resolution must be positive");
    }
    const bool swap = std::lexicographical_compare(b.data(), b.data() + b.size(), a.data(), a.data() + a.size());
    const Config& lo = swap ? b : a;
    const Config& hi = swap ? a : b;
    const Config delta = hi - lo;
    const double len = delta.norm();
    if (!is_free(lo) || !is_free(hi)) {
        return false;
    }
    if (len == 0.0) {
        return true;
    }
    std::int64_t n = 1;
    while (len / static_cast<double>(n) > resolution && n < (std::int64_t{1} << 40)) {
        n *= 2;
    }
    // Coarse-to-fine bisection order; the visited set is {i/n : 0 <= i <= n}.
    Config q(dim());
    for (std::int64_t step = n / 2; step >= 1; step /= 2) {
        for (std::int64_t i = step; i < n; i += 2 * step) {
            const double t = static_cast<double>(i) / static_cast<double>(n);
            q = lo + t * delta;
            if (!is_free(q)) {
                return false;
            }
        }
    }
    return true;
}

Config Environment::sample_uniform(Rng& rng) const {
    Config q(dim());
    for (int i = 0; i < dim(); ++i) {
        q[i] = bounds_[i].lo + uniform01(rng) * (bounds_[i].hi - bounds_[i].lo);
    }
    return q;
}

Config Environment::sample_free(Rng& rng, int max_attempts) const {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Config q = sample_uniform(rng);
        if (is_free(q)) {
            return q;
        }
    }
    throw SamplingExhausted("no free configuration found after " + std::to_string(max_attempts) + " draws");
}

}  // namespace oraclenet

namespace oraclenet {

namespace {
// Clearance below this counts as contact; covers rounding in the sampled check.
constexpr double kClearMargin = 1e-9;
constexpr int kMaxClearanceEvals = 1 << 16;
}  // namespace

double Environment::clearance(const Config& q) const {
    check_dim(q);
    double best = std::numeric_limits<double>::infinity();
    if (kind_ == EnvKind::GridWorld2D) {
        const Point2 p(q[0], q[1]);
        for (const auto& o : obstacles_) {
            best = std::min(best, segment_obstacle_distance(Segment2{p, p}, o));
        }
        return best;
    }
    Point2 joint = Point2::Zero();
    double angle = 0.0;
    for (int i = 0; i < dim(); ++i) {
        angle += q[i];
        const Point2 next = joint + link_lengths_[i] * Point2(std::cos(angle), std::sin(angle));
        for (const auto& o : obstacles_) {
            best = std::min(best, segment_obstacle_distance(Segment2{joint, next}, o));
        }
        joint = next;
    }
    return best;
}

bool Environment::segment_clear(const Config& a, const Config& b) const {
    check_dim(a);
    check_dim(b);
    if (!in_bounds(a) || !in_bounds(b)) {
        return false;
    }
    if (kind_ == EnvKind::GridWorld2D) {
        const Segment2 s{Point2(a[0], a[1]), Point2(b[0], b[1])};
        return std::all_of(obstacles_.begin(), obstacles_.end(),
                           [&](const Obstacle& o) { return segment_obstacle_distance(s, o) > kClearMargin; });
    }
    // A point at reach r from joint i moves at most r * |dtheta_i| when joint i turns,
    // so clearance along the segment is Lipschitz in t with constant `sweep`.
    double sweep = 0.0;
    double reach = 0.0;
    for (int i = dim() - 1; i >= 0; --i) {
        reach += link_lengths_[i];
        sweep += reach * std::abs(b[i] - a[i]);
    }
    const Config delta = b - a;
    const double ca = clearance(a);
    const double cb = clearance(b);
    if (!(ca > kClearMargin) || !(cb > kClearMargin)) {
        return false;
    }
    struct Piece {
        double t0, t1, c0, c1;
    };
    std::vector<Piece> stack{{0.0, 1.0, ca, cb}};
    int evals = 0;
    while (!stack.empty()) {
        const Piece p = stack.back();
        stack.pop_back();
        // Every t in the piece keeps clearance >= max(c0 - sweep (t - t0), c1 - sweep (t1 - t)).
        if (p.c0 + p.c1 - 2.0 * kClearMargin > sweep * (p.t1 - p.t0)) {
            continue;
        }
        if (++evals > kMaxClearanceEvals || p.t1 - p.t0 < 1e-12) {
            return false;
        }
        const double tm = 0.5 * (p.t0 + p.t1);
        const double cm = clearance(a + tm * delta);
        if (!(cm > kClearMargin)) {
            return false;
        }
        stack.push_back({tm, p.t1, cm, p.c1});
        stack.push_back({p.t0, tm, p.c0, cm});
    }
    return true;
}

}  // namespace oraclenet
