#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "oraclenet/types.hpp"

namespace oraclenet {

using Point2 = Eigen::Vector2d;

struct Circle {
    Point2 center;
    double radius = 0.0;
};

/// Convex polygon, vertices in counter-clockwise order.
struct ConvexPolygon {
    std::vector<Point2> vertices;
};

using Obstacle = std::variant<Circle, ConvexPolygon>;

struct Segment2 {
    Point2 a;
    Point2 b;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

enum class EnvKind { GridWorld2D, PlanarArm };

/// Bounded c-space plus workspace obstacles. Immutable after construction.
///
/// Obstacles always live in the 2D workspace. For the grid world the workspace
/// is the c-space; for a planar arm the c-space obstacle region is implied by
/// forward kinematics. Obstacles are closed sets: touching a boundary collides.
class Environment {
public:
    /// Validates every invariant and throws UsageError on violation.
    Environment(EnvKind kind, std::vector<Interval> bounds, std::vector<Obstacle> obstacles,
                std::vector<double> link_lengths = {});

    static Environment gridworld(double size, std::vector<Obstacle> obstacles = {});
    /// Base joint in [0, 2*pi], remaining joints in [-pi, pi].
    static Environment planar_arm(std::vector<double> link_lengths, std::vector<Obstacle> obstacles = {});

    [[nodiscard]] EnvKind kind() const noexcept { return kind_; }
    [[nodiscard]] int dim() const noexcept { return static_cast<int>(bounds_.size()); }
    [[nodiscard]] const std::vector<Interval>& bounds() const noexcept { return bounds_; }
    [[nodiscard]] const std::vector<Obstacle>& obstacles() const noexcept { return obstacles_; }
    [[nodiscard]] const std::vector<double>& link_lengths() const noexcept { return link_lengths_; }

    [[nodiscard]] Config lower() const;
    [[nodiscard]] Config upper() const;

    [[nodiscard]] bool in_bounds(const Config& q) const;

    /// Inside bounds and clear of every obstacle. Throws UsageError on dimension mismatch.
    [[nodiscard]] bool is_free(const Config& q) const;

    /// Every config on the straight c-space segment at spacing <= resolution is free.
    ///
    /// The segment is split into 2^m equal pieces with the smallest m reaching the
    /// requested spacing, so halving the resolution yields a superset of samples.
    /// Endpoints are ordered canonically before interpolating, which makes the
    /// result exactly symmetric in (a, b).
    [[nodiscard]] bool segment_free(const Config& a, const Config& b, double resolution) const;

    /// Continuous check of the whole segment, independent of any resolution.
    ///
    /// Grid worlds test the workspace segment against each obstacle exactly. Arms use
    /// conservative advancement: workspace clearance divided by a bound on how fast
    /// the links can sweep. Both keep a small safety margin, so a true result implies
    /// segment_free at every resolution.
    [[nodiscard]] bool segment_clear(const Config& a, const Config& b) const;

    /// What planners use for edges: segment_free at the given resolution and segment_clear.
    [[nodiscard]] bool edge_free(const Config& a, const Config& b, double resolution) const {
        return segment_clear(a, b) && segment_free(a, b, resolution);
    }

    /// Smallest workspace distance between the robot at q and any obstacle (0 on contact).
    [[nodiscard]] double clearance(const Config& q) const;

    /// Link segments for a planar arm; throws UsageError for other kinds.
    [[nodiscard]] std::vector<Segment2> forward_kinematics(const Config& q) const;

    /// Rejection sampling over the bounds; throws SamplingExhausted after max_attempts.
    [[nodiscard]] Config sample_free(Rng& rng, int max_attempts = 10000) const;

    [[nodiscard]] Config sample_uniform(Rng& rng) const;

private:
    void check_dim(const Config& q) const;
    [[nodiscard]] bool point_collides(const Point2& p) const;
    [[nodiscard]] bool segment_collides(const Segment2& s) const;

    EnvKind kind_;
    std::vector<Interval> bounds_;
    std::vector<Obstacle> obstacles_;
    std::vector<double> link_lengths_;
};

// Exact workspace geometry predicates (closed sets).
[[nodiscard]] double point_segment_distance(const Point2& p, const Segment2& s);
[[nodiscard]] bool point_in_polygon(const Point2& p, const ConvexPolygon& poly);
[[nodiscard]] bool segments_intersect(const Segment2& s, const Segment2& t);
[[nodiscard]] bool segment_hits(const Segment2& s, const Obstacle& obstacle);
[[nodiscard]] bool point_hits(const Point2& p, const Obstacle& obstacle);
/// Distance between a segment and an obstacle; 0 when they touch.
[[nodiscard]] double segment_obstacle_distance(const Segment2& s, const Obstacle& obstacle);

// JSON environment spec: {"kind":..., "bounds":[[lo,hi],...], "obstacles":[...], "link_lengths":[...]}.
[[nodiscard]] Environment environment_from_json(const std::string& text);
[[nodiscard]] std::string environment_to_json(const Environment& env);
[[nodiscard]] Environment load_environment(const std::string& file);

/// 64-bit FNV-1a over the canonical JSON dump, rendered as 16 hex digits.
[[nodiscard]] std::string environment_hash(const Environment& env);

}  // namespace oraclenet
