#pragma once

#include "assembly.hpp"
#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace alcontact {

enum class ProblemKind { SmoothObstacle, NonsmoothObstacle, Signorini };

using GradientField = std::function<Point(const Point&)>;

/// Benchmark definition: domain, data, exact solution when known, and the
/// parameters used to reproduce the published convergence plots.
struct ProblemSpec
{
    ProblemKind kind;
    std::string name;
    ContactZone zone;
    std::function<Mesh()> base_mesh;   ///< level 0; level l is l uniform refinements
    ScalarField load;
    ScalarField dirichlet;
    std::optional<ScalarField> exact;
    std::optional<GradientField> exact_gradient;

    double gamma0;
    double gamma_exponent;             ///< exponent used for the reproduction runs
    double slope_l2;                   ///< reference inclinations drawn in the plots
    double slope_h1;
    int first_level;
    int levels;
};

inline Mesh mesh_at_level(const ProblemSpec& p, int level)
{
    Mesh m = p.base_mesh();
    for (int l = 0; l < level; ++l)
        m = uniform_refine(m);
    return m;
}

namespace smooth {

inline constexpr double r0 = 0.25;

inline double exact(const Point& p)
{
    const double s = std::max(p.squaredNorm() - r0 * r0, 0.0);
    return -s * s;
}

inline Point gradient(const Point& p)
{
    const double s = p.squaredNorm() - r0 * r0;
    if (s <= 0.0)
        return Point::Zero();
    return -4.0 * s * p;
}

inline double load(const Point& p)
{
    const double r2 = p.squaredNorm();
    if (std::sqrt(r2) <= r0)
        return 8.0 * r0 * r0 * (1.0 - (r2 - r0 * r0));
    return 8.0 * (r2 + (r2 - r0 * r0));
}

} // namespace smooth

namespace nonsmooth {

/// Smooth cutoff: 1 for r <= 1/4, 0 for r >= 3/4, quintic in between.
inline double cutoff(double r)
{
    const double t = 2.0 * (r - 0.25);
    if (t < 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    return ((-6.0 * t + 15.0) * t - 10.0) * t * t * t + 1.0;
}

inline double cutoff_d1(double r)
{
    const double t = 2.0 * (r - 0.25);
    if (t < 0.0 || t >= 1.0) return 0.0;
    return 2.0 * (-30.0 * t * t * (t - 1.0) * (t - 1.0));
}

inline double cutoff_d2(double r)
{
    const double t = 2.0 * (r - 0.25);
    if (t < 0.0 || t >= 1.0) return 0.0;
    return 4.0 * (-60.0 * t * (2.0 * t - 1.0) * (t - 1.0));
}

/// Contact force beyond r = 5/4.
inline double force(double r) { return r <= 1.25 ? 0.0 : 1.0; }

/// Polar angle in [0, 2pi); the domain occupies [0, 3pi/2].
inline double angle(const Point& p)
{
    double phi = std::atan2(p.y(), p.x());
    if (phi < 0.0)
        phi += 2.0 * std::numbers::pi;
    return phi;
}

inline double exact(const Point& p)
{
    const double r = p.norm();
    if (r == 0.0)
        return 0.0;
    return -std::cbrt(r * r) * cutoff(r) * std::sin(2.0 * angle(p) / 3.0);
}

inline Point gradient(const Point& p)
{
    const double r = p.norm();
    if (r == 0.0)
        return Point::Zero();
    const double phi = angle(p);
    const double s = std::sin(2.0 * phi / 3.0), c = std::cos(2.0 * phi / 3.0);
    const double rm13 = 1.0 / std::cbrt(r);
    const double g = cutoff(r);
    const double dr = -s * (2.0 / 3.0 * rm13 * g + std::cbrt(r * r) * cutoff_d1(r));
    const double dphi_over_r = -rm13 * g * (2.0 / 3.0) * c;
    const double cp = std::cos(phi), sp = std::sin(phi);
    return {dr * cp - dphi_over_r * sp, dr * sp + dphi_over_r * cp};
}

/// -Laplacian of the exact solution plus the contact force; the singular
/// terms vanish near the origin because the cutoff is flat there.
inline double load(const Point& p)
{
    const double r = p.norm();
    if (r == 0.0)
        return force(0.0);
    const double s = std::sin(2.0 * angle(p) / 3.0);
    const double d1 = cutoff_d1(r), d2 = cutoff_d2(r);
    return std::cbrt(r * r) * s * (d1 / r + d2) + 4.0 / 3.0 / std::cbrt(r) * d1 * s + force(r);
}

} // namespace nonsmooth

namespace signorini_data {

inline double load(const Point& p) { return -2.0 * std::numbers::pi * std::sin(2.0 * std::numbers::pi * p.x()); }

} // namespace signorini_data

inline ProblemSpec smooth_obstacle()
{
    ProblemSpec p;
    p.kind = ProblemKind::SmoothObstacle;
    p.name = "smooth-obstacle";
    p.zone = ContactZone::Bulk;
    p.base_mesh = [] {
        return square_mesh({-1.0, -1.0}, {1.0, 1.0}, 2, [](const Point&) { return BoundaryTag::Dirichlet; });
    };
    p.load = smooth::load;
    p.dirichlet = smooth::exact;
    p.exact = smooth::exact;
    p.exact_gradient = smooth::gradient;
    p.gamma0 = 1.0 / 100.0;
    p.gamma_exponent = 1.0;
    p.slope_l2 = 2.0;
    p.slope_h1 = 1.0;
    p.first_level = 3;
    p.levels = 4;
    return p;
}

inline ProblemSpec nonsmooth_obstacle()
{
    ProblemSpec p;
    p.kind = ProblemKind::NonsmoothObstacle;
    p.name = "nonsmooth-obstacle";
    p.zone = ContactZone::Bulk;
    p.base_mesh = [] { return l_shaped_mesh(1, [](const Point&) { return BoundaryTag::Dirichlet; }); };
    p.load = nonsmooth::load;
    p.dirichlet = nonsmooth::exact;
    p.exact = nonsmooth::exact;
    p.exact_gradient = nonsmooth::gradient;
    p.gamma0 = 1.0 / 100.0;
    p.gamma_exponent = 1.0;
    p.slope_l2 = 5.0 / 3.0;
    p.slope_h1 = 1.0;
    p.first_level = 2;
    p.levels = 5;
    return p;
}

inline ProblemSpec signorini()
{
    ProblemSpec p;
    p.kind = ProblemKind::Signorini;
    p.name = "signorini";
    p.zone = ContactZone::Boundary;
    p.base_mesh = [] {
        return square_mesh({0.0, 0.0}, {1.0, 1.0}, 2, [](const Point& mid) {
            if (std::abs(mid.y() - 1.0) < 1e-12) return BoundaryTag::Dirichlet;
            if (std::abs(mid.y()) < 1e-12) return BoundaryTag::Contact;
            return BoundaryTag::Neumann;
        });
    };
    p.load = signorini_data::load;
    p.dirichlet = [](const Point&) { return 0.0; };
    p.gamma0 = 0.1;
    p.gamma_exponent = 1.0;   // 2s with s = 1/2
    p.slope_l2 = 2.0;
    p.slope_h1 = 1.0;
    p.first_level = 2;
    p.levels = 4;
    return p;
}

inline ProblemSpec problem_by_name(std::string_view name)
{
    if (name == "smooth-obstacle") return smooth_obstacle();
    if (name == "nonsmooth-obstacle") return nonsmooth_obstacle();
    if (name == "signorini") return signorini();
    throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

} // namespace alcontact
