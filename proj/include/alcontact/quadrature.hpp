#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace alcontact {

struct TrianglePoint
{
    std::array<double, 3> bary;
    double weight;
};

struct SegmentPoint
{
    double t;       ///< position in [0, 1] along the segment
    double weight;
};

/// Symmetric triangle rule plus a Gauss rule on segments. Weights are
/// normalized to unit measure; multiply by the area (length) of the cell.
struct QuadratureRule
{
    int order = 0;
    std::vector<TrianglePoint> triangle;
    std::vector<SegmentPoint> segment;
};

namespace detail {

inline void add_orbit3(std::vector<TrianglePoint>& pts, double a, double w)
{
    const double b = 1.0 - 2.0 * a;
    pts.push_back({{a, a, b}, w});
    pts.push_back({{a, b, a}, w});
    pts.push_back({{b, a, a}, w});
}

inline std::vector<SegmentPoint> gauss_segment(int npoints)
{
    switch (npoints)
    {
        case 1: return {{0.5, 1.0}};
        case 2:
        {
            const double d = 0.5 / std::sqrt(3.0);
            return {{0.5 - d, 0.5}, {0.5 + d, 0.5}};
        }
        case 3:
        {
            const double d = 0.5 * std::sqrt(0.6);
            return {{0.5 - d, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + d, 5.0 / 18.0}};
        }
        default: throw std::invalid_argument("gauss_segment: unsupported point count");
    }
}

} // namespace detail

/// Rules exact for polynomials of total degree <= order on triangles
/// (centroid, 3-point, Dunavant 6- and 7-point) and on segments.
inline QuadratureRule quadrature(int order)
{
    QuadratureRule q;
    q.order = order;
    switch (order)
    {
        case 1:
            q.triangle.push_back({{1.0 / 3, 1.0 / 3, 1.0 / 3}, 1.0});
            q.segment = detail::gauss_segment(1);
            break;
        case 2:
            detail::add_orbit3(q.triangle, 1.0 / 6.0, 1.0 / 3.0);
            q.segment = detail::gauss_segment(2);
            break;
        case 4:
            detail::add_orbit3(q.triangle, 0.44594849091596489, 0.22338158967801147);
            detail::add_orbit3(q.triangle, 0.09157621350977073, 0.10995174365532187);
            q.segment = detail::gauss_segment(3);
            break;
        case 5:
        {
            const double s15 = std::sqrt(15.0);
            q.triangle.push_back({{1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.225});
            detail::add_orbit3(q.triangle, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
            detail::add_orbit3(q.triangle, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
            q.segment = detail::gauss_segment(3);
            break;
        }
        default:
            throw std::invalid_argument("quadrature: no rule of order " + std::to_string(order));
    }
    return q;
}

/// Rule used for loads and the contact terms.
inline QuadratureRule assembly_quadrature() { return quadrature(4); }

/// One order above the assembly rule, for error norms.
inline QuadratureRule error_quadrature() { return quadrature(5); }

} // namespace alcontact
