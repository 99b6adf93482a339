#pragma once

#include "errors.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"
#include "spaces.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <vector>

namespace alcontact {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;
using Triplet = Eigen::Triplet<double, Index>;
using ScalarField = std::function<double(const Point&)>;

/// Gradients of the three P1 hat functions, one per column.
inline Eigen::Matrix<double, 2, 3> p1_gradients(const std::array<Point, 3>& p, long element = -1)
{
    const Point e1 = p[1] - p[0];
    const Point e2 = p[2] - p[0];
    const double det = e1.x() * e2.y() - e1.y() * e2.x();
    const double scale = std::max(e1.squaredNorm(), e2.squaredNorm());
    if (!(det > 1e-14 * scale))
        throw assembly_error("degenerate triangle " + std::to_string(element), element);

    Eigen::Matrix<double, 2, 3> g;
    // grad(lambda_k) = rot90(opposite edge) / (2 area)
    g(0, 0) = p[1].y() - p[2].y();  g(1, 0) = p[2].x() - p[1].x();
    g(0, 1) = p[2].y() - p[0].y();  g(1, 1) = p[0].x() - p[2].x();
    g(0, 2) = p[0].y() - p[1].y();  g(1, 2) = p[1].x() - p[0].x();
    return g / det;
}

inline Eigen::Matrix3d element_stiffness(const std::array<Point, 3>& p, long element = -1)
{
    const auto g = p1_gradients(p, element);
    const Point e1 = p[1] - p[0];
    const Point e2 = p[2] - p[0];
    const double area = 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
    return area * (g.transpose() * g);
}

inline Point barycentric_to_point(const std::array<Point, 3>& p, const std::array<double, 3>& b)
{
    return b[0] * p[0] + b[1] * p[1] + b[2] * p[2];
}

/// a(u, v) = (grad u, grad v) over the free dofs.
inline SparseMatrix assemble_stiffness(const PrimalSpace& sp)
{
    const Mesh& m = sp.mesh();
    std::vector<Triplet> trips;
    trips.reserve(9 * static_cast<std::size_t>(m.num_triangles()));
    for (Index t = 0; t < m.num_triangles(); ++t)
    {
        const auto ke = element_stiffness(m.corners(t), t);
        const auto& tri = m.triangles()[t];
        for (int a = 0; a < 3; ++a)
        {
            const Index i = sp.dof(tri[a]);
            if (i == no_index)
                continue;
            for (int b = 0; b < 3; ++b)
            {
                const Index j = sp.dof(tri[b]);
                if (j != no_index)
                    trips.emplace_back(i, j, ke(a, b));
            }
        }
    }
    SparseMatrix A(sp.size(), sp.size());
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

/// (f, phi_i) - a(lift, phi_i) over the free dofs. `lift` holds one value
/// per vertex; only its constrained entries matter.
inline Vector assemble_load(const PrimalSpace& sp, const ScalarField& f, const QuadratureRule& q, const Vector& lift)
{
    const Mesh& m = sp.mesh();
    Vector b = Vector::Zero(sp.size());
    for (Index t = 0; t < m.num_triangles(); ++t)
    {
        const auto p = m.corners(t);
        const auto& tri = m.triangles()[t];
        const double area = m.signed_area(t);

        Eigen::Vector3d fe = Eigen::Vector3d::Zero();
        for (const auto& qp : q.triangle)
        {
            const double fv = f(barycentric_to_point(p, qp.bary)) * qp.weight * area;
            for (int a = 0; a < 3; ++a)
                fe[a] += fv * qp.bary[a];
        }

        bool touches_lift = false;
        Eigen::Vector3d g;
        for (int a = 0; a < 3; ++a)
        {
            g[a] = sp.constrained(tri[a]) ? lift[tri[a]] : 0.0;
            touches_lift = touches_lift || g[a] != 0.0;
        }
        if (touches_lift)
            fe -= element_stiffness(p, t) * g;

        for (int a = 0; a < 3; ++a)
            if (const Index i = sp.dof(tri[a]); i != no_index)
                b[i] += fe[a];
    }
    return b;
}

/// B(i, k) = integral of phi_i over multiplier cell k. Rows run over all
/// mesh vertices (constrained ones included), columns over multiplier dofs.
inline SparseMatrix coupling_matrix(const PrimalSpace& sp, const MultiplierSpace& ms)
{
    const Mesh& m = sp.mesh();
    std::vector<Triplet> trips;
    for (Index k = 0; k < ms.size(); ++k)
    {
        const Index c = ms.cell(k);
        if (ms.zone() == ContactZone::Bulk)
        {
            for (Index v : m.triangles()[c])
                trips.emplace_back(v, k, ms.measure(k) / 3.0);
        }
        else
        {
            for (Index v : m.edges()[c].v)
                trips.emplace_back(v, k, ms.measure(k) / 2.0);
        }
    }
    SparseMatrix B(m.num_vertices(), ms.size());
    B.setFromTriplets(trips.begin(), trips.end());
    return B;
}

/// s(lambda, mu) = sum_F delta gamma h_F |F| [lambda][mu] for piecewise
/// constant multipliers.
inline SparseMatrix assemble_stabilization(const MultiplierSpace& ms, const FaceSet& faces, double delta, double gamma)
{
    std::vector<Triplet> trips;
    trips.reserve(4 * faces.size());
    for (const auto& f : faces.faces)
    {
        const double c = delta * gamma * f.h * f.measure;
        trips.emplace_back(f.plus, f.plus, c);
        trips.emplace_back(f.minus, f.minus, c);
        trips.emplace_back(f.plus, f.minus, -c);
        trips.emplace_back(f.minus, f.plus, -c);
    }
    SparseMatrix S(ms.size(), ms.size());
    S.setFromTriplets(trips.begin(), trips.end());
    return S;
}

/// Interpolated values of a field at the vertices.
inline Vector interpolate(const Mesh& m, const ScalarField& f)
{
    Vector v(m.num_vertices());
    for (Index i = 0; i < m.num_vertices(); ++i)
        v[i] = f(m.vertex(i));
    return v;
}

} // namespace alcontact
