#pragma once

#include "errors.hpp"
#include "mesh.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace alcontact {

using Vector = Eigen::VectorXd;

/// Continuous P1 space with vertices on Dirichlet-tagged edges eliminated.
/// Holds a pointer to its mesh; the mesh must outlive the space.
class PrimalSpace
{
public:
    PrimalSpace() = default;

    PrimalSpace(const Mesh& m, BoundaryTag dirichlet_tag)
        : mesh_(&m), dof_of_vertex_(m.num_vertices(), 0)
    {
        for (const auto& e : m.edges())
            if (e.tag == dirichlet_tag)
                dof_of_vertex_[e.v[0]] = dof_of_vertex_[e.v[1]] = no_index;

        for (Index v = 0; v < m.num_vertices(); ++v)
        {
            if (dof_of_vertex_[v] == no_index)
                continue;
            dof_of_vertex_[v] = static_cast<Index>(free_vertices_.size());
            free_vertices_.push_back(v);
        }
        if (free_vertices_.empty())
            throw invalid_problem("every vertex is constrained; the primal space has no unknowns");
    }

    const Mesh& mesh() const { return *mesh_; }
    Index size() const { return static_cast<Index>(free_vertices_.size()); }
    Index num_constrained() const { return mesh_->num_vertices() - size(); }

    std::span<const Index> free_vertices() const { return free_vertices_; }

    /// Free-dof index of a vertex, or no_index if it is constrained.
    Index dof(Index vertex) const { return dof_of_vertex_[vertex]; }
    bool constrained(Index vertex) const { return dof_of_vertex_[vertex] == no_index; }

    /// Vertex values from free coefficients; constrained vertices take `lift`.
    Vector scatter(const Vector& free, const Vector& lift) const
    {
        Vector full = lift;
        for (Index d = 0; d < size(); ++d)
            full[free_vertices_[d]] = free[d];
        return full;
    }

    Vector gather(const Vector& full) const
    {
        Vector free(size());
        for (Index d = 0; d < size(); ++d)
            free[d] = full[free_vertices_[d]];
        return free;
    }

private:
    const Mesh* mesh_ = nullptr;
    std::vector<Index> dof_of_vertex_;
    std::vector<Index> free_vertices_;
};

inline PrimalSpace build_primal_space(const Mesh& m, BoundaryTag dirichlet_tag = BoundaryTag::Dirichlet)
{
    return PrimalSpace(m, dirichlet_tag);
}

/// Piecewise constants on the contact mesh: one value per triangle for bulk
/// contact, one per Contact-tagged edge for boundary contact.
class MultiplierSpace
{
public:
    MultiplierSpace() = default;

    MultiplierSpace(const Mesh& m, ContactZone zone)
        : mesh_(&m), zone_(zone)
    {
        if (zone == ContactZone::Bulk)
        {
            cells_.resize(m.num_triangles());
            measures_.resize(m.num_triangles());
            for (Index t = 0; t < m.num_triangles(); ++t)
            {
                cells_[t] = t;
                measures_[t] = m.signed_area(t);
            }
        }
        else
        {
            cells_ = contact_edges(m);
            for (Index e : cells_)
                measures_.push_back(m.edge_length(e));
        }
        if (cells_.empty())
            throw invalid_problem("no contact cells: the multiplier space is empty");
    }

    const Mesh& mesh() const { return *mesh_; }
    ContactZone zone() const { return zone_; }
    Index size() const { return static_cast<Index>(cells_.size()); }

    /// Triangle id (bulk) or edge id (boundary) of multiplier dof k.
    Index cell(Index k) const { return cells_[k]; }
    double measure(Index k) const { return measures_[k]; }
    std::span<const Index> cells() const { return cells_; }
    std::span<const double> measures() const { return measures_; }

    double total_measure() const
    {
        double s = 0.0;
        for (double m : measures_)
            s += m;
        return s;
    }

private:
    const Mesh* mesh_ = nullptr;
    ContactZone zone_ = ContactZone::Bulk;
    std::vector<Index> cells_;
    std::vector<double> measures_;
};

inline MultiplierSpace build_multiplier_space(const Mesh& m, ContactZone zone)
{
    return MultiplierSpace(m, zone);
}

} // namespace alcontact
