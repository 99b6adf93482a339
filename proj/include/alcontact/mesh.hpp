#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace alcontact {

using Index = std::int32_t;
inline constexpr Index no_index = -1;

using Point = Eigen::Vector2d;

enum class BoundaryTag : std::uint8_t { Dirichlet, Neumann, Contact };

/// Where the contact condition lives: in the bulk (obstacle problem) or on
/// a boundary segment (Signorini problem).
enum class ContactZone { Bulk, Boundary };

inline const char* to_string(BoundaryTag t)
{
    switch (t)
    {
        case BoundaryTag::Dirichlet: return "dirichlet";
        case BoundaryTag::Neumann:   return "neumann";
        case BoundaryTag::Contact:   return "contact";
    }
    return "?";
}

struct Edge
{
    /// Oriented so that `left` lies to the left of v[0] -> v[1].
    std::array<Index, 2> v;
    Index left = no_index;
    Index right = no_index;
    std::optional<BoundaryTag> tag;

    bool is_boundary() const { return right == no_index; }
};

/// Tag chosen from the midpoint of a boundary edge.
using BoundaryTagger = std::function<BoundaryTag(const Point&)>;

/// Conforming triangulation of a polygon. Immutable after construction.
class Mesh
{
public:
    using Triangle = std::array<Index, 3>;
    using EdgeTagger = std::function<BoundaryTag(Index, Index)>;

    Mesh() = default;

    Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles, const EdgeTagger& tagger)
        : vertices_(std::move(vertices)), triangles_(std::move(triangles))
    {
        const auto nv = static_cast<Index>(vertices_.size());
        for (std::size_t t = 0; t < triangles_.size(); ++t)
        {
            for (Index v : triangles_[t])
                if (v < 0 || v >= nv)
                    throw std::invalid_argument("triangle " + std::to_string(t) + " references a missing vertex");
            if (!(signed_area(static_cast<Index>(t)) > 0.0))
                throw std::invalid_argument("triangle " + std::to_string(t) + " is degenerate or clockwise");
        }
        build_edges(tagger);
    }

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<Edge>& edges() const { return edges_; }

    Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
    Index num_triangles() const { return static_cast<Index>(triangles_.size()); }
    Index num_edges() const { return static_cast<Index>(edges_.size()); }

    /// Mesh size convention h = 1/sqrt(number of nodes).
    double h() const { return 1.0 / std::sqrt(static_cast<double>(vertices_.size())); }

    const Point& vertex(Index i) const { return vertices_[i]; }

    std::array<Point, 3> corners(Index t) const
    {
        const auto& tri = triangles_[t];
        return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
    }

    double signed_area(Index t) const
    {
        const auto& tri = triangles_[t];
        const Point e1 = vertices_[tri[1]] - vertices_[tri[0]];
        const Point e2 = vertices_[tri[2]] - vertices_[tri[0]];
        return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
    }

    double area() const
    {
        double a = 0.0;
        for (Index t = 0; t < num_triangles(); ++t)
            a += signed_area(t);
        return a;
    }

    double edge_length(Index e) const
    {
        return (vertices_[edges_[e].v[1]] - vertices_[edges_[e].v[0]]).norm();
    }

    Point edge_midpoint(Index e) const
    {
        return 0.5 * (vertices_[edges_[e].v[0]] + vertices_[edges_[e].v[1]]);
    }

    /// Edge index of {a, b}, or no_index.
    Index find_edge(Index a, Index b) const
    {
        auto it = edge_lookup_.find(edge_key(a, b));
        return it == edge_lookup_.end() ? no_index : it->second;
    }

    /// Edge opposite to local vertex k of triangle t.
    Index triangle_edge(Index t, int k) const { return triangle_edges_[t][k]; }

private:
    static std::uint64_t edge_key(Index a, Index b)
    {
        const auto lo = static_cast<std::uint64_t>(std::min(a, b));
        const auto hi = static_cast<std::uint64_t>(std::max(a, b));
        return (hi << 32) | lo;
    }

    void build_edges(const EdgeTagger& tagger)
    {
        edges_.clear();
        edge_lookup_.clear();
        edge_lookup_.reserve(triangles_.size() * 2);
        triangle_edges_.assign(triangles_.size(), {no_index, no_index, no_index});

        for (Index t = 0; t < num_triangles(); ++t)
        {
            const auto& tri = triangles_[t];
            for (int k = 0; k < 3; ++k)
            {
                const Index a = tri[(k + 1) % 3];
                const Index b = tri[(k + 2) % 3];
                auto [it, inserted] = edge_lookup_.try_emplace(edge_key(a, b), static_cast<Index>(edges_.size()));
                if (inserted)
                {
                    Edge e;
                    e.v = {a, b};
                    e.left = t;
                    edges_.push_back(e);
                }
                else
                {
                    Edge& e = edges_[it->second];
                    if (e.right != no_index || e.v[0] != b)
                        throw std::invalid_argument("edge shared by more than two triangles or inconsistent orientation");
                    e.right = t;
                }
                triangle_edges_[t][k] = it->second;
            }
        }

        for (auto& e : edges_)
            if (e.is_boundary())
                e.tag = tagger(e.v[0], e.v[1]);
    }

    std::vector<Point> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<Edge> edges_;
    std::vector<std::array<Index, 3>> triangle_edges_;
    std::unordered_map<std::uint64_t, Index> edge_lookup_;
};

namespace detail {

inline Mesh::EdgeTagger midpoint_tagger(const std::vector<Point>& vertices, const BoundaryTagger& tagger)
{
    return [&vertices, tagger](Index a, Index b) { return tagger(0.5 * (vertices[a] + vertices[b])); };
}

} // namespace detail

/// Structured triangulation of the rectangle [lo, hi] with n cells per side,
/// each cell split along its lower-left to upper-right diagonal.
inline Mesh square_mesh(const Point& lo, const Point& hi, Index n, const BoundaryTagger& tagger)
{
    if (n < 1)
        throw std::invalid_argument("square_mesh: need at least one cell per side");
    if (!(lo.x() < hi.x() && lo.y() < hi.y()))
        throw std::invalid_argument("square_mesh: lo must be below hi componentwise");

    std::vector<Point> vertices;
    vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (Index j = 0; j <= n; ++j)
        for (Index i = 0; i <= n; ++i)
            vertices.emplace_back(lo.x() + (hi.x() - lo.x()) * i / n, lo.y() + (hi.y() - lo.y()) * j / n);

    std::vector<Mesh::Triangle> triangles;
    triangles.reserve(2 * static_cast<std::size_t>(n) * n);
    auto id = [n](Index i, Index j) { return j * (n + 1) + i; };
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
        {
            triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }

    return Mesh(vertices, std::move(triangles), detail::midpoint_tagger(vertices, tagger));
}

/// L-shaped domain (-2,2)^2 minus [0,2)x(-2,0], n cells per unit length.
/// The re-entrant corner sits at the origin.
inline Mesh l_shaped_mesh(Index n, const BoundaryTagger& tagger)
{
    if (n < 1)
        throw std::invalid_argument("l_shaped_mesh: need at least one cell per unit");

    const Index cells = 4 * n;
    const double step = 4.0 / cells;
    auto removed = [](double cx, double cy) { return cx > 0.0 && cy < 0.0; };

    std::vector<Index> remap(static_cast<std::size_t>(cells + 1) * (cells + 1), no_index);
    std::vector<Point> vertices;
    auto grid = [cells](Index i, Index j) { return j * (cells + 1) + i; };
    auto use = [&](Index i, Index j) {
        Index& slot = remap[grid(i, j)];
        if (slot == no_index)
        {
            slot = static_cast<Index>(vertices.size());
            vertices.emplace_back(-2.0 + step * i, -2.0 + step * j);
        }
        return slot;
    };

    // Number vertices in grid order so the result is independent of the cell sweep.
    for (Index j = 0; j <= cells; ++j)
        for (Index i = 0; i <= cells; ++i)
        {
            bool touched = false;
            for (Index dj = -1; dj <= 0 && !touched; ++dj)
                for (Index di = -1; di <= 0 && !touched; ++di)
                {
                    const Index ci = i + di, cj = j + dj;
                    if (ci < 0 || cj < 0 || ci >= cells || cj >= cells)
                        continue;
                    touched = !removed(-2.0 + step * (ci + 0.5), -2.0 + step * (cj + 0.5));
                }
            if (touched)
                use(i, j);
        }

    std::vector<Mesh::Triangle> triangles;
    for (Index j = 0; j < cells; ++j)
        for (Index i = 0; i < cells; ++i)
        {
            if (removed(-2.0 + step * (i + 0.5), -2.0 + step * (j + 0.5)))
                continue;
            const Index v00 = remap[grid(i, j)], v10 = remap[grid(i + 1, j)];
            const Index v11 = remap[grid(i + 1, j + 1)], v01 = remap[grid(i, j + 1)];
            triangles.push_back({v00, v10, v11});
            triangles.push_back({v00, v11, v01});
        }

    return Mesh(vertices, std::move(triangles), detail::midpoint_tagger(vertices, tagger));
}

/// Red refinement: every triangle is split into four through its edge
/// midpoints. Parent vertices keep their indices; the midpoint of parent
/// edge e becomes vertex num_vertices() + e.
inline Mesh uniform_refine(const Mesh& m)
{
    const Index nv = m.num_vertices();
    std::vector<Point> vertices = m.vertices();
    vertices.reserve(static_cast<std::size_t>(nv + m.num_edges()));
    for (Index e = 0; e < m.num_edges(); ++e)
        vertices.push_back(m.edge_midpoint(e));

    std::vector<Mesh::Triangle> triangles;
    triangles.reserve(4 * static_cast<std::size_t>(m.num_triangles()));
    for (Index t = 0; t < m.num_triangles(); ++t)
    {
        const auto& tri = m.triangles()[t];
        // mid[k] is the midpoint of the edge opposite local vertex k
        const Index m0 = nv + m.triangle_edge(t, 0);
        const Index m1 = nv + m.triangle_edge(t, 1);
        const Index m2 = nv + m.triangle_edge(t, 2);
        triangles.push_back({tri[0], m2, m1});
        triangles.push_back({m2, tri[1], m0});
        triangles.push_back({m1, m0, tri[2]});
        triangles.push_back({m2, m0, m1});
    }

    auto tagger = [&m, nv](Index a, Index b) -> BoundaryTag {
        const Index mid = std::max(a, b);
        const auto& parent = m.edges()[mid - nv];
        return *parent.tag;
    };
    return Mesh(std::move(vertices), std::move(triangles), tagger);
}

/// Face of the multiplier mesh: an interior edge (bulk contact) or a junction
/// point between two contact edges (boundary contact).
struct Face
{
    Index plus;         ///< first adjacent multiplier cell
    Index minus;        ///< second adjacent multiplier cell
    double h;           ///< local mesh size h_F
    double measure;     ///< |F|: edge length, or 1 for a point
};

struct FaceSet
{
    std::vector<Face> faces;
    std::vector<std::string> warnings;

    std::size_t size() const { return faces.size(); }
};

/// Boundary edges tagged Contact, in edge order. This ordering defines the
/// multiplier numbering for boundary contact.
inline std::vector<Index> contact_edges(const Mesh& m)
{
    std::vector<Index> out;
    for (Index e = 0; e < m.num_edges(); ++e)
        if (m.edges()[e].tag == BoundaryTag::Contact)
            out.push_back(e);
    return out;
}

inline FaceSet multiplier_faces(const Mesh& m, ContactZone zone)
{
    FaceSet fs;
    if (zone == ContactZone::Bulk)
    {
        for (Index e = 0; e < m.num_edges(); ++e)
        {
            const Edge& edge = m.edges()[e];
            if (edge.is_boundary())
                continue;
            const double len = m.edge_length(e);
            fs.faces.push_back({edge.left, edge.right, len, len});
        }
        return fs;
    }

    const auto cells = contact_edges(m);
    if (cells.size() < 2)
    {
        fs.warnings.push_back("fewer than two contact edges: multiplier stabilization is empty");
        return fs;
    }

    std::map<Index, std::vector<Index>> at_vertex;
    for (Index c = 0; c < static_cast<Index>(cells.size()); ++c)
        for (Index v : m.edges()[cells[c]].v)
            at_vertex[v].push_back(c);

    for (const auto& [v, adj] : at_vertex)
    {
        if (adj.size() != 2)
            continue;
        const double hf = 0.5 * (m.edge_length(cells[adj[0]]) + m.edge_length(cells[adj[1]]));
        fs.faces.push_back({adj[0], adj[1], hf, 1.0});
    }
    return fs;
}

/// Plain-text dump: header `NV NT NE`, then `x y`, `i j k`, `i j tag` lines.
inline void write_mesh(std::ostream& os, const Mesh& m)
{
    const auto prec = os.precision(std::numeric_limits<double>::max_digits10);
    os << m.num_vertices() << ' ' << m.num_triangles() << ' ' << m.num_edges() << '\n';
    for (const auto& p : m.vertices())
        os << p.x() << ' ' << p.y() << '\n';
    for (const auto& t : m.triangles())
        os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (const auto& e : m.edges())
        os << e.v[0] << ' ' << e.v[1] << ' ' << (e.tag ? to_string(*e.tag) : "interior") << '\n';
    os.precision(prec);
}

inline Mesh read_mesh(std::istream& is)
{
    std::size_t nv = 0, nt = 0, ne = 0;
    if (!(is >> nv >> nt >> ne))
        throw std::runtime_error("read_mesh: bad header");

    std::vector<Point> vertices(nv);
    for (auto& p : vertices)
        if (!(is >> p.x() >> p.y()))
            throw std::runtime_error("read_mesh: truncated vertex block");

    std::vector<Mesh::Triangle> triangles(nt);
    for (auto& t : triangles)
        if (!(is >> t[0] >> t[1] >> t[2]))
            throw std::runtime_error("read_mesh: truncated triangle block");

    std::map<std::pair<Index, Index>, BoundaryTag> tags;
    for (std::size_t k = 0; k < ne; ++k)
    {
        Index a, b;
        std::string tag;
        if (!(is >> a >> b >> tag))
            throw std::runtime_error("read_mesh: truncated edge block");
        const auto key = std::minmax(a, b);
        if (tag == "dirichlet")
            tags[key] = BoundaryTag::Dirichlet;
        else if (tag == "neumann")
            tags[key] = BoundaryTag::Neumann;
        else if (tag == "contact")
            tags[key] = BoundaryTag::Contact;
        else if (tag != "interior")
            throw std::runtime_error("read_mesh: unknown edge tag '" + tag + "'");
    }

    auto tagger = [&tags](Index a, Index b) {
        auto it = tags.find(std::minmax(a, b));
        if (it == tags.end())
            throw std::runtime_error("read_mesh: boundary edge without tag");
        return it->second;
    };
    return Mesh(std::move(vertices), std::move(triangles), tagger);
}

} // namespace alcontact
