#pragma once

#include "assembly.hpp"
#include "errors.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"
#include "spaces.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alcontact {

/// F1: symmetric augmented-Lagrangian form (stationary point of the
/// augmented functional). F2: contact condition written on the primal
/// variable. The -alt variants are the algebraically equivalent rewrites
/// through [-(x)]_+ = [x]_+ - x.
enum class Formulation { F1, F2, F1Alt, F2Alt };

inline const char* to_string(Formulation f)
{
    switch (f)
    {
        case Formulation::F1:    return "f1";
        case Formulation::F2:    return "f2";
        case Formulation::F1Alt: return "f1-alt";
        case Formulation::F2Alt: return "f2-alt";
    }
    return "?";
}

inline Formulation parse_formulation(std::string_view s)
{
    if (s == "f1") return Formulation::F1;
    if (s == "f2") return Formulation::F2;
    if (s == "f1-alt") return Formulation::F1Alt;
    if (s == "f2-alt") return Formulation::F2Alt;
    throw std::invalid_argument("unknown formulation '" + std::string(s) + "'");
}

inline bool is_f1_family(Formulation f) { return f == Formulation::F1 || f == Formulation::F1Alt; }

struct ContactConfig
{
    Formulation formulation = Formulation::F1;
    double gamma0 = 0.01;
    double delta = 1.0;
    /// gamma = gamma0 * h^gamma_exponent. The a-priori analysis uses 2s with
    /// s = 1 (bulk) or 1/2 (boundary).
    double gamma_exponent = 1.0;
    /// Resolved augmentation parameter; set by resolve().
    double gamma = 0.0;
};

/// Exponent s of the error analysis: 1 for bulk contact, 1/2 for boundary contact.
inline double s_exponent(ContactZone zone) { return zone == ContactZone::Bulk ? 1.0 : 0.5; }

inline double gamma_of_h(const ContactConfig& cfg, double h)
{
    if (!(h > 0.0))
        throw std::invalid_argument("gamma_of_h: mesh size must be positive");
    return cfg.gamma0 * std::pow(h, cfg.gamma_exponent);
}

inline ContactConfig resolve(ContactConfig cfg, double h)
{
    cfg.gamma = gamma_of_h(cfg, h);
    return cfg;
}

inline double plus(double x) { return x > 0.0 ? x : 0.0; }

enum class Sign { Plus, Minus };

/// P_{gamma+-}(u, lambda) = +-(u - gamma lambda).
inline double p_gamma(double u, double lambda, double gamma, Sign s)
{
    const double v = u - gamma * lambda;
    return s == Sign::Plus ? v : -v;
}

/// lambda + gamma^{-1} [u - gamma lambda]_+ ; vanishes where the contact
/// condition holds in multiplier form.
inline double contact_defect_multiplier(double u, double lambda, double gamma)
{
    return lambda + plus(p_gamma(u, lambda, gamma, Sign::Plus)) / gamma;
}

/// u + [gamma lambda - u]_+ ; the same condition written on the primal variable.
inline double contact_defect_primal(double u, double lambda, double gamma)
{
    return u + plus(p_gamma(u, lambda, gamma, Sign::Minus));
}

/// One quadrature point of the contact mesh with the P1 basis values of the
/// primal cell (triangle, or edge trace; unused slots have vertex no_index).
struct ContactPoint
{
    Index cell;
    std::array<Index, 3> vertex;
    std::array<double, 3> phi;
    double weight;  ///< includes the cell measure
};

inline std::vector<ContactPoint> contact_points(const MultiplierSpace& ms, const QuadratureRule& q)
{
    const Mesh& m = ms.mesh();
    std::vector<ContactPoint> pts;
    for (Index k = 0; k < ms.size(); ++k)
    {
        const Index c = ms.cell(k);
        if (ms.zone() == ContactZone::Bulk)
        {
            const auto& tri = m.triangles()[c];
            for (const auto& qp : q.triangle)
                pts.push_back({k, tri, qp.bary, qp.weight * ms.measure(k)});
        }
        else
        {
            const auto& e = m.edges()[c];
            for (const auto& sp : q.segment)
                pts.push_back({k, {e.v[0], e.v[1], no_index}, {1.0 - sp.t, sp.t, 0.0}, sp.weight * ms.measure(k)});
        }
    }
    return pts;
}

/// Everything the nonlinear residual needs for one mesh and one gamma.
struct DiscreteSystem
{
    const Mesh* mesh = nullptr;
    ContactZone zone = ContactZone::Bulk;
    PrimalSpace primal;
    MultiplierSpace multipliers;
    FaceSet faces;
    double gamma = 0.0;             ///< gamma the stabilization was assembled with
    double delta = 0.0;
    SparseMatrix stiffness;         ///< free x free
    Vector load;                    ///< (f, v) - a(lift, v)
    Vector lift;                    ///< prescribed vertex values (zero at free vertices)
    SparseMatrix stabilization;
    std::vector<ContactPoint> points;

    Index num_primal() const { return primal.size(); }
    Index num_multipliers() const { return multipliers.size(); }
    Index size() const { return num_primal() + num_multipliers(); }

    /// Vertex values of u_h from free coefficients.
    Vector full_primal(const Vector& u) const { return primal.scatter(u, lift); }
};

/// Assemble the system on `m`. `cfg.gamma` must be resolved.
inline DiscreteSystem assemble_system(const Mesh& m, ContactZone zone, const ScalarField& load,
                                      const ScalarField& dirichlet, const ContactConfig& cfg,
                                      const QuadratureRule& q = assembly_quadrature())
{
    if (!(cfg.gamma > 0.0))
        throw std::invalid_argument("assemble_system: gamma must be resolved and positive");
    if (cfg.delta < 0.0)
        throw std::invalid_argument("assemble_system: delta must be nonnegative");

    DiscreteSystem sys;
    sys.mesh = &m;
    sys.zone = zone;
    sys.primal = build_primal_space(m);
    sys.multipliers = build_multiplier_space(m, zone);
    sys.faces = multiplier_faces(m, zone);
    sys.gamma = cfg.gamma;
    sys.delta = cfg.delta;

    sys.lift = Vector::Zero(m.num_vertices());
    for (Index v = 0; v < m.num_vertices(); ++v)
        if (sys.primal.constrained(v))
            sys.lift[v] = dirichlet ? dirichlet(m.vertex(v)) : 0.0;

    sys.stiffness = assemble_stiffness(sys.primal);
    sys.load = assemble_load(sys.primal, load, q, sys.lift);
    sys.stabilization = assemble_stabilization(sys.multipliers, sys.faces, cfg.delta, cfg.gamma);
    sys.points = contact_points(sys.multipliers, q);
    return sys;
}

namespace detail {

inline void check_sizes(const ContactConfig& cfg, const DiscreteSystem& sys, const Vector& u, const Vector& lambda)
{
    if (u.size() != sys.num_primal() || lambda.size() != sys.num_multipliers())
        throw std::invalid_argument("contact: state vector sizes do not match the discrete spaces");
    if (cfg.gamma != sys.gamma)
        throw std::invalid_argument("contact: configuration gamma differs from the assembled system");
}

inline double eval_point(const ContactPoint& p, const Vector& full)
{
    double v = 0.0;
    for (int a = 0; a < 3; ++a)
        if (p.vertex[a] != no_index)
            v += p.phi[a] * full[p.vertex[a]];
    return v;
}

/// Per-point integrands of the nonlinear form: coefficient of v (primal row)
/// and of mu (multiplier row).
struct PointTerms
{
    double primal;
    double multiplier;
};

inline PointTerms point_terms(Formulation f, double u, double lambda, double gamma)
{
    switch (f)
    {
        case Formulation::F1:
        {
            const double a = plus(p_gamma(u, lambda, gamma, Sign::Plus));
            return {a / gamma, -a - gamma * lambda};
        }
        case Formulation::F1Alt:
        {
            const double b = plus(p_gamma(u, lambda, gamma, Sign::Minus));
            return {-lambda + u / gamma + b / gamma, -u - b};
        }
        case Formulation::F2:
        {
            const double b = plus(p_gamma(u, lambda, gamma, Sign::Minus));
            return {-lambda, u + b};
        }
        case Formulation::F2Alt:
        {
            const double a = plus(p_gamma(u, lambda, gamma, Sign::Plus));
            return {-lambda, gamma * lambda + a};
        }
    }
    return {0.0, 0.0};
}

/// Derivatives of point_terms with respect to (u, lambda), with the
/// generalized derivative H(x) = 1 for x > 0 and 0 otherwise.
struct PointJacobian
{
    double uu, ul, lu, ll;
};

inline PointJacobian point_jacobian(Formulation f, double u, double lambda, double gamma)
{
    const double hp = p_gamma(u, lambda, gamma, Sign::Plus) > 0.0 ? 1.0 : 0.0;
    const double hm = p_gamma(u, lambda, gamma, Sign::Minus) > 0.0 ? 1.0 : 0.0;
    switch (f)
    {
        case Formulation::F1:    return {hp / gamma, -hp, -hp, gamma * hp - gamma};
        case Formulation::F1Alt: return {(1.0 - hm) / gamma, hm - 1.0, hm - 1.0, -gamma * hm};
        case Formulation::F2:    return {0.0, -1.0, 1.0 - hm, gamma * hm};
        case Formulation::F2Alt: return {0.0, -1.0, hp, gamma - gamma * hp};
    }
    return {};
}

inline double stabilization_sign(Formulation f) { return is_f1_family(f) ? -1.0 : 1.0; }

} // namespace detail

/// G(U) with (G(U), V) = A_h[(u_h, lambda_h), (v_h, mu_h)] - (f, v_h) for the
/// unit vectors V. Layout: free primal dofs first, then multipliers.
inline Vector residual(const ContactConfig& cfg, const DiscreteSystem& sys, const Vector& u, const Vector& lambda)
{
    detail::check_sizes(cfg, sys, u, lambda);
    const Index nv = sys.num_primal();

    Vector g(sys.size());
    g.head(nv) = sys.stiffness * u - sys.load;
    g.tail(sys.num_multipliers()) = detail::stabilization_sign(cfg.formulation) * (sys.stabilization * lambda);

    const Vector full = sys.full_primal(u);
    for (const auto& p : sys.points)
    {
        const double uq = detail::eval_point(p, full);
        const auto t = detail::point_terms(cfg.formulation, uq, lambda[p.cell], cfg.gamma);
        for (int a = 0; a < 3; ++a)
        {
            if (p.vertex[a] == no_index)
                continue;
            if (const Index i = sys.primal.dof(p.vertex[a]); i != no_index)
                g[i] += p.weight * t.primal * p.phi[a];
        }
        g[nv + p.cell] += p.weight * t.multiplier;
    }
    return g;
}

inline Vector residual(const ContactConfig& cfg, const DiscreteSystem& sys, const Vector& state)
{
    if (state.size() != sys.size())
        throw std::invalid_argument("contact: state vector size does not match the system");
    return residual(cfg, sys, state.head(sys.num_primal()), state.tail(sys.num_multipliers()));
}

inline SparseMatrix generalized_jacobian(const ContactConfig& cfg, const DiscreteSystem& sys, const Vector& u,
                                         const Vector& lambda)
{
    detail::check_sizes(cfg, sys, u, lambda);
    const Index nv = sys.num_primal();

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(sys.stiffness.nonZeros() + sys.stabilization.nonZeros())
                  + 16 * sys.points.size());

    for (Index i = 0; i < sys.stiffness.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(sys.stiffness, i); it; ++it)
            trips.emplace_back(i, it.col(), it.value());

    const double ssign = detail::stabilization_sign(cfg.formulation);
    for (Index i = 0; i < sys.stabilization.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(sys.stabilization, i); it; ++it)
            trips.emplace_back(nv + i, nv + it.col(), ssign * it.value());

    const Vector full = sys.full_primal(u);
    for (const auto& p : sys.points)
    {
        const double uq = detail::eval_point(p, full);
        const auto d = detail::point_jacobian(cfg.formulation, uq, lambda[p.cell], cfg.gamma);
        const Index row_l = nv + p.cell;
        for (int a = 0; a < 3; ++a)
        {
            const Index i = p.vertex[a] == no_index ? no_index : sys.primal.dof(p.vertex[a]);
            if (i == no_index)
                continue;
            const double wa = p.weight * p.phi[a];
            if (d.uu != 0.0)
                for (int b = 0; b < 3; ++b)
                {
                    const Index j = p.vertex[b] == no_index ? no_index : sys.primal.dof(p.vertex[b]);
                    if (j != no_index)
                        trips.emplace_back(i, j, wa * d.uu * p.phi[b]);
                }
            if (d.ul != 0.0)
                trips.emplace_back(i, row_l, wa * d.ul);
            if (d.lu != 0.0)
                trips.emplace_back(row_l, i, wa * d.lu);
        }
        if (d.ll != 0.0)
            trips.emplace_back(row_l, row_l, p.weight * d.ll);
    }

    SparseMatrix J(sys.size(), sys.size());
    J.setFromTriplets(trips.begin(), trips.end());
    return J;
}

inline SparseMatrix generalized_jacobian(const ContactConfig& cfg, const DiscreteSystem& sys, const Vector& state)
{
    return generalized_jacobian(cfg, sys, state.head(sys.num_primal()), state.tail(sys.num_multipliers()));
}

/// Contact indicator per quadrature point: u_h - gamma lambda_h > 0.
inline std::vector<bool> active_set(const ContactConfig& cfg, const DiscreteSystem& sys, const Vector& u,
                                    const Vector& lambda)
{
    const Vector full = sys.full_primal(u);
    std::vector<bool> active(sys.points.size());
    for (std::size_t k = 0; k < sys.points.size(); ++k)
    {
        const auto& p = sys.points[k];
        active[k] = p_gamma(detail::eval_point(p, full), lambda[p.cell], cfg.gamma, Sign::Plus) > 0.0;
    }
    return active;
}

/// Branch of the positive part each point was linearized on: true where the
/// Jacobian takes u - gamma lambda (rather than 0) inside [.]_+. Differs from
/// active_set() only at ties, where F1/F2-alt pick 0 and F1-alt/F2 pick the
/// linear branch. If it is unchanged across a Newton step, G is affine along
/// that step.
inline std::vector<bool> linearization_branch(const ContactConfig& cfg, const DiscreteSystem& sys, const Vector& u,
                                              const Vector& lambda)
{
    const Vector full = sys.full_primal(u);
    const bool strict = cfg.formulation == Formulation::F1 || cfg.formulation == Formulation::F2Alt;
    std::vector<bool> branch(sys.points.size());
    for (std::size_t k = 0; k < sys.points.size(); ++k)
    {
        const auto& p = sys.points[k];
        const double v = p_gamma(detail::eval_point(p, full), lambda[p.cell], cfg.gamma, Sign::Plus);
        branch[k] = strict ? v > 0.0 : v >= 0.0;
    }
    return branch;
}

} // namespace alcontact
