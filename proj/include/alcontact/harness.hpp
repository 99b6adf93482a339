#pragma once

#include "assembly.hpp"
#include "contact.hpp"
#include "mesh.hpp"
#include "problems.hpp"
#include "quadrature.hpp"
#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace alcontact {

/// || u_h - u ||_{L2} for a P1 field given by vertex values.
inline double l2_error(const Mesh& m, const Vector& uh, const ScalarField& exact,
                       const QuadratureRule& q = error_quadrature())
{
    double e = 0.0;
    for (Index t = 0; t < m.num_triangles(); ++t)
    {
        const auto p = m.corners(t);
        const auto& tri = m.triangles()[t];
        const double area = m.signed_area(t);
        for (const auto& qp : q.triangle)
        {
            const double v = qp.bary[0] * uh[tri[0]] + qp.bary[1] * uh[tri[1]] + qp.bary[2] * uh[tri[2]];
            const double d = v - exact(barycentric_to_point(p, qp.bary));
            e += qp.weight * area * d * d;
        }
    }
    return std::sqrt(e);
}

/// L2 distance between two P1 fields on the same mesh.
inline double l2_error(const Mesh& m, const Vector& uh, const Vector& reference)
{
    const Vector d = uh - reference;
    double e = 0.0;
    // exact P1 mass matrix: area/12 * (1 + delta_ab)
    for (Index t = 0; t < m.num_triangles(); ++t)
    {
        const auto& tri = m.triangles()[t];
        const double a = d[tri[0]], b = d[tri[1]], c = d[tri[2]];
        e += m.signed_area(t) / 6.0 * (a * a + b * b + c * c + a * b + b * c + c * a);
    }
    return std::sqrt(std::max(e, 0.0));
}

/// | u_h - u |_{H1} seminorm.
inline double h1_error(const Mesh& m, const Vector& uh, const GradientField& exact_gradient,
                       const QuadratureRule& q = error_quadrature())
{
    double e = 0.0;
    for (Index t = 0; t < m.num_triangles(); ++t)
    {
        const auto p = m.corners(t);
        const auto& tri = m.triangles()[t];
        const double area = m.signed_area(t);
        const Point gh = p1_gradients(p, t) * Eigen::Vector3d(uh[tri[0]], uh[tri[1]], uh[tri[2]]);
        for (const auto& qp : q.triangle)
            e += qp.weight * area * (gh - exact_gradient(barycentric_to_point(p, qp.bary))).squaredNorm();
    }
    return std::sqrt(e);
}

inline double h1_error(const Mesh& m, const Vector& uh, const Vector& reference)
{
    const Vector d = uh - reference;
    double e = 0.0;
    for (Index t = 0; t < m.num_triangles(); ++t)
    {
        const auto& tri = m.triangles()[t];
        const Point g = p1_gradients(m.corners(t), t) * Eigen::Vector3d(d[tri[0]], d[tri[1]], d[tri[2]]);
        e += m.signed_area(t) * g.squaredNorm();
    }
    return std::sqrt(e);
}

/// Exact P1 prolongation onto uniform_refine(coarse).
inline Vector prolongate(const Mesh& coarse, const Vector& values)
{
    Vector fine(coarse.num_vertices() + coarse.num_edges());
    fine.head(coarse.num_vertices()) = values;
    for (Index e = 0; e < coarse.num_edges(); ++e)
    {
        const auto& v = coarse.edges()[e].v;
        fine[coarse.num_vertices() + e] = 0.5 * (values[v[0]] + values[v[1]]);
    }
    return fine;
}

struct StudyRow
{
    int level = 0;
    Index nno = 0;
    double h = 0.0;
    double err_l2 = 0.0;
    double err_h1 = 0.0;
    std::optional<double> ord_l2;
    std::optional<double> ord_h1;
    int newton_its = 0;
    bool converged = false;
    double final_residual = 0.0;
};

struct ConvergenceTable
{
    std::string problem;
    std::vector<StudyRow> rows;
    double slope_l2 = 2.0;
    double slope_h1 = 1.0;

    bool all_converged() const
    {
        return std::all_of(rows.begin(), rows.end(), [](const StudyRow& r) { return r.converged; });
    }
};

/// Observed orders from consecutive rows: log(e_prev / e) / log(h_prev / h).
inline void compute_orders(ConvergenceTable& table)
{
    for (std::size_t k = 0; k < table.rows.size(); ++k)
    {
        auto& r = table.rows[k];
        r.ord_l2.reset();
        r.ord_h1.reset();
        if (k == 0)
            continue;
        const auto& p = table.rows[k - 1];
        const double lh = std::log(p.h / r.h);
        r.ord_l2 = std::log(p.err_l2 / r.err_l2) / lh;
        r.ord_h1 = std::log(p.err_h1 / r.err_h1) / lh;
    }
}

/// Data handed to the per-level observer of run_study.
struct LevelResult
{
    int level;
    const Mesh& mesh;
    const ContactConfig& config;
    const DiscreteSystem& system;
    const DiscreteSolution& solution;
    const SolveReport& report;
};

struct StudyOptions
{
    int first_level = 0;
    int levels = 2;
    /// Extra refinements of the overkill reference beyond the finest level
    /// (problems without an exact solution).
    int overkill_extra = 2;
    SolveSettings settings;
    std::function<void(const LevelResult&)> on_level;
};

namespace detail {

struct LevelSolve
{
    Vector full;
    DiscreteSolution solution;
    SolveReport report;
};

inline LevelSolve solve_level(const ProblemSpec& problem, const Mesh& m, const ContactConfig& cfg, int level,
                              const StudyOptions& opts)
{
    const ContactConfig lc = resolve(cfg, m.h());
    const DiscreteSystem sys = assemble_system(m, problem.zone, problem.load, problem.dirichlet, lc);
    LevelSolve out;
    try
    {
        auto [sol, rep] = semismooth_newton(lc, sys, opts.settings);
        out.solution = std::move(sol);
        out.report = std::move(rep);
    }
    catch (const solver_error& e)
    {
        out.solution.u = Vector::Zero(sys.num_primal());
        out.solution.lambda = Vector::Zero(sys.num_multipliers());
        out.report.converged = false;
        out.report.iterations = e.iteration();
        out.report.final_residual = std::numeric_limits<double>::quiet_NaN();
    }
    out.full = sys.full_primal(out.solution.u);
    if (opts.on_level)
        opts.on_level({level, m, lc, sys, out.solution, out.report});
    return out;
}

} // namespace detail

/// Solve on `levels` consecutive uniform refinements starting at
/// `first_level` and tabulate errors against the exact solution, or against
/// an overkill solution when none is known. Non-converged levels are flagged
/// and the study continues.
inline ConvergenceTable run_study(const ProblemSpec& problem, const ContactConfig& cfg, const StudyOptions& opts)
{
    if (opts.levels < 2)
        throw std::invalid_argument("run_study: need at least two levels");
    if (opts.first_level < 0 || opts.overkill_extra < 0)
        throw std::invalid_argument("run_study: negative level");

    ConvergenceTable table;
    table.problem = problem.name;
    table.slope_l2 = problem.slope_l2;
    table.slope_h1 = problem.slope_h1;

    const bool has_exact = problem.exact && problem.exact_gradient;
    const int last = opts.first_level + opts.levels - 1;

    std::vector<Mesh> meshes;
    meshes.reserve(static_cast<std::size_t>(last + opts.overkill_extra + 1));
    meshes.push_back(problem.base_mesh());
    for (int l = 1; l <= last; ++l)
        meshes.push_back(uniform_refine(meshes.back()));

    std::vector<Vector> solutions;
    for (int l = opts.first_level; l <= last; ++l)
    {
        const Mesh& m = meshes[l];
        auto ls = detail::solve_level(problem, m, cfg, l, opts);

        StudyRow row;
        row.level = l;
        row.nno = m.num_vertices();
        row.h = m.h();
        row.newton_its = ls.report.iterations;
        row.converged = ls.report.converged;
        row.final_residual = ls.report.final_residual;
        if (has_exact)
        {
            row.err_l2 = l2_error(m, ls.full, *problem.exact);
            row.err_h1 = h1_error(m, ls.full, *problem.exact_gradient);
        }
        table.rows.push_back(row);
        solutions.push_back(std::move(ls.full));
    }

    if (!has_exact)
    {
        // The reference solve must finish before any error is evaluated.
        for (int l = last + 1; l <= last + opts.overkill_extra; ++l)
            meshes.push_back(uniform_refine(meshes.back()));
        const int ref_level = last + opts.overkill_extra;
        const Mesh& fine = meshes[ref_level];
        auto ref = detail::solve_level(problem, fine, cfg, ref_level, opts);
        if (!ref.report.converged)
            for (auto& r : table.rows)
                r.converged = false;

        for (std::size_t k = 0; k < table.rows.size(); ++k)
        {
            Vector v = solutions[k];
            for (int l = table.rows[k].level; l < ref_level; ++l)
                v = prolongate(meshes[l], v);
            table.rows[k].err_l2 = l2_error(fine, v, ref.full);
            table.rows[k].err_h1 = h1_error(fine, v, ref.full);
        }
    }

    compute_orders(table);
    return table;
}

namespace detail {

inline std::string format_number(const char* fmt, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

} // namespace detail

inline std::string to_csv(const ConvergenceTable& table)
{
    std::string out = "level,nno,h,err_l2,err_h1,ord_l2,ord_h1,newton_its\n";
    for (const auto& r : table.rows)
    {
        out += std::to_string(r.level) + ',' + std::to_string(r.nno) + ',';
        out += detail::format_number("%.10e", r.h) + ',';
        out += detail::format_number("%.10e", r.err_l2) + ',';
        out += detail::format_number("%.10e", r.err_h1) + ',';
        out += (r.ord_l2 ? detail::format_number("%.6f", *r.ord_l2) : std::string()) + ',';
        out += (r.ord_h1 ? detail::format_number("%.6f", *r.ord_h1) : std::string()) + ',';
        out += std::to_string(r.newton_its) + '\n';
    }
    return out;
}

/// Log-log plot of both error norms against h, with reference lines of the
/// table's inclinations anchored at the finest point of each series.
inline std::string to_svg(const ConvergenceTable& table)
{
    constexpr double W = 640, H = 480, left = 80, right = 160, top = 30, bottom = 60;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (table.rows.empty())
    {
        os << "</svg>\n";
        return os.str();
    }

    double hmin = 1e300, hmax = -1e300, emin = 1e300, emax = -1e300;
    for (const auto& r : table.rows)
    {
        hmin = std::min(hmin, r.h);
        hmax = std::max(hmax, r.h);
        for (double e : {r.err_l2, r.err_h1})
            if (e > 0.0 && std::isfinite(e))
            {
                emin = std::min(emin, e);
                emax = std::max(emax, e);
            }
    }
    if (!(emin <= emax))
        emin = emax = 1.0;
    const double lx0 = std::floor(std::log10(hmin) * 4) / 4 - 0.1, lx1 = std::ceil(std::log10(hmax) * 4) / 4 + 0.1;
    const double ly0 = std::floor(std::log10(emin)) - 0.5, ly1 = std::ceil(std::log10(emax)) + 0.2;
    auto X = [&](double h) { return left + (std::log10(h) - lx0) / (lx1 - lx0) * (W - left - right); };
    auto Y = [&](double e) { return H - bottom - (std::log10(e) - ly0) / (ly1 - ly0) * (H - top - bottom); };
    auto num = [](double v) { return detail::format_number("%.2f", v); };

    os << "<g stroke=\"black\" fill=\"none\">\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
       << H - top - bottom << "\"/>\n</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d)
        os << "<text x=\"" << left - 8 << "\" y=\"" << num(Y(std::pow(10.0, d)) + 4)
           << "\" text-anchor=\"end\">1e" << d << "</text>\n";
    for (const auto& r : table.rows)
        os << "<text x=\"" << num(X(r.h)) << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\">"
           << detail::format_number("%.3g", r.h) << "</text>\n";
    os << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">h = 1/sqrt(NNO)</text>\n";
    os << "<text x=\"" << (left + W - right) / 2 << "\" y=\"18\" text-anchor=\"middle\">" << table.problem
       << "</text>\n</g>\n";

    struct Series
    {
        const char* label;
        double StudyRow::*err;
        const char* color;
        double slope;
        const char* dash;
    };
    const Series series[] = {{"L2 error", &StudyRow::err_l2, "#1f77b4", table.slope_l2, "8,4"},
                             {"H1 error", &StudyRow::err_h1, "#d62728", table.slope_h1, "2,3"}};

    int legend = 0;
    for (const auto& s : series)
    {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        for (const auto& r : table.rows)
            if (r.*s.err > 0.0)
                os << num(X(r.h)) << ',' << num(Y(r.*s.err)) << ' ';
        os << "\"/>\n";
        for (const auto& r : table.rows)
            if (r.*s.err > 0.0)
                os << "<circle cx=\"" << num(X(r.h)) << "\" cy=\"" << num(Y(r.*s.err)) << "\" r=\"3\" fill=\""
                   << s.color << "\"/>\n";

        // reference line e = C h^slope through a point half a decade below the finest error
        const auto& fin = table.rows.back();
        if (fin.*s.err > 0.0)
        {
            const double c = fin.*s.err / std::sqrt(10.0) / std::pow(fin.h, s.slope);
            const double h0 = table.rows.front().h, h1 = fin.h;
            os << "<line x1=\"" << num(X(h0)) << "\" y1=\"" << num(Y(c * std::pow(h0, s.slope))) << "\" x2=\""
               << num(X(h1)) << "\" y2=\"" << num(Y(c * std::pow(h1, s.slope))) << "\" stroke=\"black\" stroke-dasharray=\""
               << s.dash << "\"/>\n";
        }

        const double ly = top + 20 + 40 * legend++;
        os << "<line x1=\"" << W - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 35 << "\" y2=\"" << ly
           << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - right + 40 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"12\">"
           << s.label << "</text>\n";
        os << "<line x1=\"" << W - right + 10 << "\" y1=\"" << ly + 18 << "\" x2=\"" << W - right + 35 << "\" y2=\""
           << ly + 18 << "\" stroke=\"black\" stroke-dasharray=\"" << s.dash << "\"/>\n";
        os << "<text x=\"" << W - right + 40 << "\" y=\"" << ly + 22 << "\" font-family=\"sans-serif\" font-size=\"12\">slope "
           << detail::format_number("%.4g", s.slope) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

struct OutputPaths
{
    std::filesystem::path csv;
    std::filesystem::path svg;
};

inline OutputPaths default_output_paths(const std::filesystem::path& dir, const std::string& problem)
{
    return {dir / (problem + "_convergence.csv"), dir / (problem + "_convergence.svg")};
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& contents)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f << contents;
    if (!f)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

} // namespace detail

inline void emit_outputs(const ConvergenceTable& table, const OutputPaths& paths)
{
    if (table.rows.empty())
        throw std::invalid_argument("emit_outputs: empty table");
    detail::write_file(paths.csv, to_csv(table));
    detail::write_file(paths.svg, to_svg(table));
}

/// Flat (x, y, u_h) dump, one vertex per line.
inline void write_solution(std::ostream& os, const Mesh& m, const Vector& values)
{
    const auto prec = os.precision(std::numeric_limits<double>::max_digits10);
    for (Index v = 0; v < m.num_vertices(); ++v)
        os << m.vertex(v).x() << ' ' << m.vertex(v).y() << ' ' << values[v] << '\n';
    os.precision(prec);
}

} // namespace alcontact
