#pragma once

#include "contact.hpp"
#include "errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace alcontact {

enum class LinearSolverKind { SparseLU, DenseLU };

struct SolveSettings
{
    double tol_residual = 1e-10;
    int max_newton = 100;
    LinearSolverKind linear_solver = LinearSolverKind::SparseLU;
    /// Newton step scaling in (0, 1]; 1 is plain semismooth Newton.
    double damping = 1.0;
};

struct SolveReport
{
    bool converged = false;
    /// Set when convergence was declared because the linearization branch
    /// repeated after an exact linear solve (G is then affine along the step
    /// and the residual is at rounding level).
    bool active_set_stagnation = false;
    int iterations = 0;
    double final_residual = 0.0;
    std::vector<double> residual_history;
    std::vector<std::size_t> active_set_sizes;
};

struct DiscreteSolution
{
    Vector u;        ///< free primal coefficients
    Vector lambda;   ///< multiplier per contact cell
    int newton_iterations = 0;
    std::vector<double> residual_history;
};

struct LinearSolveInfo
{
    double relative_residual = 0.0;
};

/// Direct solve of J x = r with up to three steps of iterative refinement
/// towards a relative residual of 1e-12.
inline Vector linear_solve(const SparseMatrix& J, const Vector& r, LinearSolverKind kind = LinearSolverKind::SparseLU,
                           LinearSolveInfo* info = nullptr)
{
    if (J.rows() != J.cols() || J.rows() != r.size())
        throw std::invalid_argument("linear_solve: dimension mismatch");

    const double rnorm = r.norm();
    if (rnorm == 0.0)
    {
        if (info)
            info->relative_residual = 0.0;
        return Vector::Zero(r.size());
    }

    auto refine = [&](auto&& solve) {
        Vector x = solve(r);
        if (!x.allFinite())
            throw std::runtime_error("linear_solve: non-finite solution");
        double rel = (r - J * x).norm() / rnorm;
        for (int k = 0; k < 3 && rel > 1e-12; ++k)
        {
            x += solve(r - J * x);
            rel = (r - J * x).norm() / rnorm;
        }
        if (info)
            info->relative_residual = rel;
        return x;
    };

    if (kind == LinearSolverKind::DenseLU)
    {
        const Eigen::MatrixXd dense = Eigen::MatrixXd(J);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(dense);
        if (!lu.isInvertible())
            throw std::runtime_error("linear_solve: matrix is numerically singular");
        return refine([&](const Vector& b) -> Vector { return lu.solve(b); });
    }

    const Eigen::SparseMatrix<double, Eigen::ColMajor, Index> A = J;
    Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor, Index>, Eigen::COLAMDOrdering<Index>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("linear_solve: sparse LU failed (" + lu.lastErrorMessage() + ")");
    return refine([&](const Vector& b) -> Vector { return lu.solve(b); });
}

/// ||grad du||^2 + gamma ||dlambda||_C^2, square-rooted.
inline double energy_norm(const DiscreteSystem& sys, const Vector& du, const Vector& dlambda)
{
    double e = du.dot(sys.stiffness * du);
    for (Index k = 0; k < sys.num_multipliers(); ++k)
        e += sys.gamma * sys.multipliers.measure(k) * dlambda[k] * dlambda[k];
    return std::sqrt(std::max(e, 0.0));
}

/// Semismooth Newton on G(U) = 0. Converges when ||G(U)||_2 <= tol, or when
/// the linearization branch repeats after a full step whose linear solve was exact.
inline std::pair<DiscreteSolution, SolveReport> semismooth_newton(const ContactConfig& cfg, const DiscreteSystem& sys,
                                                                  const SolveSettings& settings,
                                                                  const std::optional<Vector>& initial = std::nullopt)
{
    if (!(settings.tol_residual > 0.0) || settings.max_newton < 1)
        throw std::invalid_argument("semismooth_newton: invalid settings");
    if (!(settings.damping > 0.0 && settings.damping <= 1.0))
        throw std::invalid_argument("semismooth_newton: damping must lie in (0, 1]");

    const Index nv = sys.num_primal();
    const Index nl = sys.num_multipliers();
    Vector U = initial ? *initial : Vector::Zero(sys.size());
    if (U.size() != sys.size())
        throw std::invalid_argument("semismooth_newton: initial guess has the wrong size");

    SolveReport report;
    std::vector<bool> previous_branch;
    bool exact_step = false;

    for (int it = 0;; ++it)
    {
        const Vector u = U.head(nv), lambda = U.tail(nl);
        const Vector G = residual(cfg, sys, u, lambda);
        const double norm = G.norm();
        const auto active = active_set(cfg, sys, u, lambda);
        auto branch = linearization_branch(cfg, sys, u, lambda);

        report.residual_history.push_back(norm);
        report.active_set_sizes.push_back(static_cast<std::size_t>(std::count(active.begin(), active.end(), true)));
        report.iterations = it;
        report.final_residual = norm;

        if (!std::isfinite(norm))
            break;
        if (norm <= settings.tol_residual)
        {
            report.converged = true;
            break;
        }
        if (exact_step && branch == previous_branch)
        {
            report.converged = true;
            report.active_set_stagnation = true;
            break;
        }
        if (it == settings.max_newton)
            break;

        Vector step;
        LinearSolveInfo info;
        try
        {
            const SparseMatrix J = generalized_jacobian(cfg, sys, u, lambda);
            step = linear_solve(J, -G, settings.linear_solver, &info);
        }
        catch (const std::runtime_error& e)
        {
            throw solver_error(std::string("singular linearization: ") + e.what(), it + 1);
        }

        U += settings.damping * step;
        exact_step = settings.damping == 1.0 && info.relative_residual <= 1e-12;
        previous_branch = std::move(branch);
    }

    DiscreteSolution sol;
    sol.u = U.head(nv);
    sol.lambda = U.tail(nl);
    sol.newton_iterations = report.iterations;
    sol.residual_history = report.residual_history;
    return {std::move(sol), std::move(report)};
}

} // namespace alcontact
