#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

using namespace alcontact;
using namespace alcontact::testing;

TEST(ElementStiffness, ReferenceTriangle)
{
    const auto K = element_stiffness({Point(0, 0), Point(1, 0), Point(0, 1)});
    Eigen::Matrix3d expected;
    expected << 2, -1, -1, -1, 1, 0, -1, 0, 1;
    expected *= 0.5;
    EXPECT_LT((K - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ElementStiffness, RowSumsVanishAndSymmetric)
{
    const auto K = element_stiffness({Point(0.3, -0.1), Point(2.0, 0.4), Point(0.7, 1.9)});
    EXPECT_LT(K.rowwise().sum().cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((K - K.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ElementStiffness, DegenerateTriangleReportsId)
{
    try
    {
        element_stiffness({Point(0, 0), Point(1, 1), Point(2, 2)}, 42);
        FAIL() << "expected assembly_error";
    }
    catch (const assembly_error& e)
    {
        EXPECT_EQ(e.element(), 42);
    }
}

TEST(Stiffness, SymmetricPositiveDefiniteAfterElimination)
{
    const Mesh m = uniform_refine(l_shaped_mesh(1, all_dirichlet()));
    const PrimalSpace sp = build_primal_space(m);
    const Eigen::MatrixXd A = Eigen::MatrixXd(assemble_stiffness(sp));
    EXPECT_LE((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-13 * A.cwiseAbs().maxCoeff());
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    EXPECT_EQ(llt.info(), Eigen::Success);
}

TEST(Stiffness, PureNeumannIsSingularWithConstantKernel)
{
    const Mesh m = square_mesh({0, 0}, {1, 1}, 3, all_neumann());
    const PrimalSpace sp = build_primal_space(m);
    const Eigen::MatrixXd A = Eigen::MatrixXd(assemble_stiffness(sp));
    EXPECT_LT((A * Eigen::VectorXd::Ones(A.rows())).norm(), 1e-13);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    EXPECT_GT(es.eigenvalues()[0], -1e-13);
    EXPECT_GT(es.eigenvalues()[1], 1e-6);
}

TEST(Load, ZeroDataGivesZeroVector)
{
    const Mesh m = square_mesh({0, 0}, {1, 1}, 4, signorini_tags());
    const PrimalSpace sp = build_primal_space(m);
    const Vector b = assemble_load(sp, [](const Point&) { return 0.0; }, assembly_quadrature(),
                                   Vector::Zero(m.num_vertices()));
    EXPECT_EQ(b.norm(), 0.0);
}

TEST(Load, UnitLoadSumsToAreaMinusConstrainedMass)
{
    const Mesh m = square_mesh({0, 0}, {1, 1}, 6, signorini_tags());
    const PrimalSpace sp = build_primal_space(m);
    const Vector b = assemble_load(sp, [](const Point&) { return 1.0; }, assembly_quadrature(),
                                   Vector::Zero(m.num_vertices()));

    // oracle: integrate each constrained hat function with the collapsed Gauss rule
    double constrained_mass = 0.0;
    for (Index t = 0; t < m.num_triangles(); ++t)
        for (Index v : m.triangles()[t])
            if (sp.constrained(v))
                constrained_mass += integrate_triangle(m.corners(t), [&](const Point& x) { return hat_on_triangle(m, t, v, x); });
    EXPECT_NEAR(b.sum(), 1.0 - constrained_mass, 1e-13);
}

TEST(Load, DirichletLiftEntersThroughStiffness)
{
    // u = x on the square with Dirichlet everywhere: the discrete solution of
    // -Laplace u = 0 with that lift is the interpolant itself.
    const Mesh m = square_mesh({0, 0}, {1, 1}, 5, all_dirichlet());
    const PrimalSpace sp = build_primal_space(m);
    const Vector g = interpolate(m, [](const Point& p) { return p.x(); });
    Vector lift = g;
    for (Index v = 0; v < m.num_vertices(); ++v)
        if (!sp.constrained(v))
            lift[v] = 0.0;
    const Vector b = assemble_load(sp, [](const Point&) { return 0.0; }, assembly_quadrature(), lift);
    const SparseMatrix A = assemble_stiffness(sp);
    const Vector u = Eigen::MatrixXd(A).ldlt().solve(b);
    EXPECT_LT((u - sp.gather(g)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Load, SmoothObstacleLoadContinuousAtContactRadius)
{
    const double r0 = smooth::r0;
    const double inner = 8.0 * r0 * r0 * (1.0 - (r0 * r0 - r0 * r0));
    const double outer = 8.0 * (r0 * r0 + (r0 * r0 - r0 * r0));
    EXPECT_NEAR(inner, 8.0 * r0 * r0, 1e-15);
    EXPECT_NEAR(outer, 8.0 * r0 * r0, 1e-15);
    const Point on(r0 / std::sqrt(2.0), r0 / std::sqrt(2.0));
    const Point just_out = on * (1.0 + 1e-13);
    EXPECT_NEAR(smooth::load(on), smooth::load(just_out), 1e-12);
    EXPECT_NEAR(smooth::load(on), 0.5, 1e-12);
}

TEST(Coupling, ObstacleRowSumsArePatchAreaOverThree)
{
    const Mesh m = uniform_refine(square_mesh({-1, -1}, {1, 1}, 2, all_dirichlet()));
    const PrimalSpace sp = build_primal_space(m);
    const MultiplierSpace ms = build_multiplier_space(m, ContactZone::Bulk);
    const Eigen::MatrixXd B = Eigen::MatrixXd(coupling_matrix(sp, ms));

    for (Index v = 0; v < m.num_vertices(); ++v)
    {
        double patch = 0.0, oracle = 0.0;
        for (Index t = 0; t < m.num_triangles(); ++t)
        {
            const auto& tri = m.triangles()[t];
            if (std::find(tri.begin(), tri.end(), v) == tri.end())
                continue;
            patch += m.signed_area(t);
            oracle += integrate_triangle(m.corners(t), [&](const Point& x) { return hat_on_triangle(m, t, v, x); });
        }
        EXPECT_NEAR(B.row(v).sum(), patch / 3.0, 1e-15);
        EXPECT_NEAR(B.row(v).sum(), oracle, 1e-14);
    }
    EXPECT_GE(B.minCoeff(), 0.0);
}

TEST(Coupling, SignoriniColumnSumsAreEdgeLengths)
{
    const Mesh m = square_mesh({0, 0}, {1, 1}, 4, signorini_tags());
    const PrimalSpace sp = build_primal_space(m);
    const MultiplierSpace ms = build_multiplier_space(m, ContactZone::Boundary);
    const Eigen::MatrixXd B = Eigen::MatrixXd(coupling_matrix(sp, ms));
    for (Index k = 0; k < ms.size(); ++k)
        EXPECT_NEAR(B.col(k).sum(), ms.measure(k), 1e-15);

    const Eigen::VectorXd one_u = Eigen::VectorXd::Ones(m.num_vertices());
    const Eigen::VectorXd one_mu = Eigen::VectorXd::Ones(ms.size());
    EXPECT_NEAR(one_u.dot(B * one_mu), 1.0, 1e-15);
}

TEST(Coupling, ObstacleConstantPairingIsDomainArea)
{
    const Mesh m = l_shaped_mesh(2, all_dirichlet());
    const PrimalSpace sp = build_primal_space(m);
    const MultiplierSpace ms = build_multiplier_space(m, ContactZone::Bulk);
    const SparseMatrix B = coupling_matrix(sp, ms);
    const Eigen::VectorXd one_u = Eigen::VectorXd::Ones(m.num_vertices());
    EXPECT_NEAR(one_u.dot(B * Eigen::VectorXd::Ones(ms.size())), 12.0, 1e-12);
}

TEST(Stabilization, TwoCellObstacleValue)
{
    const Mesh m = square_mesh({0, 0}, {1, 1}, 1, all_dirichlet());
    const MultiplierSpace ms = build_multiplier_space(m, ContactZone::Bulk);
    const FaceSet fs = multiplier_faces(m, ContactZone::Bulk);
    const Eigen::MatrixXd S = Eigen::MatrixXd(assemble_stabilization(ms, fs, 1.0, 1.0));
    const Eigen::Vector2d mu(1.0, 0.0);
    EXPECT_NEAR(mu.dot(S * mu), 2.0, 1e-14);

    const Eigen::MatrixXd S2 = Eigen::MatrixXd(assemble_stabilization(ms, fs, 2.0, 1.0));
    EXPECT_NEAR(mu.dot(S2 * mu), 4.0, 1e-14);
}

TEST(Stabilization, KernelIsExactlyTheConstants)
{
    for (ContactZone zone : {ContactZone::Bulk, ContactZone::Boundary})
    {
        const Mesh m = square_mesh({0, 0}, {1, 1}, 4, signorini_tags());
        const MultiplierSpace ms = build_multiplier_space(m, zone);
        const FaceSet fs = multiplier_faces(m, zone);
        const Eigen::MatrixXd S = Eigen::MatrixXd(assemble_stabilization(ms, fs, 1.0, 0.3));
        EXPECT_LT((S - S.transpose()).cwiseAbs().maxCoeff(), 1e-16);
        EXPECT_LT((S * Eigen::VectorXd::Ones(ms.size())).norm(), 1e-15);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
        EXPECT_GT(es.eigenvalues()[0], -1e-14);
        EXPECT_GT(es.eigenvalues()[1], 1e-8);  // one-dimensional kernel: connected cell graph
    }
}
