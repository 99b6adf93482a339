#include "test_support.hpp"

#include <gtest/gtest.h>

#include <memory>

using namespace alcontact;
using namespace alcontact::testing;

namespace {

constexpr Formulation all_formulations[] = {Formulation::F1, Formulation::F2, Formulation::F1Alt, Formulation::F2Alt};

struct Fixture
{
    std::shared_ptr<const Mesh> mesh;  // the system keeps a pointer to it
    ContactConfig cfg;
    DiscreteSystem sys;
};

Fixture obstacle(Formulation f, ScalarField load = [](const Point&) { return -1.0; })
{
    Fixture fx{std::make_shared<const Mesh>(uniform_refine(square_mesh({-1, -1}, {1, 1}, 2, all_dirichlet()))), {}, {}};
    fx.cfg.formulation = f;
    fx.cfg = resolve(fx.cfg, fx.mesh->h());
    fx.sys = assemble_system(*fx.mesh, ContactZone::Bulk, load, [](const Point&) { return 0.0; }, fx.cfg);
    return fx;
}

Fixture boundary(Formulation f)
{
    Fixture fx{std::make_shared<const Mesh>(square_mesh({0, 0}, {1, 1}, 4, signorini_tags())), {}, {}};
    fx.cfg.formulation = f;
    fx.cfg.gamma0 = 0.1;
    fx.cfg = resolve(fx.cfg, fx.mesh->h());
    fx.sys = assemble_system(*fx.mesh, ContactZone::Boundary, signorini_data::load, [](const Point&) { return 0.0; },
                             fx.cfg);
    return fx;
}

} // namespace

TEST(ContactScalars, PositivePartAndProjection)
{
    EXPECT_EQ(plus(-1.0), 0.0);
    EXPECT_EQ(plus(0.0), 0.0);
    EXPECT_EQ(plus(2.5), 2.5);
    EXPECT_DOUBLE_EQ(p_gamma(1.0, 2.0, 0.25, Sign::Plus), 0.5);
    EXPECT_DOUBLE_EQ(p_gamma(1.0, 2.0, 0.25, Sign::Minus), -0.5);
}

TEST(ContactScalars, ComplementarityPairsHaveZeroDefect)
{
    // u <= 0, lambda <= 0, u lambda = 0
    for (double g : {1e-4, 0.1, 3.0})
    {
        EXPECT_NEAR(contact_defect_multiplier(0.0, -3.0, g), 0.0, 1e-14);
        EXPECT_NEAR(contact_defect_multiplier(-1.0, 0.0, g), 0.0, 1e-14);
        EXPECT_NEAR(contact_defect_primal(0.0, -3.0, g), 0.0, 1e-14);
        EXPECT_NEAR(contact_defect_primal(-1.0, 0.0, g), 0.0, 1e-14);
        EXPECT_GT(std::abs(contact_defect_multiplier(1.0, 0.0, g)), 0.0);
        EXPECT_GT(std::abs(contact_defect_primal(-1.0, -1.0, g)), 0.0);
    }
}

TEST(ContactScalars, PositivePartIsFirmlyNonexpansive)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (int k = 0; k < 1000; ++k)
    {
        const double a = d(rng), b = d(rng);
        const double pa = plus(a), pb = plus(b);
        EXPECT_GE((pa - pb) * (a - b) + 1e-14, (pa - pb) * (pa - pb));
    }
}

TEST(Gamma, PowerLaw)
{
    ContactConfig c;
    c.gamma0 = 1.0;
    c.gamma_exponent = 2.0;
    EXPECT_NEAR(gamma_of_h(c, 0.1), 1e-2, 1e-16);
    c.gamma0 = 0.1;
    c.gamma_exponent = 1.0;
    EXPECT_NEAR(gamma_of_h(c, 0.01), 1e-3, 1e-17);
    c.gamma_exponent = 2.0;
    EXPECT_NEAR(gamma_of_h(c, 0.05) / gamma_of_h(c, 0.1), 0.25, 1e-15);
    EXPECT_THROW(gamma_of_h(c, 0.0), std::invalid_argument);
    EXPECT_DOUBLE_EQ(s_exponent(ContactZone::Bulk), 1.0);
    EXPECT_DOUBLE_EQ(s_exponent(ContactZone::Boundary), 0.5);
}

TEST(Formulation, ParseRoundTrip)
{
    for (Formulation f : all_formulations)
        EXPECT_EQ(parse_formulation(to_string(f)), f);
    EXPECT_THROW(parse_formulation("f3"), std::invalid_argument);
}

TEST(Residual, ZeroStateWithZeroDataIsZero)
{
    for (Formulation f : all_formulations)
    {
        const auto fx = obstacle(f, [](const Point&) { return 0.0; });
        const Vector g = residual(fx.cfg, fx.sys, Vector::Zero(fx.sys.size()));
        EXPECT_EQ(g.norm(), 0.0) << to_string(f);
    }
}

TEST(Residual, AlternativeFormsAgree)
{
    std::mt19937_64 rng(11);
    for (bool bulk : {true, false})
    {
        auto make = [bulk](Formulation f) { return bulk ? obstacle(f) : boundary(f); };
        const auto f1 = make(Formulation::F1), f1a = make(Formulation::F1Alt);
        const auto f2 = make(Formulation::F2), f2a = make(Formulation::F2Alt);
        for (int k = 0; k < 20; ++k)
        {
            const Vector U = random_vector(rng, f1.sys.size());
            const Vector a = residual(f1.cfg, f1.sys, U), b = residual(f1a.cfg, f1a.sys, U);
            const Vector c = residual(f2.cfg, f2.sys, U), d = residual(f2a.cfg, f2a.sys, U);
            EXPECT_LE((a - b).norm(), 1e-12 * std::max(1.0, a.norm()));
            EXPECT_LE((c - d).norm(), 1e-12 * std::max(1.0, c.norm()));
        }
    }
}

TEST(Jacobian, InactiveBlocks)
{
    // u = 0, lambda = 1: u - gamma lambda < 0 at every point
    for (Formulation f : all_formulations)
    {
        const auto fx = obstacle(f);
        const Index nv = fx.sys.num_primal(), nl = fx.sys.num_multipliers();
        Vector U = Vector::Zero(fx.sys.size());
        U.tail(nl).setOnes();
        const Eigen::MatrixXd J = Eigen::MatrixXd(generalized_jacobian(fx.cfg, fx.sys, U));
        const Eigen::MatrixXd A = Eigen::MatrixXd(fx.sys.stiffness);
        const Eigen::MatrixXd S = Eigen::MatrixXd(fx.sys.stabilization);
        const Eigen::VectorXd meas = Eigen::Map<const Eigen::VectorXd>(fx.sys.multipliers.measures().data(), nl);
        const double g = fx.cfg.gamma;

        EXPECT_LT((J.topLeftCorner(nv, nv) - A).cwiseAbs().maxCoeff(), 1e-13) << to_string(f);
        Eigen::MatrixXd ll_expected;
        switch (f)
        {
            case Formulation::F1:    ll_expected = Eigen::MatrixXd(-g * meas.asDiagonal()) - S; break;
            case Formulation::F1Alt: ll_expected = Eigen::MatrixXd(-g * meas.asDiagonal()) - S; break;
            case Formulation::F2:    ll_expected = Eigen::MatrixXd(g * meas.asDiagonal()) + S; break;
            case Formulation::F2Alt: ll_expected = Eigen::MatrixXd(g * meas.asDiagonal()) + S; break;
        }
        EXPECT_LT((J.bottomRightCorner(nl, nl) - ll_expected).cwiseAbs().maxCoeff(), 1e-15) << to_string(f);

        if (is_f1_family(f))
        {
            EXPECT_EQ(J.bottomLeftCorner(nl, nv).cwiseAbs().maxCoeff(), 0.0);
            EXPECT_EQ(J.topRightCorner(nv, nl).cwiseAbs().maxCoeff(), 0.0);
        }
        else
        {
            EXPECT_EQ(J.bottomLeftCorner(nl, nv).cwiseAbs().maxCoeff(), 0.0);
            EXPECT_GT(J.topRightCorner(nv, nl).cwiseAbs().maxCoeff(), 0.0);
        }
    }
}

TEST(Jacobian, ActiveBlocksF1)
{
    // u = 0, lambda = -1: every point is in contact
    const auto fx = obstacle(Formulation::F1);
    const Index nv = fx.sys.num_primal(), nl = fx.sys.num_multipliers();
    Vector U = Vector::Zero(fx.sys.size());
    U.tail(nl).setConstant(-1.0);
    const Eigen::MatrixXd J = Eigen::MatrixXd(generalized_jacobian(fx.cfg, fx.sys, U));

    // multiplier block reduces to -S; coupling is -B restricted to free rows
    const Eigen::MatrixXd S = Eigen::MatrixXd(fx.sys.stabilization);
    EXPECT_LT((J.bottomRightCorner(nl, nl) + S).cwiseAbs().maxCoeff(), 1e-15);
    const Eigen::MatrixXd B = Eigen::MatrixXd(coupling_matrix(fx.sys.primal, fx.sys.multipliers));
    for (Index d = 0; d < nv; ++d)
    {
        const Index v = fx.sys.primal.free_vertices()[d];
        EXPECT_LT((J.row(d).tail(nl) + B.row(v)).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(Jacobian, SymmetryOfTheTwoFamilies)
{
    std::mt19937_64 rng(3);
    const auto f1 = obstacle(Formulation::F1);
    const auto f2 = obstacle(Formulation::F2);
    bool f2_nonsymmetric = false;
    for (int k = 0; k < 10; ++k)
    {
        Vector U = random_vector(rng, f1.sys.size());
        U.tail(f1.sys.num_multipliers()) /= f1.cfg.gamma;  // mix active and inactive points
        const Eigen::MatrixXd J1 = Eigen::MatrixXd(generalized_jacobian(f1.cfg, f1.sys, U));
        EXPECT_LT((J1 - J1.transpose()).cwiseAbs().maxCoeff(), 1e-13 * J1.cwiseAbs().maxCoeff());
        const Eigen::MatrixXd J2 = Eigen::MatrixXd(generalized_jacobian(f2.cfg, f2.sys, U));
        f2_nonsymmetric |= (J2 - J2.transpose()).cwiseAbs().maxCoeff() > 1e-8;
    }
    EXPECT_TRUE(f2_nonsymmetric);
}

TEST(Jacobian, MatchesCentralDifferencesAwayFromKinks)
{
    std::mt19937_64 rng(5);
    for (Formulation f : all_formulations)
        for (auto fx : {obstacle(f), boundary(f)})
        {
            for (int k = 0; k < 10; ++k)
            {
                Vector U = random_vector(rng, fx.sys.size());
                U.tail(fx.sys.num_multipliers()) /= fx.cfg.gamma;
                const Vector V = random_vector(rng, fx.sys.size());
                const double eps = 1e-7;
                // skip states whose active set changes inside the stencil
                if (active_set(fx.cfg, fx.sys, (U + eps * V).head(fx.sys.num_primal()), (U + eps * V).tail(fx.sys.num_multipliers()))
                    != active_set(fx.cfg, fx.sys, (U - eps * V).head(fx.sys.num_primal()), (U - eps * V).tail(fx.sys.num_multipliers())))
                    continue;
                const Vector fd = (residual(fx.cfg, fx.sys, U + eps * V) - residual(fx.cfg, fx.sys, U - eps * V)) / (2 * eps);
                const Vector jv = generalized_jacobian(fx.cfg, fx.sys, U) * V;
                EXPECT_LE((fd - jv).norm(), 1e-6 * std::max(1.0, jv.norm())) << to_string(f);
            }
        }
}

TEST(Residual, RejectsMismatchedState)
{
    const auto fx = obstacle(Formulation::F1);
    EXPECT_THROW(residual(fx.cfg, fx.sys, Vector::Zero(fx.sys.size() + 1)), std::invalid_argument);
    EXPECT_THROW(residual(fx.cfg, fx.sys, Vector::Zero(3), Vector::Zero(fx.sys.num_multipliers())),
                 std::invalid_argument);
    ContactConfig other = fx.cfg;
    other.gamma *= 2.0;
    EXPECT_THROW(residual(other, fx.sys, Vector::Zero(fx.sys.size())), std::invalid_argument);
}

TEST(Assembly, RequiresResolvedGamma)
{
    const Mesh m = square_mesh({0, 0}, {1, 1}, 2, all_dirichlet());
    ContactConfig cfg;
    EXPECT_THROW(assemble_system(m, ContactZone::Bulk, [](const Point&) { return 0.0; }, {}, cfg),
                 std::invalid_argument);
}
