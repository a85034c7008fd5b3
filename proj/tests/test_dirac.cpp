#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rkd/dirac.hpp"

using rkd::DyadicFunction;
using rkd::OperatorSpec;
using rkd::Word;

namespace
{

Word w(const char* s) { return Word::parse(s); }

/// [D, pi(A)] assembled as one dense block matrix on V_d x V_d, both
/// components refined to a common codomain depth.
double full_commutator_norm(const OperatorSpec& a, int d)
{
    const rkd::BlockCommutator b = rkd::dirac_commutator(a);
    const Eigen::MatrixXd up = rkd::assemble(b.upper, d).matrix;
    const Eigen::MatrixXd lo = rkd::assemble(b.lower, d).matrix;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(up.rows() + lo.rows(), 2 * up.cols());
    m.block(0, up.cols(), up.rows(), up.cols()) = up;
    m.block(up.rows(), 0, lo.rows(), lo.cols()) = lo;
    return oracle::svd_norm(m);
}

}  // namespace

TEST(Dirac, TrivialCommutators)
{
    for (int d = 0; d <= 5; ++d)
    {
        EXPECT_EQ(rkd::commutator_norm(OperatorSpec::identity(), d).value, 0.0);
        EXPECT_NEAR(rkd::commutator_norm(OperatorSpec::mult(DyadicFunction::constant(3.0)), d).value, 0.0, 1e-12);
        EXPECT_EQ(rkd::commutator_norm(OperatorSpec::zero(), d).value, 0.0);
    }
}

TEST(Dirac, DiracOperatorHasUnitNorm)
{
    for (int d = 1; d <= 8; ++d)
    {
        EXPECT_NEAR(oracle::svd_norm(rkd::dirac_matrix(d)), 1.0, 1e-9);
    }
}

TEST(Dirac, BlockNormEqualsFullBlockOperatorNorm)
{
    const std::vector<OperatorSpec> ops{
        OperatorSpec::haar_proj(w("01")),
        OperatorSpec::cond_exp(2),
        OperatorSpec::mult(rkd::random_function(4, 3)),
        OperatorSpec::koopman(),
    };
    for (const OperatorSpec& op : ops)
    {
        for (int d = 2; d <= 6; ++d)
        {
            EXPECT_NEAR(rkd::commutator_norm(op, d).value, full_commutator_norm(op, d), 1e-10) << op.describe();
        }
    }
}

TEST(Dirac, HaarProjectionCommutatorHasUnitNorm)
{
    for (int l = 2; l <= 4; ++l)
    {
        for (std::uint32_t b = 0; b < (1u << l); ++b)
        {
            const OperatorSpec a = OperatorSpec::haar_proj(Word(l, b));
            EXPECT_EQ(rkd::attainment_depth(a), l + 2);
            EXPECT_NEAR(rkd::commutator_norm(a, l + 2).value, 1.0, 1e-9) << Word(l, b).str();
        }
    }
}

TEST(Dirac, ConditionalExpectationCommutatorHasUnitNorm)
{
    for (int n = 1; n <= 3; ++n)
    {
        const OperatorSpec a = OperatorSpec::cond_exp(n);
        for (int d = n + 2; d <= n + 4; ++d)
        {
            EXPECT_NEAR(rkd::commutator_norm(a, d).value, 1.0, 1e-9) << n << " " << d;
        }
    }
}

TEST(Dirac, SelfAdjointBlocksAgree)
{
    const auto [u, l] = rkd::self_adjoint_block_equality(OperatorSpec::haar_proj(w("011")), 5);
    EXPECT_NEAR(u, 1.0, 1e-9);
    EXPECT_NEAR(l, 1.0, 1e-9);
    const auto [u1, l1] = rkd::self_adjoint_block_equality(OperatorSpec::cond_exp(1), 4);
    EXPECT_NEAR(u1, 1.0, 1e-9);
    EXPECT_NEAR(l1, 1.0, 1e-9);
    for (std::uint64_t s = 0; s < 5; ++s)
    {
        const auto [a, b] = rkd::self_adjoint_block_equality(OperatorSpec::mult(rkd::random_function(s, 5)), 8);
        EXPECT_LE(std::abs(a - b), 1e-8 * std::max(a, b)) << s;
    }
    EXPECT_THROW(rkd::self_adjoint_block_equality(OperatorSpec::koopman(), 3), std::invalid_argument);
}

TEST(Dirac, SelfAdjointBlocksAgreeFromAttainmentDepth)
{
    for (std::uint64_t s = 0; s < 5; ++s)
    {
        const OperatorSpec a = OperatorSpec::proj(rkd::random_function(9 + s, 3, rkd::Constraint::UnitNorm));
        const int from = rkd::attainment_depth(a);
        const auto [u0, l0] = rkd::self_adjoint_block_equality(a, from);
        for (int d = from; d <= 8; ++d)
        {
            const auto [u, l] = rkd::self_adjoint_block_equality(a, d);
            EXPECT_NEAR(u, l, 1e-8) << d;
        }
        // truncations below the attainment depth only see part of each block
        for (int d = 1; d < from; ++d)
        {
            const auto [u, l] = rkd::self_adjoint_block_equality(a, d);
            EXPECT_LE(u, u0 + 1e-10) << d;
            EXPECT_LE(l, l0 + 1e-10) << d;
        }
    }
}

TEST(Dirac, CommutatorNormIsASeminorm)
{
    const OperatorSpec a = OperatorSpec::mult(rkd::random_function(1, 3));
    const OperatorSpec b = OperatorSpec::proj(rkd::random_function(2, 3, rkd::Constraint::UnitNorm));
    const int d = 5;
    const double na = rkd::commutator_norm(a, d).value;
    const double nb = rkd::commutator_norm(b, d).value;
    for (double alpha : {-2.5, 0.0, 0.3, 4.0})
    {
        EXPECT_NEAR(rkd::commutator_norm(OperatorSpec::scaled(alpha, a), d).value, std::abs(alpha) * na, 1e-9);
    }
    const double nab = rkd::commutator_norm(OperatorSpec::sum({a, b}, {1.0, 1.0}), d).value;
    EXPECT_LE(nab, na + nb + 1e-9);
}

TEST(Dirac, Certification)
{
    const rkd::Certificate c = rkd::lipschitz_certify(OperatorSpec::haar_proj(w("01")), 1);
    EXPECT_TRUE(c.certified);
    EXPECT_NEAR(c.value, 1.0, 1e-9);
    EXPECT_EQ(c.depth, 4);
    // operator norm at most 1/2 gives a commutator norm at most 1
    const OperatorSpec half = OperatorSpec::scaled(0.5, OperatorSpec::cond_exp(2));
    EXPECT_TRUE(rkd::lipschitz_certify(half, 1).certified);
    // |Kf - f| <= 1
    const DyadicFunction f(2, {0.2, -0.3, 0.1, 0.5});
    EXPECT_LE(rkd::sup_distance(rkd::koopman_apply(f), f), 1.0);
    EXPECT_TRUE(rkd::lipschitz_certify(OperatorSpec::mult(f), 1).certified);
    EXPECT_FALSE(rkd::lipschitz_certify(OperatorSpec::scaled(3.0, OperatorSpec::cond_exp(1)), 1).certified);
}

TEST(Dirac, ConnesLowerBound)
{
    const rkd::VectorState eta(rkd::haar_function(w("01")));
    const rkd::VectorState xi(rkd::haar_function(w("10")));
    std::vector<OperatorSpec> family;
    for (int l = 1; l <= 3; ++l)
    {
        for (std::uint32_t b = 0; b < (1u << l); ++b)
        {
            family.push_back(OperatorSpec::haar_proj(Word(l, b)));
        }
    }
    const rkd::ConnesBound bound = rkd::connes_lower_bound(eta, xi, family);
    EXPECT_GE(bound.lower_bound, 1.0 - 1e-12);
    ASSERT_TRUE(bound.witness.has_value());
    EXPECT_EQ(bound.certificates.size(), family.size());

    EXPECT_EQ(rkd::connes_lower_bound(eta, eta, family).lower_bound, 0.0);
    const rkd::ConnesBound empty = rkd::connes_lower_bound(eta, xi, {});
    EXPECT_EQ(empty.lower_bound, 0.0);
    EXPECT_FALSE(empty.witness.has_value());
}

TEST(Dirac, ConnesRejectsUncertifiedMembers)
{
    const rkd::VectorState eta(rkd::haar_function(w("01")));
    const rkd::VectorState xi(rkd::haar_function(w("10")));
    const std::vector<OperatorSpec> family{OperatorSpec::haar_proj(w("0")),
                                           OperatorSpec::scaled(3.0, OperatorSpec::cond_exp(1))};
    try
    {
        rkd::connes_lower_bound(eta, xi, family);
        FAIL() << "expected UncertifiedOperator";
    }
    catch (const rkd::UncertifiedOperator& e)
    {
        EXPECT_EQ(e.index(), 1u);
        EXPECT_GT(e.value(), 1.0);
        EXPECT_NE(std::string(e.what()).find("is not Lipschitz-certified"), std::string::npos);
    }
    EXPECT_THROW(rkd::VectorState(2.0 * rkd::haar_function(w("0"))), std::invalid_argument);
}

TEST(Dirac, AttainmentDepthPlateaus)
{
    const std::vector<OperatorSpec> ops{
        OperatorSpec::haar_proj(w("101")),
        OperatorSpec::cond_exp(2),
        OperatorSpec::kernel_proj(),
        OperatorSpec::mult(rkd::random_function(6, 3)),
        OperatorSpec::proj(rkd::random_function(7, 3, rkd::Constraint::UnitNorm)),
    };
    for (const OperatorSpec& op : ops)
    {
        const int a = rkd::attainment_depth(op);
        const double at = rkd::commutator_norm(op, a).value;
        for (int d = a + 1; d <= a + 2; ++d)
        {
            EXPECT_NEAR(rkd::commutator_norm(op, d).value, at, 1e-10) << op.describe() << " d=" << d;
        }
    }
}
