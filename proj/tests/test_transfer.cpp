#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rkd/transfer.hpp"

using rkd::DyadicFunction;
using rkd::HaarIndex;
using rkd::OperatorSpec;
using rkd::Word;

namespace
{

constexpr double tol = 1e-12;

Word w(const char* s) { return Word::parse(s); }

double dist(const DyadicFunction& a, const DyadicFunction& b) { return rkd::sup_distance(a, b); }

}  // namespace

TEST(Transfer, RuelleExamples)
{
    const DyadicFunction l = rkd::ruelle_apply(rkd::haar_function(w("011")));
    EXPECT_LT(dist(l, rkd::inv_sqrt2 * rkd::haar_function(w("11"))), tol);
    EXPECT_LT(dist(rkd::ruelle_apply(DyadicFunction::constant(1.0)), DyadicFunction::constant(1.0)), tol);
    const DyadicFunction v =
        rkd::inv_sqrt2 * (rkd::haar_function(HaarIndex::eps1()) + rkd::haar_function(HaarIndex::eps0()));
    EXPECT_LT(rkd::sup_norm(rkd::ruelle_apply(v)), tol);
}

TEST(Transfer, RuelleMatchesPointwiseDefinition)
{
    for (std::uint64_t s = 0; s < 30; ++s)
    {
        const DyadicFunction f = rkd::random_function(s, static_cast<int>(s % 7));
        EXPECT_LT(oracle::max_abs_diff(rkd::ruelle_apply(f), oracle::ruelle(f)), tol);
    }
}

TEST(Transfer, KoopmanExamples)
{
    const DyadicFunction k = rkd::koopman_apply(rkd::haar_function(w("01")));
    const DyadicFunction expected = rkd::inv_sqrt2 * (rkd::haar_function(w("001")) + rkd::haar_function(w("101")));
    EXPECT_LT(dist(k, expected), tol);
    const DyadicFunction ke1 = rkd::koopman_apply(rkd::haar_function(HaarIndex::eps1()));
    const DyadicFunction chi = DyadicFunction::indicator(w("01")) + DyadicFunction::indicator(w("11"));
    EXPECT_LT(dist(ke1, rkd::sqrt2 * chi), tol);
    EXPECT_LT(dist(rkd::koopman_apply(DyadicFunction::constant(1.0)), DyadicFunction::constant(1.0)), tol);
}

TEST(Transfer, KoopmanMatchesPointwiseDefinitionAndIsIsometric)
{
    for (std::uint64_t s = 0; s < 30; ++s)
    {
        const DyadicFunction f = rkd::random_function(s, static_cast<int>(s % 8));
        const DyadicFunction k = rkd::koopman_apply(f);
        EXPECT_LT(oracle::max_abs_diff(k, oracle::koopman(f)), tol);
        EXPECT_NEAR(rkd::norm(k), rkd::norm(f), tol);
    }
}

TEST(Transfer, AdjointCheck)
{
    const auto [a, b] = rkd::adjoint_check(rkd::haar_function(w("0")), rkd::haar_function(w("10")));
    EXPECT_NEAR(a, rkd::inv_sqrt2, tol);
    EXPECT_NEAR(b, rkd::inv_sqrt2, tol);
    const auto [c, d] = rkd::adjoint_check(DyadicFunction::constant(1.0), DyadicFunction::constant(1.0));
    EXPECT_NEAR(c, 1.0, tol);
    EXPECT_NEAR(d, 1.0, tol);
    for (std::uint64_t s = 0; s < 100; ++s)
    {
        const auto [x, y] = rkd::adjoint_check(rkd::random_function(s, 6), rkd::random_function(s + 500, 6));
        ASSERT_NEAR(x, y, tol);
    }
}

TEST(Transfer, RuelleIsLeftInverseOfKoopman)
{
    for (std::uint64_t s = 0; s < 100; ++s)
    {
        const DyadicFunction f = rkd::random_function(s, static_cast<int>(s % 9));
        ASSERT_LT(dist(rkd::ruelle_apply(rkd::koopman_apply(f)), f), tol);
    }
}

TEST(Transfer, ConditionalExpectation)
{
    const DyadicFunction fc = rkd::random_function(3, 5, rkd::Constraint::FirstCoordinateFree);
    EXPECT_LT(dist(rkd::cond_expectation(1, fc), fc), tol);
    const DyadicFunction ke = rkd::cond_expectation(1, rkd::haar_function(HaarIndex::eps1()));
    EXPECT_LT(dist(ke, DyadicFunction::constant(rkd::inv_sqrt2)), tol);
    for (int n = 1; n <= 3; ++n)
    {
        for (std::uint64_t s = 0; s < 10; ++s)
        {
            const DyadicFunction f = rkd::random_function(s, 6);
            const DyadicFunction p = rkd::cond_expectation(n, f);
            EXPECT_LT(dist(rkd::cond_expectation(n, p), p), tol);
            const DyadicFunction g = rkd::random_function(s + 40, 6);
            EXPECT_NEAR(rkd::inner(p, g), rkd::inner(f, rkd::cond_expectation(n, g)), tol);
        }
    }
    EXPECT_THROW(rkd::cond_expectation(0, fc), std::invalid_argument);
}

TEST(Transfer, ConditionalExpectationRangeDimension)
{
    const int d = 6;
    for (int n = 1; n <= 3; ++n)
    {
        const Eigen::MatrixXd m = rkd::assemble(OperatorSpec::cond_exp(n), d).matrix;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        int ones = 0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        {
            const double v = es.eigenvalues()(i);
            EXPECT_TRUE(std::abs(v) < 1e-10 || std::abs(v - 1.0) < 1e-10);
            ones += std::abs(v - 1.0) < 1e-10 ? 1 : 0;
        }
        EXPECT_EQ(ones, 1 << (d - n));
    }
}

TEST(Transfer, KernelProjection)
{
    for (int l = 0; l <= 3; ++l)
    {
        for (std::uint32_t b = 0; b < (1u << l); ++b)
        {
            const DyadicFunction s = rkd::state_nw(0, Word(l, b));
            EXPECT_LT(dist(rkd::kernel_projection(s), s), tol);
        }
    }
    const DyadicFunction g = rkd::random_function(8, 4);
    EXPECT_LT(rkd::sup_norm(rkd::kernel_projection(rkd::koopman_apply(g))), tol);
    const DyadicFunction p = rkd::kernel_projection(rkd::haar_function(w("0")));
    EXPECT_LT(dist(p, 0.5 * (rkd::haar_function(w("0")) - rkd::haar_function(w("1")))), tol);
}

TEST(Transfer, KernelProjectionProperties)
{
    for (std::uint64_t s = 0; s < 50; ++s)
    {
        const DyadicFunction f = rkd::random_function(s, 7);
        const DyadicFunction p = rkd::kernel_projection(f);
        ASSERT_LT(rkd::sup_norm(rkd::ruelle_apply(p)), tol);
        ASSERT_NEAR(rkd::inner(p, f - p), 0.0, tol);
        ASSERT_LT(dist(rkd::kernel_projection(p), p), tol);
        // [L, K] = I - KL
        const DyadicFunction lk = rkd::ruelle_apply(rkd::koopman_apply(f));
        const DyadicFunction kl = rkd::koopman_apply(rkd::ruelle_apply(f));
        ASSERT_LT(dist(lk - kl, p), tol);
    }
    const Eigen::MatrixXd m = rkd::assemble(OperatorSpec::kernel_proj(), 6).matrix;
    EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), tol);
    EXPECT_LT((m * m - m).cwiseAbs().maxCoeff(), tol);
}

TEST(Transfer, Multiplication)
{
    const DyadicFunction g = rkd::random_function(2, 5);
    EXPECT_LT(dist(rkd::mult_apply(DyadicFunction::constant(1.0), g), g), tol);
    const DyadicFunction e = rkd::haar_function(w("10"));
    EXPECT_LT(dist(rkd::mult_apply(e, e), 4.0 * DyadicFunction::indicator(w("10"))), tol);
    EXPECT_LT(dist(rkd::mult_apply(g, DyadicFunction::constant(1.0)), g), tol);
}

TEST(Transfer, Projection)
{
    const DyadicFunction psi = rkd::random_function(5, 4, rkd::Constraint::UnitNorm);
    EXPECT_LT(dist(rkd::projection_apply(psi, psi), psi), tol);
    EXPECT_LT(rkd::sup_norm(rkd::projection_apply(rkd::haar_function(w("01")), rkd::haar_function(w("10")))), tol);
    for (int l = 1; l <= 4; ++l)
    {
        const Word x(l, 1);
        const DyadicFunction got = rkd::projection_apply(rkd::haar_function(x), DyadicFunction::indicator(x.append(1)));
        EXPECT_LT(dist(got, std::pow(2.0, -l / 2.0 - 1.0) * rkd::haar_function(x)), tol);
    }
    EXPECT_THROW(rkd::projection_apply(2.0 * psi, psi), std::invalid_argument);
    EXPECT_THROW(OperatorSpec::proj(2.0 * psi), std::invalid_argument);
    EXPECT_THROW(OperatorSpec::cond_exp(0), std::invalid_argument);
}

TEST(Transfer, AssembleExamples)
{
    const rkd::AssembledMap r = rkd::assemble(OperatorSpec::ruelle(), 1);
    ASSERT_EQ(r.rows(), 1);
    ASSERT_EQ(r.cols(), 2);
    EXPECT_NEAR(r.matrix(0, 0), rkd::inv_sqrt2, tol);
    EXPECT_NEAR(r.matrix(0, 1), rkd::inv_sqrt2, tol);
    for (int d = 0; d <= 6; ++d)
    {
        const Eigen::MatrixXd k = rkd::assemble(OperatorSpec::koopman(), d).matrix;
        EXPECT_LT((k.transpose() * k - Eigen::MatrixXd::Identity(k.cols(), k.cols())).cwiseAbs().maxCoeff(), tol);
        const Eigen::MatrixXd id = rkd::assemble(OperatorSpec::compose({}), d).matrix;
        EXPECT_LT((id - Eigen::MatrixXd::Identity(id.rows(), id.cols())).cwiseAbs().maxCoeff(), tol);
    }
}

TEST(Transfer, AssembleMatchesOracleAndDirectApplication)
{
    const DyadicFunction f = rkd::random_function(12, 3);
    const DyadicFunction psi = rkd::random_function(13, 4, rkd::Constraint::UnitNorm);
    const std::vector<OperatorSpec> ops{
        OperatorSpec::ruelle(),
        OperatorSpec::koopman(),
        OperatorSpec::mult(f),
        OperatorSpec::proj(psi),
        OperatorSpec::cond_exp(2),
        OperatorSpec::kernel_proj(),
        OperatorSpec::compose({OperatorSpec::koopman(), OperatorSpec::mult(f)}),
        OperatorSpec::sum({OperatorSpec::identity(), OperatorSpec::cond_exp(1)}, {2.0, -0.5}),
    };
    const int d = 5;
    for (const OperatorSpec& op : ops)
    {
        const rkd::AssembledMap a = rkd::assemble(op, d);
        const Eigen::MatrixXd ref = oracle::matrix_of([&](const DyadicFunction& g) { return op.apply(g); }, d, op.out_depth(d));
        ASSERT_LT((a.matrix - ref).cwiseAbs().maxCoeff(), tol) << op.describe();
        for (std::uint64_t s = 0; s < 5; ++s)
        {
            const DyadicFunction g = rkd::random_function(s, d);
            ASSERT_LT(dist(a.apply(g), op.apply(g)), tol) << op.describe();
        }
    }
}

TEST(Transfer, AdjointAssemblesToTranspose)
{
    const DyadicFunction f = rkd::random_function(21, 4);
    const DyadicFunction psi = rkd::random_function(22, 3, rkd::Constraint::UnitNorm);
    const std::vector<OperatorSpec> ops{
        OperatorSpec::koopman(),
        OperatorSpec::ruelle(),
        OperatorSpec::mult(f),
        OperatorSpec::proj(psi),
        OperatorSpec::compose({OperatorSpec::koopman(), OperatorSpec::mult(f)}),
        OperatorSpec::compose({OperatorSpec::koopman(), OperatorSpec::ruelle(), OperatorSpec::mult(f)}),
    };
    const int d = 5;
    for (const OperatorSpec& op : ops)
    {
        const int e = op.out_depth(d);
        const OperatorSpec adj = OperatorSpec::adjoint(op);
        ASSERT_EQ(adj.out_depth(e), d) << op.describe();
        const Eigen::MatrixXd a = rkd::assemble(op, d).matrix;
        const Eigen::MatrixXd b = rkd::assemble(adj, e).matrix;
        EXPECT_LT((a.transpose() - b).cwiseAbs().maxCoeff(), tol) << op.describe();
    }
}

TEST(Transfer, OperatorMapTransposeMatchesAssembly)
{
    const OperatorSpec op = rkd::commutator_with_K(OperatorSpec::cond_exp(2));
    const int d = 5;
    const rkd::OperatorMap map(op, d);
    const Eigen::MatrixXd m = rkd::assemble(op, d).matrix;
    for (std::uint64_t s = 0; s < 5; ++s)
    {
        const Eigen::VectorXd y = rkd::to_coords(rkd::random_function(s, map.out_depth()));
        EXPECT_LT((map.multiply_transpose(y) - m.transpose() * y).cwiseAbs().maxCoeff(), tol);
    }
}

TEST(Transfer, Commutators)
{
    const DyadicFunction g = rkd::random_function(31, 5);
    EXPECT_LT(rkd::sup_norm(rkd::commutator_with_K(OperatorSpec::identity()).apply(g)), tol);
    EXPECT_LT(rkd::sup_norm(rkd::commutator_with_L(OperatorSpec::identity()).apply(g)), tol);
    // (K KL - KL K) f = K(KL - I) f
    const OperatorSpec kl = OperatorSpec::cond_exp(1);
    const DyadicFunction lhs = rkd::commutator_with_K(kl).apply(g);
    const DyadicFunction rhs = rkd::koopman_apply(rkd::cond_expectation(1, g) - g);
    EXPECT_LT(dist(lhs, rhs), tol);
    // K changes depth: both terms land at the enlarged codomain
    const OperatorSpec ck = rkd::commutator_with_K(OperatorSpec::koopman());
    EXPECT_EQ(ck.out_depth(5), 7);
    EXPECT_LT(rkd::sup_norm(ck.apply(g)), tol);
}

TEST(Transfer, DepthCapIsEnforced)
{
    EXPECT_THROW(rkd::assemble(OperatorSpec::identity(), 13), std::invalid_argument);
    EXPECT_THROW(rkd::OperatorMap(OperatorSpec::koopman(), 24), std::invalid_argument);
}
