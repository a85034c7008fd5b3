#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rkd/dirac.hpp"
#include "rkd/spectra.hpp"

using rkd::NormMethod;
using rkd::NormOptions;
using rkd::OperatorSpec;

namespace
{

Eigen::MatrixXd random_matrix(std::uint64_t seed, Eigen::Index r, Eigen::Index c)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i)
    {
        m.data()[i] = n(gen);
    }
    return m;
}

NormOptions power_only()
{
    NormOptions o;
    o.dense_max_dim = 0;
    return o;
}

}  // namespace

TEST(Spectra, DenseMatchesJacobiSvd)
{
    for (std::uint64_t s = 0; s < 20; ++s)
    {
        const Eigen::MatrixXd m = random_matrix(s, 3 + static_cast<Eigen::Index>(s % 5), 7);
        const rkd::NormEstimate e = rkd::operator_norm(m);
        EXPECT_EQ(e.method, NormMethod::Dense);
        EXPECT_TRUE(e.converged);
        EXPECT_NEAR(e.value, oracle::svd_norm(m), 1e-12 * oracle::svd_norm(m));
    }
}

TEST(Spectra, PowerIterationMatchesDense)
{
    for (std::uint64_t s = 0; s < 20; ++s)
    {
        const Eigen::MatrixXd m = random_matrix(100 + s, 16, 32);
        const rkd::NormEstimate p = rkd::operator_norm(m, power_only());
        EXPECT_EQ(p.method, NormMethod::Power);
        EXPECT_TRUE(p.converged);
        EXPECT_NEAR(p.value, oracle::svd_norm(m), 1e-10);
    }
}

TEST(Spectra, PowerIterationOnAssembledOperators)
{
    const std::vector<OperatorSpec> ops{
        OperatorSpec::koopman(),
        OperatorSpec::ruelle(),
        OperatorSpec::cond_exp(2),
        OperatorSpec::kernel_proj(),
        rkd::commutator_with_K(OperatorSpec::haar_proj(rkd::Word::parse("01"))),
        rkd::commutator_with_L(OperatorSpec::cond_exp(1)),
    };
    for (const OperatorSpec& op : ops)
    {
        for (int d = 2; d <= 7; ++d)
        {
            const Eigen::MatrixXd m = rkd::assemble(op, d).matrix;
            const double p = rkd::operator_norm(m, power_only()).value;
            const double q = rkd::dense_norm(m).value;
            ASSERT_NEAR(p, q, 1e-10) << op.describe() << " d=" << d;
        }
    }
}

TEST(Spectra, MatrixFreeMapAgreesWithAssembledMatrix)
{
    const OperatorSpec op = rkd::commutator_with_K(OperatorSpec::cond_exp(2));
    for (int d = 3; d <= 8; ++d)
    {
        const rkd::OperatorMap map(op, d);
        const double a = rkd::operator_norm(map, power_only()).value;
        const double b = rkd::dense_norm(map.assemble().matrix).value;
        EXPECT_NEAR(a, b, 1e-10) << d;
    }
}

TEST(Spectra, TransferOperatorsHaveUnitNorm)
{
    for (int d = 1; d <= 8; ++d)
    {
        EXPECT_NEAR(rkd::operator_norm(rkd::OperatorMap(OperatorSpec::koopman(), d)).value, 1.0, 1e-10);
        EXPECT_NEAR(rkd::operator_norm(rkd::OperatorMap(OperatorSpec::ruelle(), d)).value, 1.0, 1e-10);
        EXPECT_NEAR(rkd::operator_norm(rkd::dirac_matrix(d)).value, 1.0, 1e-10);
    }
}

TEST(Spectra, ZeroAndEmptyMaps)
{
    const rkd::NormEstimate z = rkd::operator_norm(Eigen::MatrixXd::Zero(4, 8), power_only());
    EXPECT_EQ(z.value, 0.0);
    EXPECT_TRUE(z.converged);
    EXPECT_EQ(rkd::operator_norm(Eigen::MatrixXd::Zero(5, 3)).value, 0.0);
}

TEST(Spectra, NonFiniteEntriesAreRejected)
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
    m(1, 2) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(rkd::operator_norm(m), std::invalid_argument);
}

TEST(Spectra, NormIsDeterministic)
{
    const Eigen::MatrixXd m = random_matrix(7, 40, 40);
    const rkd::NormEstimate a = rkd::operator_norm(m, power_only());
    const rkd::NormEstimate b = rkd::operator_norm(m, power_only());
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Spectra, DepthSweepFlagsPlateaus)
{
    const auto rows = rkd::depth_sweep(
        [](int d) {
            rkd::NormEstimate e;
            e.value = d < 4 ? 0.25 * d : 1.0;
            e.converged = true;
            return e;
        },
        rkd::depth_range(1, 6));
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_FALSE(rows[0].plateau);
    EXPECT_FALSE(rows[2].plateau);
    EXPECT_TRUE(rows[4].plateau);
    EXPECT_TRUE(rows[5].plateau);
    EXPECT_TRUE(rkd::sweep_nondecreasing(rows));
    EXPECT_THROW(rkd::depth_range(3, 2), std::invalid_argument);
}

TEST(Spectra, CommutatorSweepIsMonotone)
{
    const std::vector<OperatorSpec> ops{
        OperatorSpec::haar_proj(rkd::Word::parse("10")),
        OperatorSpec::cond_exp(2),
        OperatorSpec::mult(rkd::random_function(5, 3)),
    };
    for (const OperatorSpec& op : ops)
    {
        const auto rows = rkd::commutator_sweep(op, rkd::depth_range(1, 8));
        EXPECT_TRUE(rkd::sweep_nondecreasing(rows, 1e-9)) << op.describe();
        EXPECT_TRUE(rows.back().plateau) << op.describe();
    }
}
