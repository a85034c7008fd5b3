#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "rkd/suites.hpp"

namespace
{

const rkd::Check* find(const rkd::SuiteReport& r, const std::string& id)
{
    for (const auto& c : r.checks)
    {
        if (c.id == id)
        {
            return &c;
        }
    }
    return nullptr;
}

}  // namespace

class EverySuite : public ::testing::TestWithParam<std::string>
{
};

TEST_P(EverySuite, PassesAtDefaultParameters)
{
    const rkd::SuiteReport r = rkd::run_suite(GetParam(), {});
    EXPECT_FALSE(r.checks.empty());
    for (const auto& c : r.checks)
    {
        EXPECT_NE(c.status, rkd::Status::Fail) << c.id << ": value " << c.value << " expected " << c.expected;
        EXPECT_FALSE(c.paper_ref.empty()) << c.id;
        EXPECT_EQ(c.id.rfind(GetParam() + ".", 0), 0u) << c.id;
    }
    EXPECT_TRUE(r.passed());
}

INSTANTIATE_TEST_SUITE_P(Suites, EverySuite,
                         ::testing::Values("basis", "transfer", "boson", "fermion", "dirac-projections", "dirac-mult",
                                           "dirac-condexp", "denk", "wold"),
                         [](const auto& info) {
                             std::string s = info.param;
                             std::replace(s.begin(), s.end(), '-', '_');
                             return s;
                         });

TEST(Suites, NamesIncludeAll)
{
    const auto names = rkd::suite_names();
    EXPECT_EQ(names.back(), "all");
    EXPECT_EQ(names.size(), rkd::suite_table().size() + 1);
}

TEST(Suites, UnknownSuiteAndBadDepthThrow)
{
    EXPECT_THROW(rkd::run_suite("nope", {}), rkd::UnknownSuite);
    rkd::SuiteParams p;
    p.depth = 13;
    EXPECT_THROW(rkd::run_suite("basis", p), std::invalid_argument);
    p.depth = -1;
    EXPECT_THROW(rkd::run_suite("basis", p), std::invalid_argument);
}

TEST(Suites, IdsAreUniqueAndSorted)
{
    const rkd::SuiteReport r = rkd::run_suite("all", {});
    std::set<std::string> ids;
    for (std::size_t i = 0; i < r.checks.size(); ++i)
    {
        EXPECT_TRUE(ids.insert(r.checks[i].id).second) << r.checks[i].id;
        if (i > 0)
        {
            EXPECT_LT(r.checks[i - 1].id, r.checks[i].id);
        }
    }
}

TEST(Suites, AdjudicationsAreReportOnly)
{
    const rkd::SuiteReport r = rkd::run_suite("denk", {});
    for (const char* id : {"denk.witness_lower_bound", "denk.corte43", "denk.fret_printed", "denk.c_two_term_formula",
                           "denk.scan_c_minus_half"})
    {
        const rkd::Check* c = find(r, id);
        ASSERT_NE(c, nullptr) << id;
        EXPECT_EQ(c->status, rkd::Status::ReportOnly) << id;
    }
    const rkd::Check* w = find(r, "denk.witness_lower_bound");
    EXPECT_NEAR(w->value, std::sqrt(3.0) / 2.0, 1e-8);
    EXPECT_NE(find(r, "denk.corte43")->note.find("neither"), std::string::npos);
}

TEST(Suites, SeedsAreDeterministic)
{
    rkd::SuiteParams p;
    p.seed = 7;
    const rkd::SuiteReport a = rkd::run_suite("dirac-mult", p);
    const rkd::SuiteReport b = rkd::run_suite("dirac-mult", p);
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i)
    {
        EXPECT_EQ(a.checks[i].value, b.checks[i].value) << a.checks[i].id;
    }
}

TEST(Suites, OtherSeedsPass)
{
    for (std::uint64_t seed : {2u, 99u})
    {
        rkd::SuiteParams p;
        p.seed = seed;
        const rkd::SuiteReport r = rkd::run_suite("all", p);
        for (const auto& c : r.checks)
        {
            EXPECT_NE(c.status, rkd::Status::Fail) << "seed " << seed << " " << c.id << ": " << c.value;
        }
    }
}

TEST(Suites, JsonShape)
{
    const rkd::SuiteReport r = rkd::run_suite("wold", {});
    const nlohmann::json j = r.to_json();
    EXPECT_EQ(j.at("suite"), "wold");
    EXPECT_TRUE(j.at("passed").get<bool>());
    EXPECT_EQ(j.at("depth"), 8);
    ASSERT_TRUE(j.at("checks").is_array());
    for (const auto& c : j.at("checks"))
    {
        for (const char* key : {"id", "description", "paper_ref", "status", "value", "expected", "tolerance"})
        {
            EXPECT_TRUE(c.contains(key)) << key;
        }
        EXPECT_TRUE(c.at("status") == "pass" || c.at("status") == "fail" || c.at("status") == "report-only");
    }
}

TEST(Suites, NonFiniteValuesSerializeAsNull)
{
    rkd::SuiteReport r;
    r.suite = "x";
    rkd::CheckList list("x");
    list.report("inf", "d", "plumbing", std::numeric_limits<double>::infinity(), 0.0);
    list.close("nan", "d", "plumbing", std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0);
    r.checks = list.take();
    const nlohmann::json j = r.to_json();
    EXPECT_TRUE(j.at("checks")[0].at("value").is_null());
    EXPECT_EQ(r.checks[1].status, rkd::Status::Fail);
    EXPECT_FALSE(r.passed());
}

TEST(Suites, CheckListHelpers)
{
    rkd::CheckList list("p");
    EXPECT_EQ(list.close("a", "", "r", 1.0, 1.0 + 1e-13, 1e-12).status, rkd::Status::Pass);
    EXPECT_EQ(list.at_most("b", "", "r", 2.0, 1.0, 0.5).status, rkd::Status::Fail);
    EXPECT_EQ(list.at_least("c", "", "r", 0.9, 1.0, 0.2).status, rkd::Status::Pass);
    EXPECT_EQ(list.truth("d", "", "r", false).status, rkd::Status::Fail);
    EXPECT_EQ(list.report("e", "", "r", 3.0, 1.0).status, rkd::Status::ReportOnly);
    const auto checks = list.take();
    EXPECT_EQ(checks[0].id, "p.a");
    EXPECT_STREQ(rkd::status_name(rkd::Status::ReportOnly), "report-only");
}
