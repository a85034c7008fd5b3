#ifndef RKD_VERIFY_HPP
#define RKD_VERIFY_HPP

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace rkd
{

enum class Status
{
    Pass,
    Fail,
    ReportOnly
};

inline const char* status_name(Status s)
{
    switch (s)
    {
    case Status::Pass:
        return "pass";
    case Status::Fail:
        return "fail";
    case Status::ReportOnly:
        return "report-only";
    }
    return "fail";
}

struct Check
{
    std::string id;
    std::string description;
    /// Plain-language name of the result being checked, or "plumbing".
    std::string paper_ref;
    Status status = Status::Fail;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct SuiteReport
{
    std::string suite;
    std::vector<Check> checks;
    std::uint64_t seed = 0;
    int depth = 0;
    double wall_time = 0.0;

    bool passed() const
    {
        return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::Fail; });
    }

    void sort() { std::sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.id < b.id; }); }

    nlohmann::json to_json() const
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : checks)
        {
            nlohmann::json j{{"id", c.id},
                             {"description", c.description},
                             {"paper_ref", c.paper_ref},
                             {"status", status_name(c.status)},
                             {"value", finite_or_null(c.value)},
                             {"expected", finite_or_null(c.expected)},
                             {"tolerance", c.tolerance}};
            if (!c.note.empty())
            {
                j["note"] = c.note;
            }
            arr.push_back(std::move(j));
        }
        return {{"suite", suite},
                {"passed", passed()},
                {"seed", seed},
                {"depth", depth},
                {"wall_time", wall_time},
                {"checks", arr}};
    }

private:
    static nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }
};

/// Accumulates checks for one suite.
class CheckList
{
public:
    explicit CheckList(std::string prefix) : prefix_(std::move(prefix)) {}

    /// |value - expected| <= tol.
    Check& close(const std::string& id, std::string description, std::string ref, double value, double expected, double tol)
    {
        const bool ok = std::isfinite(value) && std::abs(value - expected) <= tol;
        return push(id, std::move(description), std::move(ref), ok ? Status::Pass : Status::Fail, value, expected, tol);
    }

    /// value <= bound + tol.
    Check& at_most(const std::string& id, std::string description, std::string ref, double value, double bound, double tol)
    {
        const bool ok = std::isfinite(value) && value <= bound + tol;
        return push(id, std::move(description), std::move(ref), ok ? Status::Pass : Status::Fail, value, bound, tol);
    }

    /// value >= bound - tol.
    Check& at_least(const std::string& id, std::string description, std::string ref, double value, double bound, double tol)
    {
        const bool ok = std::isfinite(value) && value >= bound - tol;
        return push(id, std::move(description), std::move(ref), ok ? Status::Pass : Status::Fail, value, bound, tol);
    }

    Check& truth(const std::string& id, std::string description, std::string ref, bool ok)
    {
        return push(id, std::move(description), std::move(ref), ok ? Status::Pass : Status::Fail, ok ? 1.0 : 0.0, 1.0, 0.0);
    }

    Check& report(const std::string& id, std::string description, std::string ref, double value, double expected,
                  std::string note = {})
    {
        Check& c = push(id, std::move(description), std::move(ref), Status::ReportOnly, value, expected, 0.0);
        c.note = std::move(note);
        return c;
    }

    std::vector<Check> take() { return std::move(checks_); }

private:
    Check& push(const std::string& id, std::string description, std::string ref, Status s, double value, double expected,
                double tol)
    {
        checks_.push_back({prefix_ + "." + id, std::move(description), std::move(ref), s, value, expected, tol, {}});
        return checks_.back();
    }

    std::string prefix_;
    std::vector<Check> checks_;
};

}  // namespace rkd

#endif
