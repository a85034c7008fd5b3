#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rkd/boson.hpp"
#include "rkd/dirac.hpp"
#include "rkd/formulas.hpp"
#include "rkd/io.hpp"
#include "rkd/suites.hpp"

namespace
{

using rkd::json;

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out)
{
    if (out.empty() || out == "-")
    {
        std::cout << text << '\n';
    }
    else
    {
        rkd::write_text_file(out, text + "\n");
    }
}

void check_depth(int d)
{
    if (d < 0 || d > rkd::suite_depth_cap)
    {
        throw UsageError("depth must be in [0, " + std::to_string(rkd::suite_depth_cap) + "], got " + std::to_string(d));
    }
}

std::filesystem::path base_of(const std::string& file) { return std::filesystem::path(file).parent_path(); }

/// An operator file holds either a bare operator or {"dirac_norm": {"operator": ..., "depth": d}}.
std::pair<rkd::OperatorSpec, std::optional<int>> load_operator(const std::string& file)
{
    const json j = rkd::read_json_file(file);
    if (j.is_object() && j.contains("dirac_norm"))
    {
        const json& q = j.at("dirac_norm");
        std::optional<int> depth;
        if (q.contains("depth"))
        {
            depth = q.at("depth").get<int>();
        }
        return {rkd::operator_from_json(q.at("operator"), base_of(file)), depth};
    }
    return {rkd::operator_from_json(j, base_of(file)), std::nullopt};
}

// --------------------------------------------------------------------------

struct VerifyArgs
{
    std::string suite = "all";
    int depth = 8;
    std::uint64_t seed = 1;
    double tol = 1e-12;
    std::string out;
};

int cmd_verify(const VerifyArgs& a)
{
    check_depth(a.depth);
    rkd::SuiteReport report;
    try
    {
        report = rkd::run_suite(a.suite, {a.depth, a.seed, a.tol});
    }
    catch (const rkd::UnknownSuite& e)
    {
        throw UsageError(e.what());
    }
    emit(report.to_json().dump(2), a.out);
    for (const auto& c : report.checks)
    {
        if (c.status == rkd::Status::Fail)
        {
            std::cerr << "FAIL " << c.id << " [" << c.paper_ref << "]: value " << c.value << ", expected " << c.expected
                      << ", tolerance " << c.tolerance << '\n';
        }
    }
    return report.passed() ? exit_pass : exit_fail;
}

struct NormArgs
{
    std::string op;
    std::optional<int> depth;
    std::string out;
};

int cmd_norm(const NormArgs& a)
{
    auto [op, file_depth] = load_operator(a.op);
    const int depth = a.depth ? *a.depth : (file_depth ? *file_depth : rkd::attainment_depth(op));
    check_depth(depth);
    const rkd::BlockNorm b = rkd::commutator_norm(op, depth);
    json j{{"value", b.value},
           {"block_upper", b.upper},
           {"block_lower", b.lower},
           {"depth", depth},
           {"operator", op.describe()},
           {"converged", b.converged()}};
    emit(j.dump(2), a.out);
    return exit_pass;
}

struct SweepArgs
{
    std::string op;
    int from = 1;
    int to = 6;
    std::string csv;
};

int cmd_sweep(const SweepArgs& a)
{
    check_depth(a.from);
    check_depth(a.to);
    if (a.from > a.to)
    {
        throw UsageError("--from must not exceed --to");
    }
    const rkd::OperatorSpec op = load_operator(a.op).first;
    const auto rows = rkd::commutator_sweep(op, rkd::depth_range(a.from, a.to));
    std::ostringstream os;
    os.precision(17);
    os << "depth,value,iterations,method,converged,plateau\n";
    for (const auto& r : rows)
    {
        os << r.depth << ',' << r.estimate.value << ',' << r.estimate.iterations << ',' << rkd::method_name(r.estimate.method)
           << ',' << (r.estimate.converged ? "true" : "false") << ',' << (r.plateau ? "true" : "false") << '\n';
    }
    std::string text = os.str();
    text.pop_back();
    emit(text, a.csv);
    return exit_pass;
}

struct ConnesArgs
{
    std::string eta;
    std::string xi;
    std::string family;
    int depth = 1;
    std::string out;
};

int cmd_connes(const ConnesArgs& a)
{
    check_depth(a.depth);
    const rkd::VectorState eta(rkd::function_from_json(rkd::read_json_file(a.eta)));
    const rkd::VectorState xi(rkd::function_from_json(rkd::read_json_file(a.xi)));
    const auto family = rkd::family_from_json(rkd::read_json_file(a.family), base_of(a.family));
    try
    {
        const rkd::ConnesBound b = rkd::connes_lower_bound(eta, xi, family, a.depth);
        json j{{"lower_bound", b.lower_bound},
               {"witness_operator", b.witness ? json(family[*b.witness].describe()) : json()},
               {"witness_index", b.witness ? json(*b.witness) : json()},
               {"family_size", family.size()}};
        emit(j.dump(2), a.out);
        return exit_pass;
    }
    catch (const rkd::UncertifiedOperator& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_fail;
    }
}

struct BosonArgs
{
    int n_max = 4;
    int w_max_len = 3;
    int depth = 10;
    double tol = 1e-12;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_boson_verify(const BosonArgs& a)
{
    check_depth(a.depth);
    if (a.n_max < 0 || a.w_max_len < 0 || a.n_max + a.w_max_len + 3 > rkd::max_length)
    {
        throw UsageError("--n-max and --w-max-len exceed the depth cap");
    }
    json identities = json::array();
    bool all_pass = true;
    auto record = [&](const std::string& name, double residual) {
        const bool ok = residual <= a.tol;
        all_pass = all_pass && ok;
        identities.push_back({{"identity", name}, {"residual", residual}, {"pass", ok}});
    };
    std::vector<std::optional<rkd::Word>> ws{std::nullopt};
    for (const auto& w : rkd::words_up_to(a.w_max_len, 0))
    {
        ws.emplace_back(w);
    }
    for (int n = 0; n <= a.n_max; ++n)
    {
        for (const auto& w : ws)
        {
            for (const auto& c : rkd::chain_shift_check(n, w, a.tol))
            {
                record(c.name, c.residual);
            }
            const rkd::DyadicFunction s = rkd::state_nw(n, w);
            if (n >= 1)
            {
                record("number " + rkd::ladder_label(n, w), rkd::sup_distance(rkd::number_apply(s), 0.5 * s));
            }
            else
            {
                record("ccr " + rkd::ladder_label(n, w), rkd::sup_distance(rkd::ccr_defect(s), 0.5 * s));
            }
        }
    }
    double ccr = 0.0;
    double car = 0.0;
    double car_mean = 0.0;
    for (int t = 0; t < 100; ++t)
    {
        const auto f = rkd::random_function(rkd::trial_seed(a.seed, 40, t), a.depth);
        ccr = std::max(ccr, rkd::sup_distance(rkd::ccr_defect(f), 0.5 * rkd::kernel_projection(f)));
        car_mean = std::max(car_mean, std::abs(rkd::mean(rkd::car_anticommutator(f)) - rkd::mean(f)));
        const auto g = rkd::random_function(rkd::trial_seed(a.seed, 41, t), a.depth, rkd::Constraint::FirstCoordinateFree);
        car = std::max(car, rkd::sup_distance(rkd::car_anticommutator(g), g));
    }
    record("ccr = (1/2) P_ker L on 100 random inputs", ccr);
    record("car = identity on first-coordinate-free inputs", car);
    record("car preserves the integral", car_mean);
    json j{{"passed", all_pass},
           {"n_max", a.n_max},
           {"w_max_len", a.w_max_len},
           {"depth", a.depth},
           {"tol", a.tol},
           {"identities", identities}};
    emit(j.dump(2), a.out);
    return all_pass ? exit_pass : exit_fail;
}

struct FormulasArgs
{
    std::string psi;
    std::string out;
};

int cmd_formulas_report(const FormulasArgs& a)
{
    const rkd::DyadicFunction psi = rkd::function_from_json(rkd::read_json_file(a.psi));
    rkd::require_unit(psi, "formulas report");
    const rkd::CPsi c = rkd::c_psi(psi);
    const rkd::ProjectionBounds bounds = rkd::projection_norm_bounds(psi);
    const rkd::OperatorSpec hat = rkd::OperatorSpec::proj(psi);
    const int depth = rkd::attainment_depth(hat);
    check_depth(depth);
    const rkd::BlockNorm b = rkd::commutator_norm(hat, depth);
    const rkd::Corte43 adj = rkd::corte43_adjudicate(psi);
    const rkd::DenkScan scan = rkd::denk_max_scan(std::clamp(c.direct, -1.0, 1.0));
    const rkd::PhiScan phi = rkd::denk_phi_scan(psi);
    const double upper = 3.0 / (2.0 * rkd::sqrt2);
    json j{
        {"c", {{"direct", c.direct}, {"coefficient", c.coefficient}, {"two_term", c.two_term}, {"agrees", c.agrees()}}},
        {"bounds", {{"lower_K", bounds.lower_K}, {"lower_L", bounds.lower_L}}},
        {"numeric", {{"value", b.value}, {"block_upper", b.upper}, {"block_lower", b.lower}, {"depth", depth}}},
        {"norm_bounds",
         {{"lower_1_holds", b.value >= 1.0 - rkd::norm_tolerance},
          {"upper_3_over_2sqrt2_holds", b.value <= upper + rkd::norm_tolerance},
          {"lower_K_below_numeric", bounds.lower_K <= b.value + 1e-8},
          {"lower_L_below_numeric", bounds.lower_L <= b.value + 1e-8}}},
        {"denk_scan", {{"c", c.direct}, {"max_G", scan.max}, {"argmax_a", scan.argmax_a}, {"d_sign", scan.d_sign}}},
        {"phi_scan", {{"max", phi.max}, {"numeric_upper_squared", b.upper * b.upper}}},
        {"adjudication",
         {{"c", adj.c},
          {"candidate_linear", adj.candidate_linear},
          {"candidate_sqrt", adj.candidate_sqrt},
          {"sqrt_one_minus_c2", adj.derived},
          {"numeric", adj.numeric},
          {"verdict", adj.verdict()}}},
    };
    emit(j.dump(2), a.out);
    return exit_pass;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ruelle-Koopman operators, boson ladder and Dirac commutator norms on dyadic function spaces"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a verification suite and print a JSON report");
    verify->add_option("--suite", va.suite, "basis, transfer, boson, fermion, dirac-projections, dirac-mult, dirac-condexp, denk, wold or all")
        ->capture_default_str();
    verify->add_option("--depth", va.depth, "depth of random inputs (at most 12)")->capture_default_str();
    verify->add_option("--seed", va.seed, "random seed")->capture_default_str();
    verify->add_option("--tol", va.tol, "tolerance for exact identities")->capture_default_str();
    verify->add_option("--out", va.out, "write the JSON report to this file");

    NormArgs na;
    auto* norm = app.add_subcommand("norm", "||[D, pi(A)]|| and its two blocks for an operator file");
    norm->add_option("operator", na.op, "operator JSON file")->required()->check(CLI::ExistingFile);
    norm->add_option("--depth", na.depth, "input depth (default: file, then attainment depth)");
    norm->add_option("--out", na.out, "write JSON to this file");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "commutator norm over a range of depths, as CSV");
    sweep->add_option("operator", sa.op, "operator JSON file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--from", sa.from, "first depth")->capture_default_str();
    sweep->add_option("--to", sa.to, "last depth")->capture_default_str();
    sweep->add_option("--csv", sa.csv, "write CSV to this file");

    ConnesArgs ca;
    auto* connes = app.add_subcommand("connes", "lower bound on the Connes distance from a certified family");
    connes->add_option("--eta", ca.eta, "first state (function file)")->required()->check(CLI::ExistingFile);
    connes->add_option("--xi", ca.xi, "second state (function file)")->required()->check(CLI::ExistingFile);
    connes->add_option("--family", ca.family, "family file")->required()->check(CLI::ExistingFile);
    connes->add_option("--depth", ca.depth, "minimum certification depth")->capture_default_str();
    connes->add_option("--out", ca.out, "write JSON to this file");

    BosonArgs ba;
    auto* boson = app.add_subcommand("boson", "boson ladder tools");
    boson->require_subcommand(1);
    auto* bverify = boson->add_subcommand("verify", "check ladder, CCR and CAR identities");
    bverify->add_option("--n-max", ba.n_max)->capture_default_str();
    bverify->add_option("--w-max-len", ba.w_max_len)->capture_default_str();
    bverify->add_option("--depth", ba.depth)->capture_default_str();
    bverify->add_option("--tol", ba.tol)->capture_default_str();
    bverify->add_option("--seed", ba.seed)->capture_default_str();
    bverify->add_option("--out", ba.out, "write JSON to this file");

    FormulasArgs fa;
    auto* formulas = app.add_subcommand("formulas", "closed-form oracles");
    formulas->require_subcommand(1);
    auto* freport = formulas->add_subcommand("report", "closed forms, bounds and numeric norm for a unit psi");
    freport->add_option("--psi", fa.psi, "function file")->required()->check(CLI::ExistingFile);
    freport->add_option("--out", fa.out, "write JSON to this file");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_usage;
    }

    try
    {
        if (verify->parsed())
        {
            return cmd_verify(va);
        }
        if (norm->parsed())
        {
            return cmd_norm(na);
        }
        if (sweep->parsed())
        {
            return cmd_sweep(sa);
        }
        if (connes->parsed())
        {
            return cmd_connes(ca);
        }
        if (bverify->parsed())
        {
            return cmd_boson_verify(ba);
        }
        if (freport->parsed())
        {
            return cmd_formulas_report(fa);
        }
    }
    catch (const UsageError& e)
    {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const rkd::FormatError& e)
    {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_fail;
    }
    return exit_usage;
}
