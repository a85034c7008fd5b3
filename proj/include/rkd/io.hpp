#ifndef RKD_IO_HPP
#define RKD_IO_HPP

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkd/dyadic.hpp"
#include "rkd/transfer.hpp"

namespace rkd
{

using json = nlohmann::json;

class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw FormatError("cannot open " + path.string());
    }
    try
    {
        return json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw FormatError(path.string() + ": malformed JSON: " + e.what());
    }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
    {
        throw FormatError("cannot write " + path.string());
    }
    out << text;
    if (!out)
    {
        throw FormatError("write failed: " + path.string());
    }
}

namespace detail
{

inline const json& require(const json& j, const char* key, const char* context)
{
    if (!j.is_object() || !j.contains(key))
    {
        throw FormatError(std::string(context) + ": missing field \"" + key + "\"");
    }
    return j.at(key);
}

template <class T>
T get_as(const json& j, const char* what)
{
    try
    {
        return j.get<T>();
    }
    catch (const json::exception& e)
    {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

}  // namespace detail

/// {"depth": d, "values": [...]} or {"haar": {"eps0": x, "eps1": y, "words": {"01": b}}}.
inline DyadicFunction function_from_json(const json& j)
{
    try
    {
        if (j.is_object() && j.contains("haar"))
        {
            const json& h = j.at("haar");
            HaarCoeffs coeffs;
            coeffs.eps0 = h.value("eps0", 0.0);
            coeffs.eps1 = h.value("eps1", 0.0);
            if (h.contains("words"))
            {
                for (const auto& [key, value] : h.at("words").items())
                {
                    const Word w = Word::parse(key);
                    if (w.is_empty())
                    {
                        throw FormatError("Haar coefficients must be keyed by nonempty words");
                    }
                    coeffs.coeffs[w] = detail::get_as<double>(value, "Haar coefficient");
                }
            }
            return from_haar(coeffs);
        }
        const int depth = detail::get_as<int>(detail::require(j, "depth", "function"), "depth");
        auto values = detail::get_as<std::vector<double>>(detail::require(j, "values", "function"), "values");
        return DyadicFunction(depth, std::move(values));
    }
    catch (const WordError& e)
    {
        throw FormatError(std::string("function: ") + e.what());
    }
    catch (const std::invalid_argument& e)
    {
        throw FormatError(std::string("function: ") + e.what());
    }
}

inline json function_to_json(const DyadicFunction& f)
{
    return json{{"depth", f.depth()}, {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

inline json haar_to_json(const HaarCoeffs& h)
{
    json words = json::object();
    for (const auto& [w, b] : h.coeffs)
    {
        words[w.key()] = b;
    }
    return json{{"haar", {{"eps0", h.eps0}, {"eps1", h.eps1}, {"words", words}}}};
}

/// A function given inline or as a path (relative to base) to a function file.
inline DyadicFunction function_field(const json& j, const std::filesystem::path& base)
{
    if (j.is_string())
    {
        const std::filesystem::path p(j.get<std::string>());
        return function_from_json(read_json_file(p.is_absolute() ? p : base / p));
    }
    return function_from_json(j);
}

inline OperatorSpec operator_from_json(const json& j, const std::filesystem::path& base = ".")
{
    if (!j.is_object())
    {
        throw FormatError("operator must be a JSON object");
    }
    const auto kind = detail::get_as<std::string>(detail::require(j, "kind", "operator"), "kind");
    auto list = [&](const char* key) {
        std::vector<OperatorSpec> ops;
        const json& arr = detail::require(j, key, kind.c_str());
        if (!arr.is_array())
        {
            throw FormatError(kind + ": \"" + key + "\" must be an array");
        }
        for (const auto& item : arr)
        {
            ops.push_back(operator_from_json(item, base));
        }
        return ops;
    };
    try
    {
        if (kind == "identity")
        {
            return OperatorSpec::identity();
        }
        if (kind == "zero")
        {
            return OperatorSpec::zero();
        }
        if (kind == "ruelle")
        {
            return OperatorSpec::ruelle();
        }
        if (kind == "koopman")
        {
            return OperatorSpec::koopman();
        }
        if (kind == "mult")
        {
            return OperatorSpec::mult(function_field(detail::require(j, "f", "mult"), base));
        }
        if (kind == "proj")
        {
            return OperatorSpec::proj(function_field(detail::require(j, "psi", "proj"), base));
        }
        if (kind == "haar_proj")
        {
            const Word w = Word::parse(detail::get_as<std::string>(detail::require(j, "w", "haar_proj"), "w"));
            return OperatorSpec::haar_proj(w);
        }
        if (kind == "condexp")
        {
            return OperatorSpec::cond_exp(detail::get_as<int>(detail::require(j, "n", "condexp"), "n"));
        }
        if (kind == "kernel_proj")
        {
            return OperatorSpec::kernel_proj();
        }
        if (kind == "compose")
        {
            return OperatorSpec::compose(list("ops"));
        }
        if (kind == "sum")
        {
            auto ops = list("ops");
            std::vector<double> weights(ops.size(), 1.0);
            if (j.contains("weights"))
            {
                weights = detail::get_as<std::vector<double>>(j.at("weights"), "weights");
            }
            return OperatorSpec::sum(std::move(ops), std::move(weights));
        }
        if (kind == "adjoint")
        {
            return OperatorSpec::adjoint(operator_from_json(detail::require(j, "op", "adjoint"), base));
        }
    }
    catch (const WordError& e)
    {
        throw FormatError(kind + ": " + e.what());
    }
    catch (const std::invalid_argument& e)
    {
        throw FormatError(kind + ": " + e.what());
    }
    throw FormatError("unknown operator kind \"" + kind + "\"");
}

/// A family file is either an array of operators or {"family": [...]}.
inline std::vector<OperatorSpec> family_from_json(const json& j, const std::filesystem::path& base = ".")
{
    const json& arr = j.is_object() ? detail::require(j, "family", "family file") : j;
    if (!arr.is_array())
    {
        throw FormatError("family must be an array of operators");
    }
    std::vector<OperatorSpec> out;
    for (const auto& item : arr)
    {
        out.push_back(operator_from_json(item, base));
    }
    return out;
}

}  // namespace rkd

#endif
