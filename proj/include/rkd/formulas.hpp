#ifndef RKD_FORMULAS_HPP
#define RKD_FORMULAS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkd/dirac.hpp"
#include "rkd/dyadic.hpp"
#include "rkd/transfer.hpp"

namespace rkd
{

// --------------------------------------------------------------------------
// c(psi) = <K psi, psi>
// --------------------------------------------------------------------------

struct CPsi
{
    double direct = 0.0;
    /// Full Haar-coefficient sum, including the (beta1 - beta0)^2 / 2 term.
    double coefficient = 0.0;
    /// The two-term coefficient sum without the constant-mode correction.
    double two_term = 0.0;

    bool agrees(double tol = 1e-12) const { return std::abs(direct - coefficient) <= tol; }
};

namespace detail
{

/// sum_u (b_u / sqrt2)(b_{0u} + b_{1u}) over words u with l(u) >= min_len.
inline double chain_sum(const HaarCoeffs& h, int min_len)
{
    double s = 0.0;
    for (const auto& [u, b] : h.coeffs)
    {
        if (u.length() >= min_len && u.length() + 1 <= max_length)
        {
            s += b * inv_sqrt2 * (h.at(prepend(0, u)) + h.at(prepend(1, u)));
        }
    }
    return s;
}

inline double first_level_sum(const HaarCoeffs& h) { return h.at(Word(1, 0)) + h.at(Word(1, 1)); }

}  // namespace detail

inline CPsi c_psi(const DyadicFunction& psi)
{
    require_unit(psi, "c_psi");
    const HaarCoeffs h = to_haar(psi);
    CPsi out;
    out.direct = inner(koopman_apply(psi), psi);
    const double mean_term = 0.5 * detail::first_level_sum(h) * (h.eps0 + h.eps1);
    out.two_term = detail::chain_sum(h, 1) + mean_term;
    out.coefficient = out.two_term + 0.5 * (h.eps1 - h.eps0) * (h.eps1 - h.eps0);
    return out;
}

// --------------------------------------------------------------------------
// The maximization in Denker's form
// --------------------------------------------------------------------------

struct DenkPoint
{
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;

    /// b = sqrt(1 - a^2) >= 0 and d = d_sign * sqrt(1 - c^2).
    static DenkPoint make(double a, double c, int d_sign = 1)
    {
        if (std::abs(a) > 1.0 || std::abs(c) > 1.0)
        {
            throw std::invalid_argument("DenkPoint: |a| and |c| must be at most 1");
        }
        return {a, std::sqrt(std::max(0.0, 1.0 - a * a)), c, (d_sign >= 0 ? 1.0 : -1.0) * std::sqrt(std::max(0.0, 1.0 - c * c))};
    }

    void validate(double tol = 1e-12) const
    {
        if (std::abs(a * a + b * b - 1.0) > tol || std::abs(c * c + d * d - 1.0) > tol)
        {
            throw std::invalid_argument("DenkPoint: constraint a^2 + b^2 = 1 = c^2 + d^2 violated");
        }
    }
};

/// G = a^2 - a(ac + bd)c + (ac + bd)^2, as displayed in the maximization argument.
inline double denk_G(const DenkPoint& p)
{
    p.validate();
    const double y = p.a * p.c + p.b * p.d;
    return p.a * p.a - p.a * y * p.c + y * y;
}

/// x^2 - 2xyc + y^2 with x = a, y = ac + bd: the quadratic form itself, equal to 1 - c^2.
inline double denk_quadratic(const DenkPoint& p)
{
    p.validate();
    const double y = p.a * p.c + p.b * p.d;
    return p.a * p.a - 2.0 * p.a * y * p.c + y * y;
}

/// ((1 + c)/2)^{1/2}, with G(a_c, c) = (2 + c - c^2)/2 for d >= 0.
inline double denk_a_c(double c) { return std::sqrt((1.0 + c) / 2.0); }

inline double denk_closed_form(double c) { return 0.5 * (2.0 + c - c * c); }

struct DenkScan
{
    double max = 0.0;
    double argmax_a = 0.0;
    int d_sign = 1;
};

namespace detail
{

/// Golden-section maximization of a unimodal g on [lo, hi].
template <class G>
double golden_max(const G& g, double lo, double hi, double* arg)
{
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - r * (hi - lo);
    double x2 = lo + r * (hi - lo);
    double g1 = g(x1);
    double g2 = g(x2);
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i)
    {
        if (g1 < g2)
        {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + r * (hi - lo);
            g2 = g(x2);
        }
        else
        {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - r * (hi - lo);
            g1 = g(x1);
        }
    }
    *arg = g1 >= g2 ? x1 : x2;
    return std::max(g1, g2);
}

}  // namespace detail

/// Max of denk_G over a = cos t, t in [0, pi], and both signs of d: grid, then golden refinement.
inline DenkScan denk_max_scan(double c, int grid = 4096)
{
    if (grid < 1000)
    {
        throw std::invalid_argument("denk_max_scan: grid must be at least 1000");
    }
    if (std::abs(c) > 1.0)
    {
        throw std::invalid_argument("denk_max_scan: |c| must be at most 1");
    }
    DenkScan best{-std::numeric_limits<double>::infinity(), 0.0, 1};
    const double step = std::numbers::pi / grid;
    for (int sign : {1, -1})
    {
        auto g = [&](double t) { return denk_G(DenkPoint::make(std::clamp(std::cos(t), -1.0, 1.0), c, sign)); };
        int best_i = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (int i = 0; i <= grid; ++i)
        {
            const double v = g(i * step);
            if (v > best_v)
            {
                best_v = v;
                best_i = i;
            }
        }
        double t = best_i * step;
        const double lo = std::max(0.0, t - step);
        const double hi = std::min(std::numbers::pi, t + step);
        const double refined = detail::golden_max(g, lo, hi, &t);
        if (refined > best_v)
        {
            best_v = refined;
        }
        else
        {
            t = best_i * step;
        }
        if (best_v > best.max)
        {
            best = {best_v, std::cos(t), sign};
        }
    }
    return best;
}

// --------------------------------------------------------------------------
// Projection commutators
// --------------------------------------------------------------------------

/// <phi,psi>^2 - 2<phi,psi><K phi,psi><K psi,psi> + <K phi,psi>^2.
inline double projection_sq_expression(const DyadicFunction& phi, const DyadicFunction& psi)
{
    require_unit(psi, "projection_sq_expression");
    const double x = inner(phi, psi);
    const double y = inner(koopman_apply(phi), psi);
    const double c = inner(koopman_apply(psi), psi);
    return x * x - 2.0 * x * y * c + y * y;
}

/// |(K psi^ - psi^ K) phi|^2 evaluated directly.
inline double projection_sq_direct(const DyadicFunction& phi, const DyadicFunction& psi)
{
    const DyadicFunction v = inner(phi, psi) * koopman_apply(psi) - inner(koopman_apply(phi), psi) * psi;
    return inner(v, v);
}

/// |(L psi^ - psi^ L) phi|^2 evaluated directly.
inline double projection_sq_direct_ruelle(const DyadicFunction& phi, const DyadicFunction& psi)
{
    const DyadicFunction v = inner(phi, psi) * ruelle_apply(psi) - inner(ruelle_apply(phi), psi) * psi;
    return inner(v, v);
}

struct FretValue
{
    /// Coefficient form of the expansion with the complete c(psi).
    double corrected = 0.0;
    /// As displayed: the c-sum over l(u) > 1 plus the first-level mean term.
    double printed = 0.0;
};

/// The squared commutator image from Haar coefficients alone.
inline FretValue fret_coefficient_formula(const DyadicFunction& phi, const DyadicFunction& psi)
{
    require_unit(psi, "fret_coefficient_formula");
    const HaarCoeffs ha = to_haar(phi);
    const HaarCoeffs hb = to_haar(psi);
    double x = ha.eps0 * hb.eps0 + ha.eps1 * hb.eps1;
    for (const auto& [w, a] : ha.coeffs)
    {
        x += a * hb.at(w);
    }
    double y = 0.0;
    for (const auto& [v, a] : ha.coeffs)
    {
        if (v.length() + 1 <= max_length)
        {
            y += inv_sqrt2 * a * (hb.at(prepend(0, v)) + hb.at(prepend(1, v)));
        }
    }
    y += 0.5 * (ha.eps1 + ha.eps0) * detail::first_level_sum(hb) + 0.5 * (ha.eps1 - ha.eps0) * (hb.eps1 - hb.eps0);
    const double mean_term = 0.5 * detail::first_level_sum(hb) * (hb.eps0 + hb.eps1);
    const double c_full = detail::chain_sum(hb, 1) + mean_term + 0.5 * (hb.eps1 - hb.eps0) * (hb.eps1 - hb.eps0);
    const double c_printed = detail::chain_sum(hb, 2) + mean_term;
    return {x * x + y * y - 2.0 * x * y * c_full, x * x + y * y - 2.0 * x * y * c_printed};
}

struct ProjectionBounds
{
    /// sup_w of the K expression at phi = e_w.
    double lower_K = 0.0;
    /// sup over l(w) >= 2 of the displayed Ruelle analogue.
    double lower_L = 0.0;
};

inline ProjectionBounds projection_norm_bounds(const DyadicFunction& psi)
{
    require_unit(psi, "projection_norm_bounds");
    const HaarCoeffs h = to_haar(psi);
    const double c = c_psi(psi).direct;
    std::set<Word> k_words;
    std::set<Word> l_words;
    for (const auto& [w, b] : h.coeffs)
    {
        k_words.insert(w);
        if (w.length() >= 2)
        {
            k_words.insert(shift(w));
            l_words.insert(w);
        }
        if (w.length() + 1 <= max_length)
        {
            l_words.insert(prepend(0, w));
            l_words.insert(prepend(1, w));
        }
    }
    ProjectionBounds out;
    for (const Word& w : k_words)
    {
        if (w.length() + 1 > max_length)
        {
            continue;
        }
        const double bw = h.at(w);
        const double s = h.at(prepend(0, w)) + h.at(prepend(1, w));
        const double v = bw * bw + 0.5 * s * s - 2.0 * bw * inv_sqrt2 * s * c;
        out.lower_K = std::max(out.lower_K, std::sqrt(std::max(0.0, v)));
    }
    for (const Word& w : l_words)
    {
        if (w.length() < 2)
        {
            continue;
        }
        const double bw = h.at(w);
        const double bs = h.at(shift(w));
        const double v = bw * bw + 0.5 * bs * bs - 2.0 * bw * inv_sqrt2 * bs * c;
        out.lower_L = std::max(out.lower_L, std::sqrt(std::max(0.0, v)));
    }
    return out;
}

/// psi = 2^{-1/2} e_w - e_{0w}/2 - e_{1w}/2, for which <K psi, psi> = -1/2.
inline DyadicFunction denk_witness(Word w)
{
    return inv_sqrt2 * haar_function(w) - 0.5 * haar_function(prepend(0, w)) - 0.5 * haar_function(prepend(1, w));
}

struct PhiScan
{
    double max = 0.0;
    double angle = 0.0;
};

/// Max of the projection expression over unit phi in span{psi, L psi}.
inline PhiScan denk_phi_scan(const DyadicFunction& psi, int grid = 4096)
{
    require_unit(psi, "denk_phi_scan");
    DyadicFunction perp = ruelle_apply(psi) - inner(ruelle_apply(psi), psi) * psi;
    const bool planar = norm(perp) > 1e-12;
    if (planar)
    {
        perp = normalized(perp);
    }
    auto g = [&](double t) {
        DyadicFunction phi = std::cos(t) * psi;
        if (planar)
        {
            phi += std::sin(t) * perp;
        }
        return projection_sq_expression(phi, psi);
    };
    const double step = std::numbers::pi / grid;
    PhiScan best{-1.0, 0.0};
    for (int i = 0; i <= grid; ++i)
    {
        const double v = g(i * step);
        if (v > best.max)
        {
            best = {v, i * step};
        }
    }
    double t = best.angle;
    const double refined = detail::golden_max(g, std::max(0.0, t - step), std::min(std::numbers::pi, t + step), &t);
    if (refined > best.max)
    {
        best = {refined, t};
    }
    return best;
}

// --------------------------------------------------------------------------
// Multiplication operators
// --------------------------------------------------------------------------

namespace detail
{

/// Calls fn(|f(x) - f(0x)|, |f(x) - f(1x)|) for every depth-m cylinder x.
template <class Fn>
void backward_differences(const DyadicFunction& f, Fn fn)
{
    const int m = f.depth();
    if (m == 0)
    {
        fn(0.0, 0.0);
        return;
    }
    const DyadicFunction fine = refine(f, m + 1);
    const std::size_t n = f.size();
    for (std::size_t j = 0; j < n; ++j)
    {
        fn(std::abs(f[j] - fine[j]), std::abs(f[j] - fine[n + j]));
    }
}

}  // namespace detail

/// sup_x ((|f(x) - f(0x)|^2 + |f(x) - f(1x)|^2) / 2)^{1/2}.
inline double backward_rms_norm(const DyadicFunction& f)
{
    double s = 0.0;
    detail::backward_differences(f, [&](double d0, double d1) { s = std::max(s, std::sqrt(0.5 * (d0 * d0 + d1 * d1))); });
    return s;
}

/// |Kf - f|_inf.
inline double forward_sup(const DyadicFunction& f) { return sup_norm(koopman_apply(f) - f); }

/// |f - Lf|_inf.
inline double ruelle_diff_sup(const DyadicFunction& f) { return sup_norm(f - ruelle_apply(f)); }

struct WeightedSupChain
{
    double sup_f = 0.0;
    double sup_root_L_f2 = 0.0;
    double sup_Lf = 0.0;

    bool holds(double tol = 1e-12) const { return sup_f + tol >= sup_root_L_f2 && sup_root_L_f2 + tol >= sup_Lf; }
};

inline WeightedSupChain weighted_sup_chain(const DyadicFunction& f)
{
    DyadicFunction root = ruelle_apply(pointwise_mul(f, f));
    for (double& v : root.values())
    {
        v = std::sqrt(std::max(0.0, v));
    }
    return {sup_norm(f), sup_norm(root), sup_norm(ruelle_apply(f))};
}

inline constexpr double order_neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double order_pos_inf = std::numeric_limits<double>::infinity();

/// Power mean of order p of the pair (x, y), x, y >= 0; a zero entry gives 0 for p <= 0.
inline double power_mean(double x, double y, double p)
{
    if (p == order_neg_inf)
    {
        return std::min(x, y);
    }
    if (p == order_pos_inf)
    {
        return std::max(x, y);
    }
    if (p <= 0.0 && (x == 0.0 || y == 0.0))
    {
        return 0.0;
    }
    if (p == 0.0)
    {
        return std::sqrt(x * y);
    }
    if (p == 1.0)
    {
        return 0.5 * (x + y);
    }
    if (p == 2.0)
    {
        return std::sqrt(0.5 * (x * x + y * y));
    }
    return std::pow(0.5 * (std::pow(x, p) + std::pow(y, p)), 1.0 / p);
}

struct MeanValue
{
    double order = 0.0;
    double value = 0.0;
};

inline std::string order_label(double p)
{
    if (p == order_neg_inf)
    {
        return "-inf";
    }
    if (p == order_pos_inf)
    {
        return "inf";
    }
    std::string s = std::to_string(p);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.')
    {
        s.pop_back();
    }
    return s;
}

/// sup_x of the order-p mean of the backward differences, for orders -inf, -1, 0, 1, 2, q, inf.
inline std::vector<MeanValue> kolmogorov_mean_chain(const DyadicFunction& f, double q = 3.0)
{
    if (q < 2.0)
    {
        throw std::invalid_argument("kolmogorov_mean_chain: q must be at least 2");
    }
    std::vector<MeanValue> out;
    for (double p : {order_neg_inf, -1.0, 0.0, 1.0, 2.0, q, order_pos_inf})
    {
        double s = 0.0;
        detail::backward_differences(f, [&](double d0, double d1) { s = std::max(s, power_mean(d0, d1, p)); });
        out.push_back({p, s});
    }
    return out;
}

inline bool chain_monotone(const std::vector<MeanValue>& chain, double tol = 1e-12)
{
    for (std::size_t i = 1; i < chain.size(); ++i)
    {
        if (chain[i].value + tol < chain[i - 1].value)
        {
            return false;
        }
    }
    return true;
}

/// ||[D, pi(M_f)]|| at the attainment depth of f.
inline BlockNorm mult_commutator_norm(const DyadicFunction& f, const NormOptions& opt = {})
{
    return commutator_norm(OperatorSpec::mult(f), f.depth() + 1, opt);
}

struct L2Sandwich
{
    double norm = 0.0;
    double forward_l2 = 0.0;
    double ruelle_l2 = 0.0;
    bool applicable = false;
    bool holds = true;
};

/// When ||[D, pi(M_f)]|| <= 1, both |Kf - f| and |Lf - f| in L^2 are at most 1.
inline L2Sandwich l2_sandwich_check(const DyadicFunction& f, const NormOptions& opt = {})
{
    L2Sandwich out;
    out.norm = mult_commutator_norm(f, opt).value;
    out.forward_l2 = norm(koopman_apply(f) - f);
    out.ruelle_l2 = norm(ruelle_apply(f) - f);
    out.applicable = out.norm <= 1.0 + certify_slack;
    out.holds = !out.applicable || (out.forward_l2 <= 1.0 + certify_slack && out.ruelle_l2 <= 1.0 + certify_slack);
    return out;
}

// --------------------------------------------------------------------------
// Adjudications
// --------------------------------------------------------------------------

struct Corte43
{
    double c = 0.0;
    double candidate_linear = 0.0;
    double candidate_sqrt = 0.0;
    /// (1 - c^2)^{1/2}: the square root of the quadratic form's constant value.
    double derived = 0.0;
    double numeric = 0.0;
    bool linear_matches = false;
    bool sqrt_matches = false;
    bool derived_matches = false;

    std::string verdict() const
    {
        if (linear_matches && sqrt_matches)
        {
            return "both";
        }
        if (linear_matches)
        {
            return "linear";
        }
        if (sqrt_matches)
        {
            return "sqrt";
        }
        return derived_matches ? "neither (matches sqrt(1-c^2))" : "neither";
    }
};

inline Corte43 corte43_adjudicate(const DyadicFunction& psi, double tol = 1e-6, const NormOptions& opt = {})
{
    Corte43 out;
    out.c = c_psi(psi).direct;
    out.candidate_linear = denk_closed_form(out.c);
    out.candidate_sqrt = std::sqrt(out.candidate_linear);
    out.derived = std::sqrt(std::max(0.0, 1.0 - out.c * out.c));
    const OperatorSpec p = OperatorSpec::proj(psi);
    out.numeric = commutator_norm(p, attainment_depth(p), opt).value;
    out.linear_matches = std::abs(out.numeric - out.candidate_linear) <= tol;
    out.sqrt_matches = std::abs(out.numeric - out.candidate_sqrt) <= tol;
    out.derived_matches = std::abs(out.numeric - out.derived) <= tol;
    return out;
}

/// |(K e^_w - e^_w K)(e_v)|^2 as tabulated: 1 if v = w, 1/2 if v = sigma(w), else 0.
inline double okl_koopman_value(Word w, Word v)
{
    if (v == w)
    {
        return 1.0;
    }
    return (w.length() >= 1 && v == shift(w)) ? 0.5 : 0.0;
}

/// |(L e^_w - e^_w L)(e_v)|^2 as tabulated: 1/2 if v = w or sigma(v) = w, else 0.
inline double okl_ruelle_value(Word w, Word v)
{
    if (v == w)
    {
        return 0.5;
    }
    return (v.length() >= 1 && shift(v) == w) ? 0.5 : 0.0;
}

/// Sign s in e_u e_v = s 2^{l(u)/2} e_v for u a proper prefix of v: +1 when v_{l(u)+1} = 1.
inline int product_rule_sign(Word u, Word v)
{
    if (!is_prefix(u, v) || u.length() >= v.length())
    {
        throw std::invalid_argument("product_rule_sign: u must be a proper prefix of v");
    }
    return v.symbol(u.length() + 1) == 1 ? 1 : -1;
}

}  // namespace rkd

#endif
