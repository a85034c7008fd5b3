#ifndef RKD_DYADIC_HPP
#define RKD_DYADIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkd/words.hpp"

namespace rkd
{

inline constexpr double sqrt2 = 1.41421356237309504880;
inline constexpr double inv_sqrt2 = 0.70710678118654752440;

/// 2^{k/2} for integer k.
inline double pow_sqrt2(int k)
{
    return std::ldexp(k % 2 == 0 ? 1.0 : (k > 0 ? sqrt2 : inv_sqrt2), k >= 0 ? k / 2 : -((-k) / 2));
}

///
/// Locally constant function on {0,1}^N of depth d: entry i is its value on
/// the cylinder [index_word(d, i)]. Inner products are taken with respect to
/// the (1/2,1/2)-Bernoulli measure, so each depth-d cylinder carries mass 2^-d.
///
class DyadicFunction
{
public:
    DyadicFunction() : values_(1, 0.0) {}

    explicit DyadicFunction(int depth) : depth_(check_depth(depth)), values_(std::size_t{1} << depth, 0.0) {}

    DyadicFunction(int depth, std::vector<double> values) : depth_(check_depth(depth)), values_(std::move(values))
    {
        if (values_.size() != (std::size_t{1} << depth_))
        {
            throw std::invalid_argument("value count " + std::to_string(values_.size()) +
                                        " does not match depth " + std::to_string(depth_));
        }
        for (double v : values_)
        {
            if (!std::isfinite(v))
            {
                throw std::invalid_argument("function values must be finite");
            }
        }
    }

    static DyadicFunction constant(double c, int depth = 0)
    {
        return DyadicFunction(depth, std::vector<double>(std::size_t{1} << check_depth(depth), c));
    }

    /// Characteristic function of the cylinder [w], at depth l(w).
    static DyadicFunction indicator(Word w)
    {
        DyadicFunction f(w.length());
        f.values_[word_index(w)] = 1.0;
        return f;
    }

    int depth() const { return depth_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    /// Value at any point of the cylinder [w], l(w) >= depth.
    double at(Word w) const
    {
        if (w.length() < depth_)
        {
            throw std::invalid_argument("word shorter than function depth");
        }
        return values_[w.prefix(depth_).bits()];
    }

    DyadicFunction& operator+=(const DyadicFunction& g);
    DyadicFunction& operator-=(const DyadicFunction& g);
    DyadicFunction& operator*=(double s)
    {
        for (double& v : values_)
        {
            v *= s;
        }
        return *this;
    }

    friend DyadicFunction operator+(DyadicFunction f, const DyadicFunction& g) { return f += g; }
    friend DyadicFunction operator-(DyadicFunction f, const DyadicFunction& g) { return f -= g; }
    friend DyadicFunction operator*(double s, DyadicFunction f) { return f *= s; }
    friend DyadicFunction operator*(DyadicFunction f, double s) { return f *= s; }
    friend DyadicFunction operator-(DyadicFunction f) { return f *= -1.0; }

private:
    static int check_depth(int depth)
    {
        if (depth < 0 || depth > max_length)
        {
            throw std::invalid_argument("depth out of range: " + std::to_string(depth));
        }
        return depth;
    }

    int depth_ = 0;
    std::vector<double> values_;
};

/// Re-expresses f on the finer partition of depth d' >= depth(f).
inline DyadicFunction refine(const DyadicFunction& f, int target_depth)
{
    if (target_depth < f.depth())
    {
        throw std::invalid_argument("refine: target depth " + std::to_string(target_depth) +
                                    " below function depth " + std::to_string(f.depth()));
    }
    if (target_depth == f.depth())
    {
        return f;
    }
    DyadicFunction out(target_depth);
    const int shift_by = target_depth - f.depth();
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i] = f[i >> shift_by];
    }
    return out;
}

/// Conditional expectation onto the depth-d' partition (d' <= depth(f)):
/// the orthogonal projection and the adjoint of refine.
inline DyadicFunction coarsen(const DyadicFunction& f, int target_depth)
{
    if (target_depth > f.depth() || target_depth < 0)
    {
        throw std::invalid_argument("coarsen: target depth out of range");
    }
    if (target_depth == f.depth())
    {
        return f;
    }
    DyadicFunction out(target_depth);
    const int shift_by = f.depth() - target_depth;
    const double weight = std::ldexp(1.0, -shift_by);
    for (std::size_t i = 0; i < f.size(); ++i)
    {
        out[i >> shift_by] += weight * f[i];
    }
    return out;
}

inline DyadicFunction& DyadicFunction::operator+=(const DyadicFunction& g)
{
    if (g.depth_ > depth_)
    {
        *this = refine(*this, g.depth_);
    }
    const int shift_by = depth_ - g.depth_;
    for (std::size_t i = 0; i < values_.size(); ++i)
    {
        values_[i] += g.values_[i >> shift_by];
    }
    return *this;
}

inline DyadicFunction& DyadicFunction::operator-=(const DyadicFunction& g)
{
    if (g.depth_ > depth_)
    {
        *this = refine(*this, g.depth_);
    }
    const int shift_by = depth_ - g.depth_;
    for (std::size_t i = 0; i < values_.size(); ++i)
    {
        values_[i] -= g.values_[i >> shift_by];
    }
    return *this;
}

inline double inner(const DyadicFunction& f, const DyadicFunction& g)
{
    const int d = std::max(f.depth(), g.depth());
    const int sf = d - f.depth();
    const int sg = d - g.depth();
    double sum = 0.0;
    for (std::size_t i = 0; i < (std::size_t{1} << d); ++i)
    {
        sum += f[i >> sf] * g[i >> sg];
    }
    return std::ldexp(sum, -d);
}

inline double norm(const DyadicFunction& f) { return std::sqrt(inner(f, f)); }

/// Integral against the Bernoulli measure.
inline double mean(const DyadicFunction& f)
{
    double sum = 0.0;
    for (double v : f.values())
    {
        sum += v;
    }
    return std::ldexp(sum, -f.depth());
}

inline double sup_norm(const DyadicFunction& f)
{
    double m = 0.0;
    for (double v : f.values())
    {
        m = std::max(m, std::abs(v));
    }
    return m;
}

inline DyadicFunction normalized(DyadicFunction f)
{
    const double n = norm(f);
    if (n == 0.0)
    {
        throw std::invalid_argument("cannot normalize the zero function");
    }
    return f *= 1.0 / n;
}

inline DyadicFunction pointwise_mul(const DyadicFunction& f, const DyadicFunction& g)
{
    const int d = std::max(f.depth(), g.depth());
    const int sf = d - f.depth();
    const int sg = d - g.depth();
    DyadicFunction out(d);
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i] = f[i >> sf] * g[i >> sg];
    }
    return out;
}

/// Max-norm distance after promotion to a common depth.
inline double sup_distance(const DyadicFunction& f, const DyadicFunction& g) { return sup_norm(f - g); }

// --------------------------------------------------------------------------
// Haar basis
// --------------------------------------------------------------------------

/// e_eps^0 = -sqrt2 chi_[0], e_eps^1 = sqrt2 chi_[1], e_w = 2^{l/2}(chi_[w1] - chi_[w0]).
inline DyadicFunction haar_function(const HaarIndex& idx)
{
    switch (idx.tag)
    {
    case HaarIndex::Tag::Eps0:
        return DyadicFunction(1, {-sqrt2, 0.0});
    case HaarIndex::Tag::Eps1:
        return DyadicFunction(1, {0.0, sqrt2});
    case HaarIndex::Tag::Wordic:
        break;
    }
    const Word w = idx.word;
    DyadicFunction e(w.length() + 1);
    const double scale = pow_sqrt2(w.length());
    e[word_index(w.append(1))] = scale;
    e[word_index(w.append(0))] = -scale;
    return e;
}

inline DyadicFunction haar_function(Word w) { return haar_function(HaarIndex::of(w)); }

/// Coefficients over the orthonormal basis {e_eps^0, e_eps^1} ∪ {e_w}.
struct HaarCoeffs
{
    double eps0 = 0.0;
    double eps1 = 0.0;
    std::map<Word, double> coeffs;

    double at(Word w) const
    {
        auto it = coeffs.find(w);
        return it == coeffs.end() ? 0.0 : it->second;
    }

    double squared_sum() const
    {
        double s = eps0 * eps0 + eps1 * eps1;
        for (const auto& [w, b] : coeffs)
        {
            s += b * b;
        }
        return s;
    }

    /// Smallest depth at which the expansion is exactly representable.
    int depth() const
    {
        int d = (eps0 != 0.0 || eps1 != 0.0) ? 1 : 0;
        for (const auto& [w, b] : coeffs)
        {
            if (b != 0.0)
            {
                d = std::max(d, w.length() + 1);
            }
        }
        return d;
    }
};

///
/// Haar analysis by the averaging pyramid. The constant mode is carried by
/// the two eps coefficients through 1 = 2^{-1/2}(e_eps^1 - e_eps^0).
///
inline HaarCoeffs to_haar(const DyadicFunction& f)
{
    HaarCoeffs h;
    const int d = f.depth();
    // level[l] holds the cylinder averages at depth l
    std::vector<std::vector<double>> level(static_cast<std::size_t>(d) + 1);
    level[static_cast<std::size_t>(d)].assign(f.values().begin(), f.values().end());
    for (int l = d - 1; l >= 0; --l)
    {
        const auto& fine = level[static_cast<std::size_t>(l) + 1];
        auto& coarse = level[static_cast<std::size_t>(l)];
        coarse.resize(std::size_t{1} << l);
        for (std::size_t i = 0; i < coarse.size(); ++i)
        {
            coarse[i] = 0.5 * (fine[2 * i] + fine[2 * i + 1]);
        }
    }
    if (d == 0)
    {
        h.eps0 = -f[0] * inv_sqrt2;
        h.eps1 = f[0] * inv_sqrt2;
        return h;
    }
    h.eps0 = -level[1][0] * inv_sqrt2;
    h.eps1 = level[1][1] * inv_sqrt2;
    for (int l = 1; l < d; ++l)
    {
        const auto& fine = level[static_cast<std::size_t>(l) + 1];
        const double scale = pow_sqrt2(-l) * 0.5;
        for (std::size_t i = 0; i < (std::size_t{1} << l); ++i)
        {
            const double b = scale * (fine[2 * i + 1] - fine[2 * i]);
            if (b != 0.0)
            {
                h.coeffs.emplace(Word(l, static_cast<std::uint32_t>(i)), b);
            }
        }
    }
    return h;
}

inline DyadicFunction from_haar(const HaarCoeffs& h)
{
    DyadicFunction f(h.depth());
    f += h.eps0 * haar_function(HaarIndex::eps0());
    f += h.eps1 * haar_function(HaarIndex::eps1());
    for (const auto& [w, b] : h.coeffs)
    {
        if (w.is_empty())
        {
            throw std::invalid_argument("Haar coefficient keyed by the empty word");
        }
        if (b != 0.0)
        {
            f += b * haar_function(w);
        }
    }
    return refine(f, std::max(f.depth(), h.depth()));
}

// --------------------------------------------------------------------------
// Ladder states
// --------------------------------------------------------------------------

inline constexpr int max_ladder_level = 20;

/// |n> = 2^{-n/2} sum_{l(w)=n} e_w for n >= 1 and |0> = 2^{-1/2}(e_eps^0 + e_eps^1).
inline DyadicFunction state_n(int n)
{
    if (n < 0 || n > max_ladder_level)
    {
        throw std::invalid_argument("ladder level out of range: " + std::to_string(n));
    }
    if (n == 0)
    {
        return DyadicFunction(1, {-1.0, 1.0});
    }
    // every e_w with l(w) = n contributes 2^{n/2}(chi_[w1] - chi_[w0]); the
    // prefactor cancels the scale, leaving the parity pattern of the last symbol
    DyadicFunction f(n + 1);
    for (std::size_t i = 0; i < f.size(); ++i)
    {
        f[i] = (i & 1u) ? 1.0 : -1.0;
    }
    return f;
}

///
/// |n,w> = 2^{-(n+1)/2}(sum_{l(u)=n} e_{u0w} - sum_{l(u)=n} e_{u1w}); a missing
/// word means the star index, |n,*> = |n>.
///
inline DyadicFunction state_nw(int n, std::optional<Word> w)
{
    if (!w)
    {
        return state_n(n);
    }
    if (n < 0 || n + w->length() + 2 > max_length)
    {
        throw std::invalid_argument("ladder state exceeds the depth cap");
    }
    const int d = n + w->length() + 2;
    DyadicFunction f(d);
    const double coeff = pow_sqrt2(-(n + 1));
    for (std::uint32_t u = 0; u < (1u << n); ++u)
    {
        const Word uw0 = Word(n, u).concat(Word(1, 0)).concat(*w);
        const Word uw1 = Word(n, u).concat(Word(1, 1)).concat(*w);
        f += coeff * haar_function(uw0);
        f -= coeff * haar_function(uw1);
    }
    return f;
}

// --------------------------------------------------------------------------
// Random functions
// --------------------------------------------------------------------------

enum class Constraint
{
    None,
    UnitNorm,
    KernelOfL,
    FirstCoordinateFree
};

/// Deterministic random function (std::mt19937_64, uniform values in [-1,1]).
inline DyadicFunction random_function(std::uint64_t seed, int depth, Constraint constraint = Constraint::None)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto draw = [&](int d) {
        DyadicFunction f(d);
        for (double& v : f.values())
        {
            v = dist(gen);
        }
        return f;
    };
    switch (constraint)
    {
    case Constraint::None:
        return draw(depth);
    case Constraint::UnitNorm:
        return normalized(draw(depth));
    case Constraint::KernelOfL:
    {
        if (depth < 1)
        {
            throw std::invalid_argument("kernel of L is trivial at depth 0");
        }
        const DyadicFunction h = draw(depth - 1);
        DyadicFunction g(depth);
        const std::size_t half = h.size();
        for (std::size_t i = 0; i < half; ++i)
        {
            g[i] = h[i];
            g[i + half] = -h[i];
        }
        return g;
    }
    case Constraint::FirstCoordinateFree:
    {
        if (depth < 1)
        {
            return draw(0);
        }
        const DyadicFunction h = draw(depth - 1);
        DyadicFunction g(depth);
        const std::size_t half = h.size();
        for (std::size_t i = 0; i < half; ++i)
        {
            g[i] = h[i];
            g[i + half] = h[i];
        }
        return g;
    }
    }
    throw std::invalid_argument("unknown constraint");
}

}  // namespace rkd

#endif
