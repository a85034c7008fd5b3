#ifndef RKD_BOSON_HPP
#define RKD_BOSON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rkd/dyadic.hpp"
#include "rkd/transfer.hpp"

namespace rkd
{

/// B = scale * L, B^dagger = scale * K, with f(n) = 2^{-n/2} and F(0) = 1/2, F(n >= 1) = 0.
struct LadderConfig
{
    double scale = inv_sqrt2;

    static double f(int n) { return pow_sqrt2(-n); }
    static double F(int n) { return n == 0 ? 0.5 : 0.0; }
};

/// B^dagger f = 2^{-1/2} K f.
inline DyadicFunction creation(const DyadicFunction& f) { return inv_sqrt2 * koopman_apply(f); }

/// B f = 2^{-1/2} L f.
inline DyadicFunction annihilation(const DyadicFunction& f) { return inv_sqrt2 * ruelle_apply(f); }

/// B^dagger B f = (1/2) K L f.
inline DyadicFunction number_apply(const DyadicFunction& f) { return creation(annihilation(f)); }

/// [B, B^dagger] f = (1/2)(f - K L f).
inline DyadicFunction ccr_defect(const DyadicFunction& f)
{
    return annihilation(creation(f)) - number_apply(f);
}

/// {f^, f^dagger} f with f^ = L / sqrt2: (1/2)(f + K L f).
inline DyadicFunction car_anticommutator(const DyadicFunction& f)
{
    return annihilation(creation(f)) + number_apply(f);
}

struct IdentityCheck
{
    std::string name;
    double residual = 0.0;
    bool pass = false;
};

inline std::string ladder_label(int n, const std::optional<Word>& w)
{
    return "|" + std::to_string(n) + "," + (w ? w->key() : std::string("*")) + ">";
}

///
/// Ladder identities along one Wold chain:
///   B^dagger |n,w> = 2^{-1/2} |n+1,w>
///   B |n,w> = 2^{-1/2} |n-1,w>   (n >= 1), B |0,w> = 0
///   (B^dagger)^n |0,w> = 2^{-n/2} |n,w>
///
inline std::vector<IdentityCheck> chain_shift_check(int n, const std::optional<Word>& w, double tol = 1e-12)
{
    std::vector<IdentityCheck> out;
    auto push = [&](std::string name, const DyadicFunction& lhs, const DyadicFunction& rhs) {
        const double r = sup_distance(lhs, rhs);
        out.push_back({std::move(name), r, r <= tol});
    };
    const DyadicFunction state = state_nw(n, w);
    const std::string here = ladder_label(n, w);
    push("creation " + here, creation(state), inv_sqrt2 * state_nw(n + 1, w));
    if (n >= 1)
    {
        push("annihilation " + here, annihilation(state), inv_sqrt2 * state_nw(n - 1, w));
    }
    else
    {
        push("annihilation " + here, annihilation(state), DyadicFunction(0));
    }
    DyadicFunction raised = state_nw(0, w);
    for (int k = 0; k < n; ++k)
    {
        raised = creation(raised);
    }
    push("creation power " + here, raised, pow_sqrt2(-n) * state);
    return out;
}

// --------------------------------------------------------------------------
// Wold decomposition of V_d
// --------------------------------------------------------------------------

struct LabeledVector
{
    std::string label;
    DyadicFunction vector;
};

/// {1} together with every |n> and |n,w> that lies in V_d, refined to depth d.
inline std::vector<LabeledVector> wold_family(int d)
{
    if (d < 0 || d > max_ladder_level)
    {
        throw std::invalid_argument("wold_family: depth out of range");
    }
    std::vector<LabeledVector> out;
    out.push_back({"1", DyadicFunction::constant(1.0, d)});
    for (int n = 0; n + 1 <= d; ++n)
    {
        out.push_back({ladder_label(n, std::nullopt), refine(state_n(n), d)});
    }
    for (int l = 0; l + 2 <= d; ++l)
    {
        for (std::uint32_t bits = 0; bits < (1u << l); ++bits)
        {
            const Word w(l, bits);
            for (int n = 0; n + l + 2 <= d; ++n)
            {
                out.push_back({ladder_label(n, w), refine(state_nw(n, w), d)});
            }
        }
    }
    return out;
}

/// Gram matrix in the L^2(mu) inner product.
inline Eigen::MatrixXd gram_matrix(const std::vector<LabeledVector>& family)
{
    const auto n = static_cast<Eigen::Index>(family.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        for (Eigen::Index j = i; j < n; ++j)
        {
            g(i, j) = g(j, i) = inner(family[static_cast<std::size_t>(i)].vector, family[static_cast<std::size_t>(j)].vector);
        }
    }
    return g;
}

}  // namespace rkd

#endif
