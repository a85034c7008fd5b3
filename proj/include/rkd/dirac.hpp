#ifndef RKD_DIRAC_HPP
#define RKD_DIRAC_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rkd/spectra.hpp"
#include "rkd/transfer.hpp"

namespace rkd
{

/// Off-diagonal blocks of [D, pi(A)] for D = [[0, K], [L, 0]] and pi(A) = diag(A, A).
struct BlockCommutator
{
    OperatorSpec upper;
    OperatorSpec lower;
    OperatorSpec source;
};

inline BlockCommutator dirac_commutator(const OperatorSpec& a)
{
    return {commutator_with_K(a), commutator_with_L(a), a};
}

struct BlockNorm
{
    double value = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    int depth = 0;
    NormEstimate upper_estimate;
    NormEstimate lower_estimate;

    bool converged() const { return upper_estimate.converged && lower_estimate.converged; }
};

/// ||[D, pi(A)]|| on V_d as the larger of the two block norms.
inline BlockNorm block_norm(const BlockCommutator& b, int d, const NormOptions& opt = {})
{
    BlockNorm out;
    out.depth = d;
    out.upper_estimate = operator_norm(OperatorMap(b.upper, d), opt);
    out.lower_estimate = operator_norm(OperatorMap(b.lower, d), opt);
    out.upper = out.upper_estimate.value;
    out.lower = out.lower_estimate.value;
    out.value = std::max(out.upper, out.lower);
    return out;
}

inline BlockNorm commutator_norm(const OperatorSpec& a, int d, const NormOptions& opt = {})
{
    return block_norm(dirac_commutator(a), d, opt);
}

/// D on V_d x V_d as a dense matrix, (x, y) -> (K y, L x).
inline Eigen::MatrixXd dirac_matrix(int d)
{
    const AssembledMap k = assemble(OperatorSpec::koopman(), d);
    const AssembledMap l = assemble(OperatorSpec::ruelle(), d);
    const Eigen::Index n = Eigen::Index{1} << d;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k.rows() + l.rows(), 2 * n);
    m.block(0, n, k.rows(), n) = k.matrix;
    m.block(k.rows(), 0, l.rows(), n) = l.matrix;
    return m;
}

/// Symmetry of A on V_e, e = out_depth(d), where A must map V_e into itself.
inline bool is_self_adjoint(const OperatorSpec& a, int d, double tol = 1e-10)
{
    const int e = a.out_depth(d);
    if (a.out_depth(e) != e)
    {
        return false;
    }
    const AssembledMap m = assemble(a, e);
    return (m.matrix - m.matrix.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.matrix.cwiseAbs().maxCoeff());
}

/// (||KA - AK||, ||LA - AL||) on V_d for self-adjoint A.
inline std::pair<double, double> self_adjoint_block_equality(const OperatorSpec& a, int d, const NormOptions& opt = {})
{
    if (!is_self_adjoint(a, d))
    {
        throw std::invalid_argument("self_adjoint_block_equality: operator is not self-adjoint (" + a.describe() + ")");
    }
    const BlockNorm b = commutator_norm(a, d, opt);
    return {b.upper, b.lower};
}

///
/// Depth at which the commutator norm of A is attained:
///   projection onto psi of depth m: m + 1 (covers e_w -> l(w) + 2)
///   multiplication by f of depth m: m + 1
///   K^n L^n: n + 2;  P_ker L: 3
/// Composites take the maximum over their parts.
///
inline int attainment_depth(const OperatorSpec& a)
{
    using Kind = OperatorSpec::Kind;
    switch (a.kind())
    {
    case Kind::Identity:
    case Kind::Ruelle:
    case Kind::Koopman:
        return 1;
    case Kind::Mult:
    case Kind::Proj:
        return a.function().depth() + 1;
    case Kind::CondExp:
        return a.order() + 2;
    case Kind::KernelProj:
        return 3;
    case Kind::Compose:
    case Kind::Sum:
    case Kind::Adjoint:
    {
        int d = 1;
        for (const auto& c : a.children())
        {
            d = std::max(d, attainment_depth(c));
        }
        return d;
    }
    }
    return 1;
}

inline constexpr double certify_slack = 1e-9;

struct Certificate
{
    bool certified = false;
    double value = 0.0;
    int depth = 0;
};

/// Evaluates the commutator norm at max(d, attainment depth) and compares with threshold.
inline Certificate lipschitz_certify(const OperatorSpec& a, int d, double threshold = 1.0, const NormOptions& opt = {})
{
    const int depth = std::max(d, attainment_depth(a));
    const BlockNorm b = commutator_norm(a, depth, opt);
    return {b.value <= threshold + certify_slack, b.value, depth};
}

class VectorState
{
public:
    explicit VectorState(DyadicFunction psi) : psi_(std::move(psi)) { require_unit(psi_, "VectorState"); }

    const DyadicFunction& psi() const { return psi_; }

    /// <A psi, psi>.
    double evaluate(const OperatorSpec& a) const { return inner(a.apply(psi_), psi_); }

private:
    DyadicFunction psi_;
};

class UncertifiedOperator : public std::invalid_argument
{
public:
    UncertifiedOperator(std::size_t index, std::string name, double value)
        : std::invalid_argument(message(index, name, value)), index_(index), name_(std::move(name)), value_(value)
    {
    }

    std::size_t index() const { return index_; }
    const std::string& name() const { return name_; }
    double value() const { return value_; }

private:
    static std::string message(std::size_t index, const std::string& name, double value)
    {
        std::ostringstream os;
        os.precision(12);
        os << "family member " << index << " (" << name << ") is not Lipschitz-certified: ||[D, pi(A)]|| = " << value;
        return os.str();
    }

    std::size_t index_;
    std::string name_;
    double value_;
};

struct ConnesBound
{
    double lower_bound = 0.0;
    std::optional<std::size_t> witness;
    std::vector<Certificate> certificates;
};

/// max_A |eta(A) - xi(A)| over a family whose members all certify at threshold 1.
inline ConnesBound connes_lower_bound(const VectorState& eta, const VectorState& xi, const std::vector<OperatorSpec>& family,
                                      int d = 1, const NormOptions& opt = {})
{
    ConnesBound out;
    for (std::size_t i = 0; i < family.size(); ++i)
    {
        const Certificate cert = lipschitz_certify(family[i], d, 1.0, opt);
        if (!cert.certified)
        {
            throw UncertifiedOperator(i, family[i].describe(), cert.value);
        }
        out.certificates.push_back(cert);
        const double gap = std::abs(eta.evaluate(family[i]) - xi.evaluate(family[i]));
        if (!out.witness || gap > out.lower_bound)
        {
            out.lower_bound = gap;
            out.witness = i;
        }
    }
    return out;
}

inline std::vector<SweepRow> commutator_sweep(const OperatorSpec& a, const std::vector<int>& depths, const NormOptions& opt = {})
{
    return depth_sweep(
        [&](int d) {
            const BlockNorm b = commutator_norm(a, d, opt);
            NormEstimate e = b.upper >= b.lower ? b.upper_estimate : b.lower_estimate;
            e.converged = b.converged();
            return e;
        },
        depths);
}

}  // namespace rkd

#endif
