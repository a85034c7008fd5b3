#ifndef RKD_TRANSFER_HPP
#define RKD_TRANSFER_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rkd/dyadic.hpp"

namespace rkd
{

/// Ruelle operator for the constant Jacobian 1/2: (Lg)(x) = (g(0x) + g(1x))/2.
/// Constants (depth 0) are fixed.
inline DyadicFunction ruelle_apply(const DyadicFunction& g)
{
    if (g.depth() == 0)
    {
        return g;
    }
    DyadicFunction out(g.depth() - 1);
    const std::size_t half = out.size();
    for (std::size_t i = 0; i < half; ++i)
    {
        out[i] = 0.5 * (g[i] + g[i + half]);
    }
    return out;
}

/// Koopman operator (Kg)(x) = g(sigma x).
inline DyadicFunction koopman_apply(const DyadicFunction& g)
{
    if (g.depth() + 1 > max_length)
    {
        throw std::invalid_argument("koopman_apply: depth cap exceeded");
    }
    DyadicFunction out(g.depth() + 1);
    const std::size_t half = g.size();
    for (std::size_t i = 0; i < half; ++i)
    {
        out[i] = g[i];
        out[i + half] = g[i];
    }
    return out;
}

/// K^n L^n f: conditional expectation given the coordinates after the n-th.
inline DyadicFunction cond_expectation(int n, const DyadicFunction& f)
{
    if (n < 1)
    {
        throw std::invalid_argument("cond_expectation requires n >= 1");
    }
    DyadicFunction g = f;
    for (int k = 0; k < n; ++k)
    {
        g = ruelle_apply(g);
    }
    for (int k = 0; k < n; ++k)
    {
        g = koopman_apply(g);
    }
    return refine(g, std::max(g.depth(), f.depth()));
}

/// P_ker L f = f - K L f.
inline DyadicFunction kernel_projection(const DyadicFunction& f)
{
    return f - koopman_apply(ruelle_apply(f));
}

inline DyadicFunction mult_apply(const DyadicFunction& f, const DyadicFunction& g) { return pointwise_mul(f, g); }

inline constexpr double unit_tolerance = 1e-9;

inline void require_unit(const DyadicFunction& psi, const char* what)
{
    if (std::abs(norm(psi) - 1.0) > unit_tolerance)
    {
        throw std::invalid_argument(std::string(what) + ": vector is not unit norm (|psi| = " +
                                    std::to_string(norm(psi)) + ")");
    }
}

/// psi-hat(phi) = <phi, psi> psi.
inline DyadicFunction projection_apply(const DyadicFunction& psi, const DyadicFunction& phi)
{
    require_unit(psi, "projection_apply");
    DyadicFunction out = inner(phi, psi) * psi;
    return refine(out, std::max(out.depth(), phi.depth()));
}

/// (<Kf, g>, <f, Lg>).
inline std::pair<double, double> adjoint_check(const DyadicFunction& f, const DyadicFunction& g)
{
    return {inner(koopman_apply(f), g), inner(f, ruelle_apply(g))};
}

// --------------------------------------------------------------------------
// Operator expressions
// --------------------------------------------------------------------------

///
/// Immutable expression tree for a bounded operator on L^2. Applying it to a
/// depth-d function yields a function of depth out_depth(d); operators that
/// leave V_d always enlarge the codomain and never compress.
///
class OperatorSpec
{
public:
    enum class Kind
    {
        Identity,
        Ruelle,
        Koopman,
        Mult,
        Proj,
        CondExp,
        KernelProj,
        Compose,
        Sum,
        Adjoint
    };

    static OperatorSpec identity() { return OperatorSpec(make(Kind::Identity)); }
    static OperatorSpec ruelle() { return OperatorSpec(make(Kind::Ruelle)); }
    static OperatorSpec koopman() { return OperatorSpec(make(Kind::Koopman)); }

    static OperatorSpec mult(DyadicFunction f)
    {
        auto n = make(Kind::Mult);
        n->function = std::move(f);
        return OperatorSpec(std::move(n));
    }

    static OperatorSpec proj(DyadicFunction psi)
    {
        require_unit(psi, "OperatorSpec::proj");
        auto n = make(Kind::Proj);
        n->function = std::move(psi);
        return OperatorSpec(std::move(n));
    }

    static OperatorSpec haar_proj(Word w) { return proj(haar_function(w)); }

    static OperatorSpec cond_exp(int n)
    {
        if (n < 1)
        {
            throw std::invalid_argument("CondExp requires n >= 1");
        }
        auto node = make(Kind::CondExp);
        node->order = n;
        return OperatorSpec(std::move(node));
    }

    static OperatorSpec kernel_proj() { return OperatorSpec(make(Kind::KernelProj)); }

    /// compose({A, B, C}) = A B C, so C acts first.
    static OperatorSpec compose(std::vector<OperatorSpec> ops)
    {
        auto n = make(Kind::Compose);
        n->children = std::move(ops);
        return OperatorSpec(std::move(n));
    }

    static OperatorSpec sum(std::vector<OperatorSpec> ops, std::vector<double> weights)
    {
        if (ops.size() != weights.size())
        {
            throw std::invalid_argument("Sum: operator and weight counts differ");
        }
        auto n = make(Kind::Sum);
        n->children = std::move(ops);
        n->weights = std::move(weights);
        return OperatorSpec(std::move(n));
    }

    static OperatorSpec zero() { return sum({}, {}); }

    static OperatorSpec scaled(double s, OperatorSpec a) { return sum({std::move(a)}, {s}); }

    static OperatorSpec adjoint(const OperatorSpec& a)
    {
        auto n = make(Kind::Adjoint);
        n->children = {a};
        n->resolved = std::make_shared<OperatorSpec>(a.structural_adjoint());
        return OperatorSpec(std::move(n));
    }

    Kind kind() const { return node_->kind; }
    const DyadicFunction& function() const { return node_->function; }
    int order() const { return node_->order; }
    const std::vector<OperatorSpec>& children() const { return node_->children; }
    const std::vector<double>& weights() const { return node_->weights; }

    int out_depth(int d) const
    {
        switch (kind())
        {
        case Kind::Identity:
            return d;
        case Kind::Ruelle:
            return std::max(d - 1, 0);
        case Kind::Koopman:
            return d + 1;
        case Kind::Mult:
        case Kind::Proj:
            return std::max(d, function().depth());
        case Kind::CondExp:
            return std::max(d, order());
        case Kind::KernelProj:
            return std::max(d, 1);
        case Kind::Compose:
        {
            int e = d;
            for (auto it = children().rbegin(); it != children().rend(); ++it)
            {
                e = it->out_depth(e);
            }
            return e;
        }
        case Kind::Sum:
        {
            int e = children().empty() ? d : 0;
            for (const auto& c : children())
            {
                e = std::max(e, c.out_depth(d));
            }
            return e;
        }
        case Kind::Adjoint:
            return node_->resolved->out_depth(d);
        }
        throw std::logic_error("unknown operator kind");
    }

    /// Applies the operator; the result has depth exactly out_depth(f.depth()).
    DyadicFunction apply(const DyadicFunction& f) const
    {
        const int e = out_depth(f.depth());
        if (e > max_length)
        {
            throw std::invalid_argument("operator application exceeds the depth cap");
        }
        return refine(apply_raw(f), e);
    }

    /// Self-adjoint operators rewrite to themselves; K and L swap; products reverse.
    OperatorSpec structural_adjoint() const
    {
        switch (kind())
        {
        case Kind::Identity:
        case Kind::Mult:
        case Kind::Proj:
        case Kind::CondExp:
        case Kind::KernelProj:
            return *this;
        case Kind::Ruelle:
            return koopman();
        case Kind::Koopman:
            return ruelle();
        case Kind::Compose:
        {
            std::vector<OperatorSpec> rev;
            for (auto it = children().rbegin(); it != children().rend(); ++it)
            {
                rev.push_back(it->structural_adjoint());
            }
            return compose(std::move(rev));
        }
        case Kind::Sum:
        {
            std::vector<OperatorSpec> adj;
            for (const auto& c : children())
            {
                adj.push_back(c.structural_adjoint());
            }
            return sum(std::move(adj), weights());
        }
        case Kind::Adjoint:
            return children().front();
        }
        throw std::logic_error("unknown operator kind");
    }

    std::string describe() const
    {
        std::ostringstream os;
        switch (kind())
        {
        case Kind::Identity:
            os << "I";
            break;
        case Kind::Ruelle:
            os << "L";
            break;
        case Kind::Koopman:
            os << "K";
            break;
        case Kind::Mult:
            os << "M[f depth " << function().depth() << "]";
            break;
        case Kind::Proj:
            os << "Proj[psi depth " << function().depth() << "]";
            break;
        case Kind::CondExp:
            os << "K^" << order() << " L^" << order();
            break;
        case Kind::KernelProj:
            os << "P_kerL";
            break;
        case Kind::Compose:
            if (children().empty())
            {
                os << "I";
            }
            for (std::size_t i = 0; i < children().size(); ++i)
            {
                os << (i ? " " : "") << "(" << children()[i].describe() << ")";
            }
            break;
        case Kind::Sum:
            if (children().empty())
            {
                os << "0";
            }
            for (std::size_t i = 0; i < children().size(); ++i)
            {
                os << (i ? " + " : "") << weights()[i] << "*(" << children()[i].describe() << ")";
            }
            break;
        case Kind::Adjoint:
            os << "adj(" << children().front().describe() << ")";
            break;
        }
        return os.str();
    }

private:
    struct Node
    {
        Kind kind = Kind::Identity;
        DyadicFunction function;
        int order = 0;
        std::vector<OperatorSpec> children;
        std::vector<double> weights;
        std::shared_ptr<const OperatorSpec> resolved;
    };

    static std::shared_ptr<Node> make(Kind k)
    {
        auto n = std::make_shared<Node>();
        n->kind = k;
        return n;
    }

    explicit OperatorSpec(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    DyadicFunction apply_raw(const DyadicFunction& f) const
    {
        switch (kind())
        {
        case Kind::Identity:
            return f;
        case Kind::Ruelle:
            return ruelle_apply(f);
        case Kind::Koopman:
            return koopman_apply(f);
        case Kind::Mult:
            return mult_apply(function(), f);
        case Kind::Proj:
            return inner(f, function()) * function();
        case Kind::CondExp:
            return cond_expectation(order(), f);
        case Kind::KernelProj:
            return kernel_projection(f);
        case Kind::Compose:
        {
            DyadicFunction g = f;
            for (auto it = children().rbegin(); it != children().rend(); ++it)
            {
                g = it->apply(g);
            }
            return g;
        }
        case Kind::Sum:
        {
            DyadicFunction acc(out_depth(f.depth()));
            for (std::size_t i = 0; i < children().size(); ++i)
            {
                acc += weights()[i] * children()[i].apply(f);
            }
            return acc;
        }
        case Kind::Adjoint:
            return node_->resolved->apply(f);
        }
        throw std::logic_error("unknown operator kind");
    }

    std::shared_ptr<const Node> node_;
};

/// KA - AK.
inline OperatorSpec commutator_with_K(const OperatorSpec& a)
{
    return OperatorSpec::sum({OperatorSpec::compose({OperatorSpec::koopman(), a}),
                              OperatorSpec::compose({a, OperatorSpec::koopman()})},
                             {1.0, -1.0});
}

/// LA - AL.
inline OperatorSpec commutator_with_L(const OperatorSpec& a)
{
    return OperatorSpec::sum({OperatorSpec::compose({OperatorSpec::ruelle(), a}),
                              OperatorSpec::compose({a, OperatorSpec::ruelle()})},
                             {1.0, -1.0});
}

/// Adjoint of the restriction V_d -> V_{out_depth(d)}: coarsening the
/// structural adjoint back to depth d.
inline DyadicFunction restricted_adjoint_apply(const OperatorSpec& op, const DyadicFunction& g, int in_depth)
{
    const int e = op.out_depth(in_depth);
    const DyadicFunction y = g.depth() < e ? refine(g, e) : g;
    if (y.depth() != e)
    {
        throw std::invalid_argument("restricted_adjoint_apply: argument depth does not match the codomain");
    }
    return coarsen(op.structural_adjoint().apply(y), in_depth);
}

// --------------------------------------------------------------------------
// Assembly in orthonormal coordinates
// --------------------------------------------------------------------------

/// Coordinates of f in the orthonormal basis 2^{d/2} chi_[w], l(w) = d.
inline Eigen::VectorXd to_coords(const DyadicFunction& f)
{
    Eigen::VectorXd c(static_cast<Eigen::Index>(f.size()));
    const double s = pow_sqrt2(-f.depth());
    for (std::size_t i = 0; i < f.size(); ++i)
    {
        c(static_cast<Eigen::Index>(i)) = s * f[i];
    }
    return c;
}

inline DyadicFunction from_coords(const Eigen::VectorXd& c, int depth)
{
    if (static_cast<std::size_t>(c.size()) != (std::size_t{1} << depth))
    {
        throw std::invalid_argument("from_coords: coordinate count does not match depth");
    }
    DyadicFunction f(depth);
    const double s = pow_sqrt2(depth);
    for (std::size_t i = 0; i < f.size(); ++i)
    {
        f[i] = s * c(static_cast<Eigen::Index>(i));
    }
    return f;
}

struct AssembledMap
{
    int in_depth = 0;
    int out_depth = 0;
    Eigen::MatrixXd matrix;

    Eigen::Index rows() const { return matrix.rows(); }
    Eigen::Index cols() const { return matrix.cols(); }
    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const { return matrix * x; }
    Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& y) const { return matrix.transpose() * y; }

    DyadicFunction apply(const DyadicFunction& f) const
    {
        return from_coords(matrix * to_coords(refine(f, in_depth)), out_depth);
    }
};

/// Worker count for column-parallel assembly, from RKD_THREADS (default 1).
inline unsigned thread_count()
{
    if (const char* env = std::getenv("RKD_THREADS"))
    {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0)
        {
            return static_cast<unsigned>(n);
        }
    }
    return 1;
}

inline constexpr int assemble_depth_cap = 12;

inline AssembledMap assemble(const OperatorSpec& op, int in_depth)
{
    if (in_depth < 0 || in_depth > assemble_depth_cap)
    {
        throw std::invalid_argument("assemble: input depth outside [0, " + std::to_string(assemble_depth_cap) + "]");
    }
    const int e = op.out_depth(in_depth);
    if (e > assemble_depth_cap + 1)
    {
        throw std::invalid_argument("assemble: output depth exceeds cap");
    }
    AssembledMap m{in_depth, e, Eigen::MatrixXd::Zero(Eigen::Index{1} << e, Eigen::Index{1} << in_depth)};
    const double basis_value = pow_sqrt2(in_depth);
    auto fill = [&](Eigen::Index begin, Eigen::Index end) {
        DyadicFunction basis(in_depth);
        for (Eigen::Index j = begin; j < end; ++j)
        {
            basis[static_cast<std::size_t>(j)] = basis_value;
            m.matrix.col(j) = to_coords(op.apply(basis));
            basis[static_cast<std::size_t>(j)] = 0.0;
        }
    };
    const Eigen::Index n = m.matrix.cols();
    const unsigned workers = std::min<unsigned>(thread_count(), static_cast<unsigned>(n));
    if (workers <= 1)
    {
        fill(0, n);
        return m;
    }
    std::vector<std::jthread> pool;
    const Eigen::Index chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w)
    {
        const Eigen::Index b = std::min<Eigen::Index>(n, w * chunk);
        const Eigen::Index e2 = std::min<Eigen::Index>(n, b + chunk);
        pool.emplace_back(fill, b, e2);
    }
    return m;
}

///
/// Matrix-free view of an operator restricted to V_d, in orthonormal
/// coordinates. The transpose goes through restricted_adjoint_apply.
///
class OperatorMap
{
public:
    OperatorMap(OperatorSpec op, int in_depth) : op_(std::move(op)), in_depth_(in_depth), out_depth_(op_.out_depth(in_depth))
    {
        if (out_depth_ > max_length)
        {
            throw std::invalid_argument("OperatorMap: output depth exceeds cap");
        }
    }

    Eigen::Index rows() const { return Eigen::Index{1} << out_depth_; }
    Eigen::Index cols() const { return Eigen::Index{1} << in_depth_; }
    int in_depth() const { return in_depth_; }
    int out_depth() const { return out_depth_; }

    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const { return to_coords(op_.apply(from_coords(x, in_depth_))); }

    Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& y) const
    {
        return to_coords(restricted_adjoint_apply(op_, from_coords(y, out_depth_), in_depth_));
    }

    AssembledMap assemble() const { return rkd::assemble(op_, in_depth_); }

private:
    OperatorSpec op_;
    int in_depth_;
    int out_depth_;
};

}  // namespace rkd

#endif
