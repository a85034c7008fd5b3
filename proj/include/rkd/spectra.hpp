#ifndef RKD_SPECTRA_HPP
#define RKD_SPECTRA_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkd/transfer.hpp"

namespace rkd
{

/// Anything with a shape and the two matrix-vector products.
template <class M>
concept LinearMapLike = requires(const M& m, const Eigen::VectorXd& x) {
    { m.rows() } -> std::convertible_to<Eigen::Index>;
    { m.cols() } -> std::convertible_to<Eigen::Index>;
    { m.multiply(x) } -> std::convertible_to<Eigen::VectorXd>;
    { m.multiply_transpose(x) } -> std::convertible_to<Eigen::VectorXd>;
};

/// Non-owning adapter so a bare Eigen matrix can be passed to the estimators.
struct MatrixView
{
    const Eigen::MatrixXd& m;

    Eigen::Index rows() const { return m.rows(); }
    Eigen::Index cols() const { return m.cols(); }
    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const { return m * x; }
    Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& y) const { return m.transpose() * y; }
};

enum class NormMethod
{
    Power,
    Dense
};

inline const char* method_name(NormMethod m) { return m == NormMethod::Power ? "power" : "dense"; }

struct NormEstimate
{
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    NormMethod method = NormMethod::Power;
};

struct NormOptions
{
    double tol = 1e-12;
    int max_iter = 20000;
    /// Matrices whose smaller side is at most this are solved densely.
    Eigen::Index dense_max_dim = 1024;
    /// Largest smaller side for which the dense fallback is attempted.
    Eigen::Index dense_fallback_cap = 2048;
    std::uint64_t restart_seed = 0x9e3779b97f4a7c15ULL;
};

template <LinearMapLike M>
Eigen::MatrixXd materialize(const M& map)
{
    if constexpr (requires { map.assemble(); })
    {
        return map.assemble().matrix;
    }
    else if constexpr (requires { map.matrix; })
    {
        return map.matrix;
    }
    else
    {
        Eigen::MatrixXd out(map.rows(), map.cols());
        Eigen::VectorXd e = Eigen::VectorXd::Zero(map.cols());
        for (Eigen::Index j = 0; j < map.cols(); ++j)
        {
            e(j) = 1.0;
            out.col(j) = map.multiply(e);
            e(j) = 0.0;
        }
        return out;
    }
}

inline void require_finite(const Eigen::MatrixXd& m)
{
    if (!m.allFinite())
    {
        throw std::invalid_argument("operator_norm: matrix has non-finite entries");
    }
}

/// Largest singular value from the eigenvalues of the smaller Gram matrix.
inline NormEstimate dense_norm(const Eigen::MatrixXd& m)
{
    require_finite(m);
    NormEstimate est{0.0, 0, true, NormMethod::Dense};
    if (m.size() == 0)
    {
        return est;
    }
    const Eigen::MatrixXd gram = m.rows() >= m.cols() ? Eigen::MatrixXd(m.transpose() * m)
                                                      : Eigen::MatrixXd(m * m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
    {
        throw std::runtime_error("dense eigensolve failed");
    }
    const double lambda = std::max(0.0, solver.eigenvalues().maxCoeff());
    est.value = std::sqrt(lambda);
    // polish: the Gram route loses relative accuracy only for tiny singular values
    if (est.value > 0.0 && std::min(m.rows(), m.cols()) <= 256)
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        est.value = svd.singularValues()(0);
    }
    return est;
}

template <LinearMapLike M>
NormEstimate dense_norm(const M& map)
{
    return dense_norm(materialize(map));
}

namespace detail
{

template <LinearMapLike M>
NormEstimate power_run(const M& map, Eigen::VectorXd v, const NormOptions& opt, int budget)
{
    NormEstimate est{0.0, 0, false, NormMethod::Power};
    double lambda_prev = -1.0;
    for (int it = 1; it <= budget; ++it)
    {
        const double vn = v.norm();
        if (vn == 0.0)
        {
            est.iterations = it;
            return est;
        }
        v /= vn;
        const Eigen::VectorXd av = map.multiply(v);
        const double lambda = av.squaredNorm();
        const Eigen::VectorXd w = map.multiply_transpose(av);
        est.iterations = it;
        est.value = std::sqrt(lambda);
        if (lambda == 0.0)
        {
            // v is in the kernel; nothing more can be learned from this start
            return est;
        }
        const double residual = (w - lambda * v).norm();
        const bool stable = lambda_prev >= 0.0 && std::abs(lambda - lambda_prev) <= opt.tol * lambda;
        if (stable && residual <= 1e-6 * lambda)
        {
            est.converged = true;
            return est;
        }
        lambda_prev = lambda;
        v = w;
    }
    return est;
}

}  // namespace detail

/// Deterministic start: normalized all-ones plus a fixed seeded perturbation,
/// so that starts orthogonal to the top singular space are avoided.
inline Eigen::VectorXd start_vector(Eigen::Index n)
{
    std::mt19937_64 gen(0x5eedULL);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        v(i) = 1.0 + dist(gen);
    }
    return v.normalized();
}

/// Power iteration on A^T A with one seeded random restart on stagnation.
template <LinearMapLike M>
NormEstimate power_norm(const M& map, const NormOptions& opt = {})
{
    if (map.rows() == 0 || map.cols() == 0)
    {
        return {0.0, 0, true, NormMethod::Power};
    }
    const int first_budget = std::max(1, opt.max_iter / 2);
    NormEstimate est = detail::power_run(map, start_vector(map.cols()), opt, first_budget);
    if (est.converged)
    {
        return est;
    }
    // stagnation, or a start that fell in the kernel: one seeded random restart
    std::mt19937_64 gen(opt.restart_seed);
    std::normal_distribution<double> dist;
    Eigen::VectorXd v(map.cols());
    for (auto& x : v)
    {
        x = dist(gen);
    }
    NormEstimate second = detail::power_run(map, v, opt, std::max(1, opt.max_iter - first_budget));
    second.iterations += est.iterations;
    if (second.value == 0.0 && est.value == 0.0)
    {
        second.converged = true;
    }
    else if (!second.converged)
    {
        second.value = std::max(second.value, est.value);
    }
    return second;
}

/// Largest singular value. Small maps are solved densely; larger ones by
/// power iteration, falling back to dense when that does not converge.
template <LinearMapLike M>
NormEstimate operator_norm(const M& map, const NormOptions& opt = {})
{
    const Eigen::Index small = std::min(map.rows(), map.cols());
    if (small <= opt.dense_max_dim)
    {
        return dense_norm(map);
    }
    NormEstimate est = power_norm(map, opt);
    if (!est.converged && small <= opt.dense_fallback_cap)
    {
        NormEstimate dense = dense_norm(map);
        dense.iterations = est.iterations;
        return dense;
    }
    return est;
}

inline NormEstimate operator_norm(const Eigen::MatrixXd& m, const NormOptions& opt = {})
{
    require_finite(m);
    return operator_norm(MatrixView{m}, opt);
}

// --------------------------------------------------------------------------
// Depth sweeps
// --------------------------------------------------------------------------

inline constexpr double plateau_tolerance = 1e-10;

struct SweepRow
{
    int depth = 0;
    NormEstimate estimate;
    bool plateau = false;
};

/// Evaluates fn at each depth; a row is flagged as a plateau when its value
/// is within 1e-10 of the previous row's.
inline std::vector<SweepRow> depth_sweep(const std::function<NormEstimate(int)>& fn, const std::vector<int>& depths)
{
    std::vector<SweepRow> rows;
    rows.reserve(depths.size());
    for (int d : depths)
    {
        if (d < 0 || d > max_length)
        {
            throw std::invalid_argument("depth_sweep: depth out of range");
        }
        SweepRow row{d, fn(d), false};
        if (!rows.empty())
        {
            row.plateau = std::abs(row.estimate.value - rows.back().estimate.value) <= plateau_tolerance;
        }
        rows.push_back(row);
    }
    return rows;
}

inline bool sweep_nondecreasing(const std::vector<SweepRow>& rows, double tol = plateau_tolerance)
{
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        if (rows[i].estimate.value < rows[i - 1].estimate.value - tol)
        {
            return false;
        }
    }
    return true;
}

inline std::vector<int> depth_range(int first, int last)
{
    if (first > last)
    {
        throw std::invalid_argument("empty depth range");
    }
    std::vector<int> out;
    for (int d = first; d <= last; ++d)
    {
        out.push_back(d);
    }
    return out;
}

}  // namespace rkd

#endif
