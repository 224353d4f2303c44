#include "kvn/kernels.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kvn/error.hpp"
#include "kvn/spectral_ops.hpp"

namespace kvn {

namespace {

constexpr double kPi = std::numbers::pi;

using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_nonzero_time(double t, const char* who) {
    if (t == 0.0 || !std::isfinite(t))
        throw Error(std::string(who) + ": t must be finite and nonzero");
}

// floor((j + n) / (2n)) for signed j.
long shell_of(long j, long n) {
    const long num = j + n;
    const long den = 2 * n;
    return num >= 0 ? num / den : -((-num + den - 1) / den);
}

struct Quadrature {
    Mat out;
    Mat tail;
};

// psi(q_i, Q_l) = C sum_d e^{i Q_l p_d / hbar} A[d, src(i, d)],
// A[d, r] = sum_k e^{-i Q_k p_d / hbar} f(r, k),  p_d = m d h / t,
// with h = dq / refine the spacing of the source rows. Output row i sits at source
// row i * refine. `source(i, d)` returns the source row or -1 (no source);
// `in_tail(i, d)` marks contributions from the outermost shells.
template <class Source, class Tail>
Quadrature kernel_quadrature(const GridSpec& g, std::span<const cplx> rows_in, std::size_t source_rows,
                             double t, std::size_t refine, long d_max, Source source, Tail in_tail) {
    const double m = g.units().mass;
    const double hbar = g.units().hbar;
    const double h = g.dq() / static_cast<double>(refine);
    const double p_max = kPi * hbar / g.d_dual();
    const std::size_t nc = g.cols();

    std::vector<long> ds;
    for (long d = -d_max; d <= d_max; ++d)
        if (std::abs(m * static_cast<double>(d) * h / t) <= p_max * (1.0 + 1e-12)) ds.push_back(d);
    const auto nd = static_cast<Eigen::Index>(ds.size());

    Mat e(nd, static_cast<Eigen::Index>(nc));
    for (Eigen::Index a = 0; a < nd; ++a) {
        const double pd = m * static_cast<double>(ds[a]) * h / t;
        for (std::size_t k = 0; k < nc; ++k)
            e(a, static_cast<Eigen::Index>(k)) = std::polar(1.0, -g.dual().at(k) * pd / hbar);
    }
    Eigen::Map<const Mat> f(rows_in.data(), static_cast<Eigen::Index>(source_rows),
                            static_cast<Eigen::Index>(nc));
    const Mat amp = e * f.transpose();

    const auto rows = static_cast<Eigen::Index>(g.rows());
    Mat b = Mat::Zero(rows, nd);
    Mat bt = Mat::Zero(rows, nd);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index a = 0; a < nd; ++a) {
            const long r = source(static_cast<long>(i), ds[a]);
            if (r < 0) continue;
            b(i, a) = amp(a, r);
            if (in_tail(static_cast<long>(i), ds[a])) bt(i, a) = amp(a, r);
        }
    }
    const double c = m / (2.0 * kPi * hbar * std::abs(t)) * h * g.d_dual();
    const Mat ec = e.conjugate();
    Quadrature qd{c * (b * ec), Mat()};
    if (bt.cwiseAbs().maxCoeff() > 0.0) qd.tail = c * (bt * ec);
    return qd;
}

// The sampled momenta p_d are spaced m h / |t|; coarser than the conjugate
// dp = 2 pi hbar / (N dQ) they alias in Q.
std::size_t refinement(const GridSpec& g, double t) {
    const double dp = 2.0 * kPi * g.units().hbar / (static_cast<double>(g.cols()) * g.d_dual());
    const double ratio = g.units().mass * g.dq() / (std::abs(t) * dp);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12))));
}

// Rows of a periodic array resampled at spacing dq / refine (exact Fourier shifts).
std::vector<cplx> refine_rows(const GridSpec& periodic, std::span<const cplx> a, std::size_t refine) {
    if (refine == 1) return {a.begin(), a.end()};
    const std::size_t rows = periodic.rows(), nc = periodic.cols();
    std::vector<cplx> out(rows * refine * nc);
    for (std::size_t s = 0; s < refine; ++s) {
        const double shift = -static_cast<double>(s) * periodic.dq() / static_cast<double>(refine);
        const auto part = ops::shift_q(periodic, a, [shift](std::size_t) { return shift; });
        for (std::size_t i = 0; i < rows; ++i)
            std::copy_n(part.begin() + static_cast<long>(i * nc), nc,
                        out.begin() + static_cast<long>((i * refine + s) * nc));
    }
    return out;
}

std::vector<cplx> to_vector(const Mat& m) { return {m.data(), m.data() + m.size()}; }

// The quadrature output is periodic in Q. Once the propagated state spreads to the
// ends of the dual axis it wraps around and the result is wrong, so refuse it.
void require_dual_edge_clear(const Mat& out, const char* who) {
    constexpr Eigen::Index kEdge = 4;
    constexpr double kTol = 1e-8;
    const Eigen::Index nc = out.cols();
    const double peak = out.cwiseAbs().maxCoeff();
    if (peak == 0.0 || nc <= 2 * kEdge) return;
    const double edge = std::max(out.leftCols(kEdge).cwiseAbs().maxCoeff(), out.rightCols(kEdge).cwiseAbs().maxCoeff());
    if (edge > kTol * peak) {
        std::ostringstream msg;
        msg << who << ": propagated state reaches the ends of the dual axis (edge/peak " << edge / peak
            << "); the dual axis must be longer (finer p spacing) for this time";
        throw Error(msg.str());
    }
}

}  // namespace

cplx kernel_free(double t, double q, double Q, double qs, double Qs, const UnitSystem& u) {
    require_nonzero_time(t, "kernel_free");
    const double pre = u.mass / (2.0 * kPi * u.hbar * std::abs(t));
    return std::polar(pre, u.mass * (q - qs) * (Q - Qs) / (u.hbar * t));
}

BoxKernelValue kernel_box(double t, double q, double Q, double qs, double Qs, double length,
                          const ImageSumPolicy& policy, const UnitSystem& u) {
    require_nonzero_time(t, "kernel_box");
    policy.validate();
    const double tol = 1e-12 * length;
    if (q < -tol || q > length + tol || qs < -tol || qs > length + tol)
        throw Error("kernel_box: q and q' must lie in [0, L]");
    auto shell = [&](int n) {
        const double s = 2.0 * n * length;
        return kernel_free(t, q - s, Q, qs, Qs, u) + kernel_free(t, q - s + 2.0 * qs, Q, qs, -Qs, u);
    };
    cplx total = shell(0);
    cplx outer = 0.0;
    for (int n = 1; n <= policy.n_images; ++n) {
        const cplx pair = shell(n) + shell(-n);
        total += pair;
        if (n >= policy.n_images - 1) outer += pair;
    }
    const double mag = std::abs(total);
    return {total, mag > 0.0 ? std::abs(outer) / mag : std::abs(outer)};
}

KernelPropagation propagate_free_kernel(const KvnState& s, double t) {
    require_nonzero_time(t, "propagate_free_kernel");
    if (s.rep() != Representation::PositionDual)
        throw Error("propagate_free_kernel: state must be in the position-dual representation");
    const GridSpec& g = s.grid();
    if (g.walled()) throw Error("propagate_free_kernel: walled grid");
    const std::size_t refine = refinement(g, t);
    const long r = static_cast<long>(refine);
    const long fine_rows = static_cast<long>(g.rows()) * r;
    auto source = [=](long i, long d) {
        const long j = i * r - d;
        return (j >= 0 && j < fine_rows) ? j : -1L;
    };
    const auto fine = refine_rows(g, s.amplitudes(), refine);
    auto qd = kernel_quadrature(g, fine, static_cast<std::size_t>(fine_rows), t, refine, fine_rows - 1,
                                source, [](long, long) { return false; });
    require_dual_edge_clear(qd.out, "propagate_free_kernel");
    return {KvnState(g, s.rep(), to_vector(qd.out), s.time() + t), 0.0};
}

KernelPropagation propagate_box_kernel(const KvnState& s, double t, const ImageSumPolicy& policy) {
    require_nonzero_time(t, "propagate_box_kernel");
    policy.validate();
    if (s.rep() != Representation::PositionDual)
        throw Error("propagate_box_kernel: state must be in the position-dual representation");
    const GridSpec& g = s.grid();
    if (!g.walled()) throw Error("propagate_box_kernel: grid is not wall-aligned");
    const std::size_t refine = refinement(g, t);
    const long r = static_cast<long>(refine);
    const long n = static_cast<long>(g.q().n) * r;
    const long period = 2 * n;
    const long images = policy.n_images;
    auto source = [=](long i, long d) {
        const long j = i * r - d;
        if (std::abs(shell_of(j, n)) > images) return -1L;
        return ((j % period) + period) % period;
    };
    auto in_tail = [=](long i, long d) { return std::abs(shell_of(i * r - d, n)) >= images - 1; };
    const std::vector<cplx> circle = refine_rows(ops::circle_grid(g), ops::unfold(g, s.amplitudes()), refine);
    const long d_max = period * (images + 1);
    auto qd = kernel_quadrature(g, circle, static_cast<std::size_t>(period), t, refine, d_max, source, in_tail);

    require_dual_edge_clear(qd.out, "propagate_box_kernel");
    const double total = qd.out.norm();
    const double tail = qd.tail.size() ? qd.tail.norm() : 0.0;
    const double estimate = total > 0.0 ? tail / total : tail;
    if (estimate > policy.tail_tol) {
        std::ostringstream msg;
        msg << "propagate_box_kernel: image-sum tail estimate " << estimate << " exceeds tail_tol "
            << policy.tail_tol << " (increase n_images)";
        throw Error(msg.str());
    }
    return {KvnState(g, s.rep(), to_vector(qd.out), s.time() + t), estimate};
}

}  // namespace kvn
