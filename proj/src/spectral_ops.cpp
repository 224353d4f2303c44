#include "kvn/spectral_ops.hpp"

#include <algorithm>
#include <cmath>

namespace kvn::ops {

std::size_t circle_rows(const GridSpec& g) { return g.walled() ? 2 * g.q().n : g.q().n; }

GridSpec circle_grid(const GridSpec& g) {
    if (!g.walled()) return g;
    const Axis& q = g.q();
    return GridSpec::periodic(q.min, q.min + 2.0 * q.extent(), 2 * q.n, g.dual().min, g.dual().max,
                              g.cols(), g.units());
}

std::vector<cplx> unfold(const GridSpec& g, std::span<const cplx> a) {
    if (!g.walled()) return {a.begin(), a.end()};
    const std::size_t nq = g.q().n;
    const std::size_t nc = g.cols();
    std::vector<cplx> c(2 * nq * nc);
    std::copy(a.begin(), a.end(), c.begin());
    for (std::size_t r = nq + 1; r < 2 * nq; ++r) {
        const std::size_t src = 2 * nq - r;
        for (std::size_t j = 0; j < nc; ++j) c[r * nc + j] = a[src * nc + reversed(j, nc)];
    }
    return c;
}

std::vector<cplx> fold(const GridSpec& g, std::span<const cplx> circle) {
    return {circle.begin(), circle.begin() + static_cast<std::ptrdiff_t>(g.size())};
}

namespace {

bool is_nyquist(std::size_t m, std::size_t n) { return m == n / 2; }

}  // namespace

std::vector<cplx> q_multiplier(const GridSpec& g, std::span<const cplx> a,
                               const std::function<cplx(double, std::size_t)>& mult, Nyquist ny) {
    const std::size_t rows = circle_rows(g);
    const std::size_t nc = g.cols();
    std::vector<cplx> c = unfold(g, a);
    fft::along_rows(c, rows, nc, fft::Direction::Forward);
    const auto k = fft::wavenumbers(rows, g.dq());
    const double inv = 1.0 / static_cast<double>(rows);
    for (std::size_t m = 0; m < rows; ++m) {
        const bool zero = ny == Nyquist::Zero && is_nyquist(m, rows);
        for (std::size_t j = 0; j < nc; ++j) {
            cplx& v = c[m * nc + j];
            v = zero ? cplx{} : v * mult(k[m], j) * inv;
        }
    }
    fft::along_rows(c, rows, nc, fft::Direction::Backward);
    return fold(g, c);
}

std::vector<cplx> dual_multiplier(const GridSpec& g, std::span<const cplx> a,
                                  const std::function<cplx(double)>& mult, Nyquist ny) {
    const std::size_t rows = g.rows();
    const std::size_t nc = g.cols();
    std::vector<cplx> c(a.begin(), a.end());
    fft::along_cols(c, rows, nc, fft::Direction::Forward);
    const auto kap = fft::wavenumbers(nc, g.d_dual());
    const double inv = 1.0 / static_cast<double>(nc);
    std::vector<cplx> f(nc);
    for (std::size_t j = 0; j < nc; ++j)
        f[j] = (ny == Nyquist::Zero && is_nyquist(j, nc)) ? cplx{} : mult(kap[j]) * inv;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < nc; ++j) c[i * nc + j] *= f[j];
    fft::along_cols(c, rows, nc, fft::Direction::Backward);
    return c;
}

std::vector<cplx> double_multiplier(const GridSpec& g, std::span<const cplx> a,
                                    const std::function<cplx(double, double)>& mult, Nyquist ny) {
    const std::size_t rows = circle_rows(g);
    const std::size_t nc = g.cols();
    std::vector<cplx> c = unfold(g, a);
    fft::along_rows(c, rows, nc, fft::Direction::Forward);
    fft::along_cols(c, rows, nc, fft::Direction::Forward);
    const auto k = fft::wavenumbers(rows, g.dq());
    const auto kap = fft::wavenumbers(nc, g.d_dual());
    const double inv = 1.0 / (static_cast<double>(rows) * static_cast<double>(nc));
    for (std::size_t m = 0; m < rows; ++m) {
        for (std::size_t j = 0; j < nc; ++j) {
            cplx& v = c[m * nc + j];
            const bool zero =
                ny == Nyquist::Zero && (is_nyquist(m, rows) || is_nyquist(j, nc));
            v = zero ? cplx{} : v * mult(k[m], kap[j]) * inv;
        }
    }
    fft::along_cols(c, rows, nc, fft::Direction::Backward);
    fft::along_rows(c, rows, nc, fft::Direction::Backward);
    return fold(g, c);
}

std::vector<cplx> d_q(const GridSpec& g, std::span<const cplx> a) {
    return q_multiplier(g, a, [](double k, std::size_t) { return cplx(0.0, k); }, Nyquist::Zero);
}

std::vector<cplx> d_dual(const GridSpec& g, std::span<const cplx> a) {
    return dual_multiplier(g, a, [](double kap) { return cplx(0.0, kap); }, Nyquist::Zero);
}

std::vector<cplx> shift_q(const GridSpec& g, std::span<const cplx> a,
                          const std::function<double(std::size_t)>& shift) {
    const std::size_t nc = g.cols();
    std::vector<double> s(nc);
    for (std::size_t j = 0; j < nc; ++j) s[j] = shift(j);
    return q_multiplier(
        g, a, [&s](double k, std::size_t j) { return std::polar(1.0, -k * s[j]); }, Nyquist::Keep);
}

std::vector<cplx> shift_dual(const GridSpec& g, std::span<const cplx> a, double s) {
    return dual_multiplier(g, a, [s](double kap) { return std::polar(1.0, -kap * s); },
                           Nyquist::Keep);
}

namespace {

double max_abs(std::span<const cplx> a) {
    double m = 0.0;
    for (const cplx& v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

bool shift_wraps(const GridSpec& g, std::span<const cplx> a,
                 const std::function<double(std::size_t)>& shift) {
    const double thr = kSupportThreshold * max_abs(a);
    if (thr == 0.0) return false;
    const Axis& qa = g.q();
    const double lo_edge = qa.min;
    const double hi_edge = qa.closed ? qa.max : qa.max - qa.spacing();
    const double slack = 1e-9 * qa.spacing();
    for (std::size_t j = 0; j < g.cols(); ++j) {
        std::size_t lo = g.rows(), hi = 0;
        for (std::size_t i = 0; i < g.rows(); ++i) {
            if (std::abs(a[g.index(i, j)]) > thr) {
                lo = std::min(lo, i);
                hi = i;
            }
        }
        if (lo > hi) continue;
        const double s = shift(j);
        if (qa.at(lo) + s < lo_edge - slack || qa.at(hi) + s > hi_edge + slack) return true;
    }
    return false;
}

bool dual_shift_wraps(const GridSpec& g, std::span<const cplx> a, double s) {
    const double thr = kSupportThreshold * max_abs(a);
    if (thr == 0.0) return false;
    const Axis& d = g.dual();
    std::size_t lo = g.cols(), hi = 0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            if (std::abs(a[g.index(i, j)]) > thr) {
                lo = std::min(lo, j);
                hi = std::max(hi, j);
            }
        }
    }
    if (lo > hi) return false;
    const double slack = 1e-9 * d.spacing();
    return d.at(lo) + s < d.min - slack || d.at(hi) + s > d.max - d.spacing() + slack;
}

}  // namespace kvn::ops
