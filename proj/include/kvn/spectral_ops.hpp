#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kvn/fft.hpp"
#include "kvn/grid.hpp"

// Fourier-space building blocks shared by the evolution, boundary and spectral
// modules. Arrays are row-major (q outer, dual inner) as in KvnState.
//
// Along q, periodic grids are treated as circles of length q_max - q_min. Walled
// grids are first unfolded to the period-2L circle with
//   f(-q, x) = f(q, -x)   (x = p or Q; the reversal is j -> (N - j) mod N),
// transformed there and folded back to the n_q + 1 physical rows.
namespace kvn::ops {

// Index of -x on a symmetric dual axis.
inline std::size_t reversed(std::size_t j, std::size_t n) { return (n - j) % n; }

// Number of rows of the periodic array along q (n_q periodic, 2 n_q walled).
std::size_t circle_rows(const GridSpec& g);

// Periodic grid of the unfolded circle: [q_min, q_min + 2L) with 2 n_q rows for
// walled grids; periodic grids are returned unchanged.
GridSpec circle_grid(const GridSpec& g);

std::vector<cplx> unfold(const GridSpec& g, std::span<const cplx> a);
std::vector<cplx> fold(const GridSpec& g, std::span<const cplx> circle);

enum class Nyquist { Keep, Zero };

// Multiply the q-Fourier coefficients of column j by m(k, j).
std::vector<cplx> q_multiplier(const GridSpec& g, std::span<const cplx> a,
                               const std::function<cplx(double k, std::size_t j)>& m, Nyquist ny);
// Multiply the dual-Fourier coefficients by m(kappa).
std::vector<cplx> dual_multiplier(const GridSpec& g, std::span<const cplx> a,
                                  const std::function<cplx(double kappa)>& m, Nyquist ny);
// Multiply the double-Fourier coefficients by m(k, kappa).
std::vector<cplx> double_multiplier(const GridSpec& g, std::span<const cplx> a,
                                    const std::function<cplx(double k, double kappa)>& m,
                                    Nyquist ny);

// Spectral first derivatives (Nyquist mode zeroed).
std::vector<cplx> d_q(const GridSpec& g, std::span<const cplx> a);
std::vector<cplx> d_dual(const GridSpec& g, std::span<const cplx> a);

// out(q, x_j) = a(q - shift(j), x_j), exact Fourier phase shift along q.
std::vector<cplx> shift_q(const GridSpec& g, std::span<const cplx> a,
                          const std::function<double(std::size_t j)>& shift);
// out(q, x) = a(q, x - s), exact Fourier phase shift along the dual axis.
std::vector<cplx> shift_dual(const GridSpec& g, std::span<const cplx> a, double s);

inline constexpr double kSupportThreshold = 1e-8;

// True when moving column j by shift(j) along q carries amplitude above
// kSupportThreshold * max|a| across the ends of the q axis.
bool shift_wraps(const GridSpec& g, std::span<const cplx> a,
                 const std::function<double(std::size_t j)>& shift);
// Same test for a uniform shift along the dual axis.
bool dual_shift_wraps(const GridSpec& g, std::span<const cplx> a, double s);

}  // namespace kvn::ops
