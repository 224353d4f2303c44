#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kvn {

using cplx = std::complex<double>;

namespace fft {

// Forward: sum_j x_j e^{-2 pi i j k / n}. Backward: sign +, no 1/n scaling.
enum class Direction { Forward, Backward };

// In-place 1-D transform of a contiguous sequence.
void transform(std::span<cplx> data, Direction dir);

// In-place transforms of a row-major rows x cols array.
// along_rows: transform each of the `cols` columns (length rows, stride cols).
// along_cols: transform each of the `rows` rows (length cols, contiguous).
void along_rows(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir);
void along_cols(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir);

// Angular wavenumbers 2 pi m / (n h) in transform order
// (m = 0 .. n/2 - 1, -n/2 .. -1).
std::vector<double> wavenumbers(std::size_t n, double spacing);

}  // namespace fft
}  // namespace kvn
