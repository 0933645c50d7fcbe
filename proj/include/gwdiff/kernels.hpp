#pragma once

#include "gwdiff/matrix.hpp"

namespace gwdiff::kernels {

// C = A * B. The parallel path partitions rows; each output entry is
// accumulated in the same order as the serial path, so results are
// bit-identical regardless of thread count.
Matrix matmul_serial(const Matrix& a, const Matrix& b);
Matrix matmul_parallel(const Matrix& a, const Matrix& b);
Matrix matmul(const Matrix& a, const Matrix& b);

double max_abs_diff(const Matrix& a, const Matrix& b);
double frobenius_diff(const Matrix& a, const Matrix& b);
// Largest singular value of a - b, by power iteration on (a-b)^T (a-b).
double spectral_diff(const Matrix& a, const Matrix& b);

double frobenius_diff_parallel(const Matrix& a, const Matrix& b);

}  // namespace gwdiff::kernels
