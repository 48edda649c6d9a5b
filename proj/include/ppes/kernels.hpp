#pragma once

#include <string_view>

namespace ppes::kernels {

// Data along one tensor direction is viewed as [outer][n][inner] with inner
// contiguous. Both kernels accumulate into out.

/// out[o][r][:] += scale * sum_c M[r][c] in[o][c][:]
using DirMatmulFn = void (*)(const double* M, int rows, int cols, const double* in, double* out,
                             int outer, int inner, double scale);

/// out[o][i][:] += scale * pinv[i] * (f[o][i+1][:] - f[o][i][:]), f has n+1 rows.
using DirTelescopeFn = void (*)(const double* pinv, int n, const double* f, double* out, int outer,
                                int inner, double scale);

struct Table {
  std::string_view name;
  DirMatmulFn dir_matmul;
  DirTelescopeFn dir_telescope;
};

const Table& scalar();
/// Returns nullptr when the variant is not compiled in or not supported by the CPU.
const Table* avx2();
const Table* neon();

/// Best supported table; PPES_SIMD=scalar in the environment forces the reference path.
const Table& active();

}  // namespace ppes::kernels
