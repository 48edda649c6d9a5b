#include "ppes/kernels.hpp"

namespace ppes::kernels {

namespace {

void dir_matmul_scalar(const double* M, int rows, int cols, const double* in, double* out, int outer,
                       int inner, double scale) {
  for (int o = 0; o < outer; ++o) {
    const double* src = in + static_cast<long>(o) * cols * inner;
    double* dst = out + static_cast<long>(o) * rows * inner;
    for (int r = 0; r < rows; ++r) {
      double* d = dst + static_cast<long>(r) * inner;
      for (int c = 0; c < cols; ++c) {
        const double a = scale * M[r * cols + c];
        if (a == 0.0) continue;
        const double* s = src + static_cast<long>(c) * inner;
        for (int x = 0; x < inner; ++x) d[x] += a * s[x];
      }
    }
  }
}

void dir_telescope_scalar(const double* pinv, int n, const double* f, double* out, int outer, int inner,
                          double scale) {
  for (int o = 0; o < outer; ++o) {
    const double* src = f + static_cast<long>(o) * (n + 1) * inner;
    double* dst = out + static_cast<long>(o) * n * inner;
    for (int i = 0; i < n; ++i) {
      const double a = scale * pinv[i];
      const double* lo = src + static_cast<long>(i) * inner;
      const double* hi = lo + inner;
      double* d = dst + static_cast<long>(i) * inner;
      for (int x = 0; x < inner; ++x) d[x] += a * (hi[x] - lo[x]);
    }
  }
}

}  // namespace

const Table& scalar() {
  static const Table t{"scalar", dir_matmul_scalar, dir_telescope_scalar};
  return t;
}

}  // namespace ppes::kernels
