#include "ppes/kernels.hpp"

#if defined(__aarch64__) && defined(PPES_HAVE_NEON)
#include <arm_neon.h>

namespace ppes::kernels {

namespace {

void dir_matmul_neon(const double* M, int rows, int cols, const double* in, double* out, int outer,
                     int inner, double scale) {
  const int vec_end = inner & ~1;
  for (int o = 0; o < outer; ++o) {
    const double* src = in + static_cast<long>(o) * cols * inner;
    double* dst = out + static_cast<long>(o) * rows * inner;
    for (int r = 0; r < rows; ++r) {
      double* d = dst + static_cast<long>(r) * inner;
      for (int c = 0; c < cols; ++c) {
        const double a = scale * M[r * cols + c];
        if (a == 0.0) continue;
        const float64x2_t va = vdupq_n_f64(a);
        const double* s = src + static_cast<long>(c) * inner;
        int x = 0;
        for (; x < vec_end; x += 2) vst1q_f64(d + x, vfmaq_f64(vld1q_f64(d + x), va, vld1q_f64(s + x)));
        for (; x < inner; ++x) d[x] += a * s[x];
      }
    }
  }
}

void dir_telescope_neon(const double* pinv, int n, const double* f, double* out, int outer, int inner,
                        double scale) {
  const int vec_end = inner & ~1;
  for (int o = 0; o < outer; ++o) {
    const double* src = f + static_cast<long>(o) * (n + 1) * inner;
    double* dst = out + static_cast<long>(o) * n * inner;
    for (int i = 0; i < n; ++i) {
      const double a = scale * pinv[i];
      const float64x2_t va = vdupq_n_f64(a);
      const double* lo = src + static_cast<long>(i) * inner;
      const double* hi = lo + inner;
      double* d = dst + static_cast<long>(i) * inner;
      int x = 0;
      for (; x < vec_end; x += 2) {
        const float64x2_t diff = vsubq_f64(vld1q_f64(hi + x), vld1q_f64(lo + x));
        vst1q_f64(d + x, vfmaq_f64(vld1q_f64(d + x), va, diff));
      }
      for (; x < inner; ++x) d[x] += a * (hi[x] - lo[x]);
    }
  }
}

}  // namespace

const Table* neon() {
  static const Table t{"neon", dir_matmul_neon, dir_telescope_neon};
  return &t;
}

}  // namespace ppes::kernels

#else

namespace ppes::kernels {
const Table* neon() { return nullptr; }
}  // namespace ppes::kernels

#endif
