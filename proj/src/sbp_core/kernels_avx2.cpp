#include "ppes/kernels.hpp"

#if defined(__x86_64__) && defined(PPES_HAVE_AVX2)
#include <immintrin.h>

namespace ppes::kernels {

namespace {

__attribute__((target("avx2,fma"))) void dir_matmul_avx2(const double* M, int rows, int cols,
                                                          const double* in, double* out, int outer,
                                                          int inner, double scale) {
  const int vec_end = inner & ~3;
  for (int o = 0; o < outer; ++o) {
    const double* src = in + static_cast<long>(o) * cols * inner;
    double* dst = out + static_cast<long>(o) * rows * inner;
    for (int r = 0; r < rows; ++r) {
      double* d = dst + static_cast<long>(r) * inner;
      for (int c = 0; c < cols; ++c) {
        const double a = scale * M[r * cols + c];
        if (a == 0.0) continue;
        const __m256d va = _mm256_set1_pd(a);
        const double* s = src + static_cast<long>(c) * inner;
        int x = 0;
        for (; x < vec_end; x += 4) {
          __m256d acc = _mm256_loadu_pd(d + x);
          acc = _mm256_fmadd_pd(va, _mm256_loadu_pd(s + x), acc);
          _mm256_storeu_pd(d + x, acc);
        }
        for (; x < inner; ++x) d[x] += a * s[x];
      }
    }
  }
}

__attribute__((target("avx2,fma"))) void dir_telescope_avx2(const double* pinv, int n, const double* f,
                                                            double* out, int outer, int inner,
                                                            double scale) {
  const int vec_end = inner & ~3;
  for (int o = 0; o < outer; ++o) {
    const double* src = f + static_cast<long>(o) * (n + 1) * inner;
    double* dst = out + static_cast<long>(o) * n * inner;
    for (int i = 0; i < n; ++i) {
      const double a = scale * pinv[i];
      const __m256d va = _mm256_set1_pd(a);
      const double* lo = src + static_cast<long>(i) * inner;
      const double* hi = lo + inner;
      double* d = dst + static_cast<long>(i) * inner;
      int x = 0;
      for (; x < vec_end; x += 4) {
        const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(hi + x), _mm256_loadu_pd(lo + x));
        _mm256_storeu_pd(d + x, _mm256_fmadd_pd(va, diff, _mm256_loadu_pd(d + x)));
      }
      for (; x < inner; ++x) d[x] += a * (hi[x] - lo[x]);
    }
  }
}

}  // namespace

const Table* avx2() {
  static const Table t{"avx2", dir_matmul_avx2, dir_telescope_avx2};
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &t : nullptr;
}

}  // namespace ppes::kernels

#else

namespace ppes::kernels {
const Table* avx2() { return nullptr; }
}  // namespace ppes::kernels

#endif
