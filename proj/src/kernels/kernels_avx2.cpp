#include <immintrin.h>

#include "rrte/kernels.hpp"

namespace rrte::kernels::detail {

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  lo = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3_avx2(const double* a, const double* b, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(w + i), acc);
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  lo = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) s += a[i] * b[i] * w[i];
  return s;
}

// Complex multiply-accumulate, two complex doubles per vector.
std::complex<double> cdot_avx2(const std::complex<double>* a,
                               const std::complex<double>* b, std::size_t n) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(ap + 2 * i);           // ar0 ai0 ar1 ai1
    __m256d vb = _mm256_loadu_pd(bp + 2 * i);
    __m256d vb_swap = _mm256_permute_pd(vb, 0x5);       // bi0 br0 bi1 br1
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);           // ar*br, ai*bi
    acc_im = _mm256_fmadd_pd(va, vb_swap, acc_im);      // ar*bi, ai*br
  }
  // re = sum(ar*br - ai*bi), im = sum(ar*bi + ai*br)
  alignas(32) double re4[4], im4[4];
  _mm256_store_pd(re4, acc_re);
  _mm256_store_pd(im4, acc_im);
  double re = re4[0] - re4[1] + re4[2] - re4[3];
  double im = im4[0] + im4[1] + im4[2] + im4[3];
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

void caxpy_avx2(std::complex<double> s, const std::complex<double>* x,
                std::complex<double>* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  __m256d sre = _mm256_set1_pd(s.real());
  __m256d sim = _mm256_set1_pd(s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xp + 2 * i);            // xr0 xi0 xr1 xi1
    __m256d vx_swap = _mm256_permute_pd(vx, 0x5);        // xi0 xr0 xi1 xr1
    __m256d vy = _mm256_loadu_pd(yp + 2 * i);
    __m256d t = _mm256_mul_pd(sim, vx_swap);             // si*xi, si*xr
    t = _mm256_addsub_pd(_mm256_setzero_pd(), t);        // -si*xi, +si*xr
    vy = _mm256_add_pd(vy, _mm256_fmadd_pd(sre, vx, t));
    _mm256_storeu_pd(yp + 2 * i, vy);
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

}  // namespace rrte::kernels::detail
