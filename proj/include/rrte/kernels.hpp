#pragma once

#include <complex>
#include <cstddef>

namespace rrte::kernels {

// Reduction kernels used by the mode-sum assembly loops.  Scalar reference
// implementations always exist; on x86 an AVX2+FMA variant is selected at
// runtime when the CPU supports it.  Results may differ from the scalar
// reference by rounding only (FMA contraction), never structurally.

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i a[i] * b[i] * w[i]
double dot3(const double* a, const double* b, const double* w, std::size_t n);

// sum_i a[i] * b[i]   (complex, no conjugation)
std::complex<double> cdot(const std::complex<double>* a,
                          const std::complex<double>* b, std::size_t n);

// y[i] += s * x[i]   (complex scale, complex arrays)
void caxpy(std::complex<double> s, const std::complex<double>* x,
           std::complex<double>* y, std::size_t n);

const char* active_implementation();  // "scalar" or "avx2"

namespace detail {
double dot_scalar(const double*, const double*, std::size_t);
double dot3_scalar(const double*, const double*, const double*, std::size_t);
std::complex<double> cdot_scalar(const std::complex<double>*,
                                 const std::complex<double>*, std::size_t);
void caxpy_scalar(std::complex<double>, const std::complex<double>*,
                  std::complex<double>*, std::size_t);
#if defined(RRTE_HAVE_X86_INTRIN)
double dot_avx2(const double*, const double*, std::size_t);
double dot3_avx2(const double*, const double*, const double*, std::size_t);
std::complex<double> cdot_avx2(const std::complex<double>*,
                               const std::complex<double>*, std::size_t);
void caxpy_avx2(std::complex<double>, const std::complex<double>*,
                std::complex<double>*, std::size_t);
#endif
}  // namespace detail

}  // namespace rrte::kernels
