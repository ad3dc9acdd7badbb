#include "rrte/kernels.hpp"

namespace rrte::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3_scalar(const double* a, const double* b, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * w[i];
  return s;
}

std::complex<double> cdot_scalar(const std::complex<double>* a,
                                 const std::complex<double>* b, std::size_t n) {
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void caxpy_scalar(std::complex<double> s, const std::complex<double>* x,
                  std::complex<double>* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

}  // namespace detail

namespace {

struct Dispatch {
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  std::complex<double> (*cdot)(const std::complex<double>*,
                               const std::complex<double>*, std::size_t);
  void (*caxpy)(std::complex<double>, const std::complex<double>*,
                std::complex<double>*, std::size_t);
  const char* name;
};

Dispatch select() {
#if defined(RRTE_HAVE_X86_INTRIN)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return {detail::dot_avx2, detail::dot3_avx2, detail::cdot_avx2,
            detail::caxpy_avx2, "avx2"};
  }
#endif
  return {detail::dot_scalar, detail::dot3_scalar, detail::cdot_scalar,
          detail::caxpy_scalar, "scalar"};
}

const Dispatch& table() {
  static const Dispatch d = select();
  return d;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}

double dot3(const double* a, const double* b, const double* w, std::size_t n) {
  return table().dot3(a, b, w, n);
}

std::complex<double> cdot(const std::complex<double>* a,
                          const std::complex<double>* b, std::size_t n) {
  return table().cdot(a, b, n);
}

void caxpy(std::complex<double> s, const std::complex<double>* x,
           std::complex<double>* y, std::size_t n) {
  table().caxpy(s, x, y, n);
}

const char* active_implementation() { return table().name; }

}  // namespace rrte::kernels
