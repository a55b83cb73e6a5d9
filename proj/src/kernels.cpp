#include "mecplace/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace mecplace::kernels {

namespace detail {

void min_plus_relax_scalar(double* dst, const double* via, double add, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double cand = add + via[i];
    if (cand < dst[i]) dst[i] = cand;
  }
}

void min_inplace_scalar(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (src[i] < dst[i]) dst[i] = src[i];
  }
}

double sum_scalar(const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += v[i];
  return acc;
}

double max_scalar(const double* v, std::size_t n) {
  assert(n >= 1);
  double m = v[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, v[i]);
  return m;
}

}  // namespace detail

namespace {

Backend detect() { return avx2_supported() ? Backend::Avx2 : Backend::Scalar; }

Backend g_backend = detect();

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend active_backend() { return g_backend; }

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported())
    throw std::runtime_error("kernels: AVX2 backend requested but not supported by this CPU");
  g_backend = b;
}

void reset_backend() { g_backend = detect(); }

std::string_view backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

void min_plus_relax(double* dst, const double* via, double add, std::size_t n) {
  if (g_backend == Backend::Avx2)
    detail::min_plus_relax_avx2(dst, via, add, n);
  else
    detail::min_plus_relax_scalar(dst, via, add, n);
}

void min_inplace(double* dst, const double* src, std::size_t n) {
  if (g_backend == Backend::Avx2)
    detail::min_inplace_avx2(dst, src, n);
  else
    detail::min_inplace_scalar(dst, src, n);
}

double sum(const double* v, std::size_t n) {
  return g_backend == Backend::Avx2 ? detail::sum_avx2(v, n) : detail::sum_scalar(v, n);
}

double max(const double* v, std::size_t n) {
  return g_backend == Backend::Avx2 ? detail::max_avx2(v, n) : detail::max_scalar(v, n);
}

}  // namespace mecplace::kernels
