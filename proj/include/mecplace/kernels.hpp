#pragma once

#include <cstddef>
#include <string_view>

// Dense double-precision kernels behind the delay-matrix math: the
// Floyd-Warshall min-plus relaxation, centrality row sums, and the
// nearest-site coverage reductions. Each kernel has a scalar reference
// implementation and an AVX2 variant; the active backend is picked once at
// startup via CPUID and can be forced for testing (`force_backend`) or from
// the CLI. min_plus_relax and min_inplace are elementwise and bit-identical
// across backends; sum() reduces in a different association order under AVX2,
// so cross-backend comparisons of it need a small relative tolerance.
namespace mecplace::kernels {

enum class Backend { Scalar, Avx2 };

bool avx2_supported();

// Currently active backend (auto-detected unless forced).
Backend active_backend();

// Force a backend. Forcing Avx2 on a CPU without AVX2 throws.
void force_backend(Backend b);

// Reset to auto-detection.
void reset_backend();

std::string_view backend_name(Backend b);

// dst[i] = min(dst[i], add + via[i]) for i in [0, n)
void min_plus_relax(double* dst, const double* via, double add, std::size_t n);

// dst[i] = min(dst[i], src[i]) for i in [0, n)
void min_inplace(double* dst, const double* src, std::size_t n);

double sum(const double* v, std::size_t n);

// Maximum element; n must be >= 1.
double max(const double* v, std::size_t n);

namespace detail {
void min_plus_relax_scalar(double* dst, const double* via, double add, std::size_t n);
void min_inplace_scalar(double* dst, const double* src, std::size_t n);
double sum_scalar(const double* v, std::size_t n);
double max_scalar(const double* v, std::size_t n);

void min_plus_relax_avx2(double* dst, const double* via, double add, std::size_t n);
void min_inplace_avx2(double* dst, const double* src, std::size_t n);
double sum_avx2(const double* v, std::size_t n);
double max_avx2(const double* v, std::size_t n);
}  // namespace detail

}  // namespace mecplace::kernels
