#include "mecplace/kernels.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "mecplace/rng.hpp"

namespace {

using namespace mecplace;
namespace kd = mecplace::kernels::detail;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> random_vec(Rng& rng, std::size_t n, double inf_frac = 0.0) {
  std::vector<double> v(n);
  for (double& x : v)
    x = rng.canonical() < inf_frac ? kInf : 10.0 * rng.canonical();
  return v;
}

TEST(Kernels, MinPlusRelaxMatchesScalarBitExact) {
  if (!kernels::avx2_supported()) GTEST_SKIP() << "no AVX2 on this host";
  Rng rng(7);
  for (const std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 255u}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto dst_a = random_vec(rng, n, 0.1);
      auto dst_b = dst_a;
      const auto via = random_vec(rng, n, 0.1);
      const double add = rep % 5 == 0 ? kInf : 5.0 * rng.canonical();
      kd::min_plus_relax_scalar(dst_a.data(), via.data(), add, n);
      kd::min_plus_relax_avx2(dst_b.data(), via.data(), add, n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(dst_a[i], dst_b[i]) << "i=" << i;
    }
  }
}

TEST(Kernels, MinInplaceMatchesScalarBitExact) {
  if (!kernels::avx2_supported()) GTEST_SKIP() << "no AVX2 on this host";
  Rng rng(8);
  for (const std::size_t n : {0u, 1u, 2u, 4u, 9u, 33u, 128u}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto a = random_vec(rng, n, 0.15);
      auto b = a;
      const auto src = random_vec(rng, n, 0.15);
      kd::min_inplace_scalar(a.data(), src.data(), n);
      kd::min_inplace_avx2(b.data(), src.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(a[i], b[i]);
    }
  }
}

TEST(Kernels, SumMatchesScalarWithinTolerance) {
  if (!kernels::avx2_supported()) GTEST_SKIP() << "no AVX2 on this host";
  Rng rng(9);
  for (const std::size_t n : {0u, 1u, 4u, 7u, 100u, 1023u}) {
    const auto v = random_vec(rng, n);
    const double a = kd::sum_scalar(v.data(), n);
    const double b = kd::sum_avx2(v.data(), n);
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(Kernels, MaxMatchesScalarBitExact) {
  if (!kernels::avx2_supported()) GTEST_SKIP() << "no AVX2 on this host";
  Rng rng(10);
  for (const std::size_t n : {1u, 2u, 4u, 5u, 100u}) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto v = random_vec(rng, n, rep % 3 == 0 ? 0.2 : 0.0);
      EXPECT_EQ(kd::max_scalar(v.data(), n), kd::max_avx2(v.data(), n));
    }
  }
}

TEST(Kernels, DispatchForcesBackend) {
  kernels::force_backend(kernels::Backend::Scalar);
  EXPECT_EQ(kernels::active_backend(), kernels::Backend::Scalar);
  std::vector<double> v{3.0, 1.0, 2.0};
  EXPECT_EQ(kernels::max(v.data(), v.size()), 3.0);
  EXPECT_EQ(kernels::sum(v.data(), v.size()), 6.0);
  kernels::reset_backend();
  if (kernels::avx2_supported()) {
    EXPECT_EQ(kernels::active_backend(), kernels::Backend::Avx2);
    EXPECT_EQ(kernels::max(v.data(), v.size()), 3.0);
  } else {
    EXPECT_THROW(kernels::force_backend(kernels::Backend::Avx2), std::runtime_error);
  }
}

TEST(Kernels, BackendNames) {
  EXPECT_EQ(kernels::backend_name(kernels::Backend::Scalar), "scalar");
  EXPECT_EQ(kernels::backend_name(kernels::Backend::Avx2), "avx2");
}

}  // namespace
