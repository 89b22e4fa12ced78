#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace racl::kernels {

// Dense inner loops used by the model forward/backward pass. Scalar
// reference implementations plus an AVX2 variant chosen once at startup
// (override with RACL_KERNEL_BACKEND=scalar). The SIMD variants reorder
// the reductions, so equality with the scalar path is up to rounding;
// within one process the selected backend is fixed and results are
// reproducible bit for bit.

double dot(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// out[i] = dot(m[i*cols .. i*cols+cols), x) + bias[i]
void matvec(std::span<const double> m, std::span<const double> x,
            std::span<const double> bias, std::span<double> out,
            std::size_t rows, std::size_t cols);

std::string_view backend_name();

namespace detail {
double dot_scalar(std::span<const double> a, std::span<const double> b);
void axpy_scalar(double alpha, std::span<const double> x, std::span<double> y);
#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(std::span<const double> a, std::span<const double> b);
void axpy_avx2(double alpha, std::span<const double> x, std::span<double> y);
#endif
} // namespace detail

} // namespace racl::kernels
