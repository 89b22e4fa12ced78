#include "racl/kernels.hpp"

#include <cassert>
#include <cstdlib>

namespace racl::kernels {

namespace detail {

double dot_scalar(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

} // namespace detail

namespace {

using DotFn = double (*)(std::span<const double>, std::span<const double>);
using AxpyFn = void (*)(double, std::span<const double>, std::span<double>);

struct Backend {
    DotFn dot;
    AxpyFn axpy;
    std::string_view name;
};

Backend select_backend() {
    const char* force = std::getenv("RACL_KERNEL_BACKEND");
    if (force != nullptr && std::string_view(force) == "scalar")
        return {detail::dot_scalar, detail::axpy_scalar, "scalar"};
#if defined(RACL_WITH_AVX2)
    if (__builtin_cpu_supports("avx2"))
        return {detail::dot_avx2, detail::axpy_avx2, "avx2"};
#endif
    return {detail::dot_scalar, detail::axpy_scalar, "scalar"};
}

const Backend& backend() {
    static const Backend b = select_backend();
    return b;
}

} // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    return backend().dot(a, b);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    backend().axpy(alpha, x, y);
}

void matvec(std::span<const double> m, std::span<const double> x,
            std::span<const double> bias, std::span<double> out,
            std::size_t rows, std::size_t cols) {
    assert(m.size() == rows * cols && x.size() == cols);
    assert(bias.size() == rows && out.size() == rows);
    for (std::size_t r = 0; r < rows; ++r)
        out[r] = backend().dot(m.subspan(r * cols, cols), x) + bias[r];
}

std::string_view backend_name() { return backend().name; }

} // namespace racl::kernels
