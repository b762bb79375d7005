#pragma once

// Inner-loop vector kernels over contiguous double arrays.
//
// Every kernel has a portable scalar reference in `kernels::scalar` and an
// AVX2/FMA variant in `kernels::avx2`. The unqualified entry points dispatch
// to the best variant the running CPU supports, chosen once at first use.
// Results agree with the scalar reference up to summation-order rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace specrev::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

bool isa_supported(Isa isa) noexcept;

/// The variant currently used by the dispatching entry points. The initial
/// choice honors SPECREV_ISA=scalar|avx2 when set.
Isa active_isa() noexcept;

/// Overrides the dispatch choice; throws Error(InvalidArgument) when the CPU
/// lacks the requested instruction set.
void set_active_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double sum_squares(std::span<const double> a);
/// Σ (a_i - mean_a)(b_i - mean_b)
double centered_dot(std::span<const double> a, std::span<const double> b, double mean_a,
                    double mean_b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// x = (x - shift) * scale
void shift_scale(std::span<double> x, double shift, double scale);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum(const double* a, std::size_t n) noexcept;
double sum_squares(const double* a, std::size_t n) noexcept;
double centered_dot(const double* a, const double* b, std::size_t n, double mean_a,
                    double mean_b) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void shift_scale(double* x, std::size_t n, double shift, double scale) noexcept;
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum(const double* a, std::size_t n) noexcept;
double sum_squares(const double* a, std::size_t n) noexcept;
double centered_dot(const double* a, const double* b, std::size_t n, double mean_a,
                    double mean_b) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void shift_scale(double* x, std::size_t n, double shift, double scale) noexcept;
}  // namespace avx2

}  // namespace specrev::kernels
