#include <atomic>
#include <cstdlib>
#include <string>

#include "specrev/error.hpp"
#include "specrev/kernels.hpp"

namespace specrev::kernels {

namespace {

struct Table {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t) noexcept;
  double (*sum)(const double*, std::size_t) noexcept;
  double (*sum_squares)(const double*, std::size_t) noexcept;
  double (*centered_dot)(const double*, const double*, std::size_t, double, double) noexcept;
  void (*axpy)(double, const double*, double*, std::size_t) noexcept;
  void (*shift_scale)(double*, std::size_t, double, double) noexcept;
};

constexpr Table kScalar{Isa::scalar,       scalar::dot,  scalar::sum,
                        scalar::sum_squares, scalar::centered_dot, scalar::axpy,
                        scalar::shift_scale};
constexpr Table kAvx2{Isa::avx2,         avx2::dot,  avx2::sum,        avx2::sum_squares,
                      avx2::centered_dot, avx2::axpy, avx2::shift_scale};

const Table* initial_table() noexcept {
  const char* env = std::getenv("SPECREV_ISA");
  if (env != nullptr && std::string(env) == "scalar") return &kScalar;
  return isa_supported(Isa::avx2) ? &kAvx2 : &kScalar;
}

std::atomic<const Table*>& active() noexcept {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

const Table& table() noexcept { return *active().load(std::memory_order_relaxed); }

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b)
    throw Error(ErrorKind::DimensionMismatch,
                "kernel operands differ in length (" + std::to_string(a) + " vs " +
                    std::to_string(b) + ")");
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool isa_supported(Isa isa) noexcept {
  if (isa == Isa::scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() noexcept { return table().isa; }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa))
    throw Error(ErrorKind::InvalidArgument,
                "instruction set '" + std::string(to_string(isa)) + "' not supported by this CPU");
  active().store(isa == Isa::avx2 ? &kAvx2 : &kScalar, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size());
  return table().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) { return table().sum(a.data(), a.size()); }

double sum_squares(std::span<const double> a) { return table().sum_squares(a.data(), a.size()); }

double centered_dot(std::span<const double> a, std::span<const double> b, double mean_a,
                    double mean_b) {
  check_same_size(a.size(), b.size());
  return table().centered_dot(a.data(), b.data(), a.size(), mean_a, mean_b);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same_size(x.size(), y.size());
  table().axpy(alpha, x.data(), y.data(), x.size());
}

void shift_scale(std::span<double> x, double shift, double scale) {
  table().shift_scale(x.data(), x.size(), shift, scale);
}

}  // namespace specrev::kernels
