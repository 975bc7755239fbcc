#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcp/errors.hpp"

namespace mcp {

// Bits per coordinate. Grid values j * 2^-m are exact doubles for m <= 53.
class Resolution {
 public:
  static constexpr int kMax = 53;

  constexpr explicit Resolution(int bits) : bits_(bits) {
    if (bits < 1 || bits > kMax) {
      throw DomainError("resolution must lie in [1, 53], got " +
                        std::to_string(bits));
    }
  }

  constexpr int bits() const { return bits_; }
  double step() const { return std::ldexp(1.0, -bits_); }
  std::uint64_t levels() const { return std::uint64_t{1} << bits_; }
  std::uint64_t max_index() const { return levels() - 1; }

  friend constexpr bool operator==(Resolution, Resolution) = default;

 private:
  int bits_;
};

// Point of the 2^-m grid in [0,1)^n, stored as integer indices j_i.
class QuantizedSignal {
 public:
  QuantizedSignal(std::vector<std::uint64_t> indices, Resolution m);
  static QuantizedSignal zeros(std::size_t n, Resolution m);

  std::size_t size() const { return indices_.size(); }
  Resolution resolution() const { return m_; }
  std::uint64_t index(std::size_t i) const { return indices_[i]; }
  const std::vector<std::uint64_t>& indices() const { return indices_; }
  double value(std::size_t i) const {
    return std::ldexp(static_cast<double>(indices_[i]), -m_.bits());
  }
  Eigen::VectorXd values() const;
  std::size_t support_size() const;

  friend bool operator==(const QuantizedSignal& a, const QuantizedSignal& b) {
    return a.m_ == b.m_ && a.indices_ == b.indices_;
  }
  // Lexicographic on indices; only meaningful at equal n and m.
  friend bool operator<(const QuantizedSignal& a, const QuantizedSignal& b) {
    return a.indices_ < b.indices_;
  }

 private:
  std::vector<std::uint64_t> indices_;
  Resolution m_;
};

namespace detail {
void check_unit_interval(double v, std::size_t i);
}

// First m bits of the binary expansion of each coordinate; 1.0 maps to the
// top grid point 1 - 2^-m.
template <typename Derived>
QuantizedSignal truncate(const Eigen::DenseBase<Derived>& x, Resolution m) {
  if (x.size() == 0) throw DimensionError("truncate: empty signal");
  std::vector<std::uint64_t> idx(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = static_cast<double>(x.derived().coeff(i));
    detail::check_unit_interval(v, static_cast<std::size_t>(i));
    const double scaled = std::floor(std::ldexp(v, m.bits()));
    const auto j = static_cast<std::uint64_t>(scaled);
    idx[static_cast<std::size_t>(i)] = j > m.max_index() ? m.max_index() : j;
  }
  return QuantizedSignal(std::move(idx), m);
}

struct QuantizationError {
  double linf;
  double l2;
};

template <typename Derived>
QuantizationError quantization_error(const Eigen::DenseBase<Derived>& x,
                                     const QuantizedSignal& q) {
  if (static_cast<std::size_t>(x.size()) != q.size()) {
    throw DimensionError("quantization_error: dimension mismatch");
  }
  double linf = 0.0;
  double sq = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double e = std::abs(static_cast<double>(x.derived().coeff(i)) -
                              q.value(static_cast<std::size_t>(i)));
    linf = std::max(linf, e);
    sq += e * e;
  }
  return {linf, std::sqrt(sq)};
}

// Inclusive index range of grid points within l-infinity distance 2^-m of v.
struct IndexRange {
  std::uint64_t lo;
  std::uint64_t hi;
};
IndexRange window_range(double v, Resolution m);

// Number of grid points, as a double so that 2^{nm} never overflows.
double grid_count(std::size_t n, Resolution m);

// Lexicographic walk over the whole grid or over the l-infinity window of
// radius 2^-m around a center. The count is checked against the cap at
// construction and a BudgetError names it when exceeded.
class GridEnumerator {
 public:
  GridEnumerator(std::size_t n, Resolution m, double cap);
  GridEnumerator(const Eigen::VectorXd& center, Resolution m, double cap);

  double count() const { return count_; }
  // Writes the next point and returns true, or returns false when exhausted.
  bool next(QuantizedSignal& out);
  std::optional<QuantizedSignal> next();

 private:
  void check_cap(double cap) const;

  Resolution m_;
  std::vector<IndexRange> ranges_;
  std::vector<std::uint64_t> current_;
  double count_ = 0.0;
  bool started_ = false;
  bool done_ = false;
};

}  // namespace mcp
