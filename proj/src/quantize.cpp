#include "mcp/quantize.hpp"

#include <algorithm>
#include <sstream>

namespace mcp {

QuantizedSignal::QuantizedSignal(std::vector<std::uint64_t> indices,
                                 Resolution m)
    : indices_(std::move(indices)), m_(m) {
  if (indices_.empty()) throw DimensionError("QuantizedSignal: empty signal");
  for (std::uint64_t j : indices_) {
    if (j > m_.max_index()) {
      throw DomainError("QuantizedSignal: index " + std::to_string(j) +
                        " exceeds 2^m - 1");
    }
  }
}

QuantizedSignal QuantizedSignal::zeros(std::size_t n, Resolution m) {
  return QuantizedSignal(std::vector<std::uint64_t>(n, 0), m);
}

Eigen::VectorXd QuantizedSignal::values() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(indices_.size()));
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = value(i);
  }
  return v;
}

std::size_t QuantizedSignal::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(indices_.begin(), indices_.end(),
                    [](std::uint64_t j) { return j != 0; }));
}

namespace detail {
void check_unit_interval(double v, std::size_t i) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << "coordinate " << i << " = " << v << " lies outside [0,1]";
    throw DomainError(msg.str());
  }
}
}  // namespace detail

IndexRange window_range(double v, Resolution m) {
  const double scaled = std::ldexp(v, m.bits());
  const double lo = std::max(0.0, std::ceil(scaled - 1.0));
  const double hi =
      std::min(static_cast<double>(m.max_index()), std::floor(scaled + 1.0));
  if (lo > hi) {
    throw DomainError("window around " + std::to_string(v) +
                      " contains no grid point");
  }
  return {static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)};
}

double grid_count(std::size_t n, Resolution m) {
  return std::ldexp(1.0, static_cast<int>(n) * m.bits());
}

GridEnumerator::GridEnumerator(std::size_t n, Resolution m, double cap)
    : m_(m), ranges_(n, IndexRange{0, m.max_index()}), current_(n, 0) {
  if (n == 0) throw DimensionError("GridEnumerator: n must be positive");
  count_ = grid_count(n, m);
  check_cap(cap);
}

GridEnumerator::GridEnumerator(const Eigen::VectorXd& center, Resolution m,
                               double cap)
    : m_(m) {
  if (center.size() == 0) {
    throw DimensionError("GridEnumerator: empty window center");
  }
  count_ = 1.0;
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    detail::check_unit_interval(center[i], static_cast<std::size_t>(i));
    const IndexRange r = window_range(center[i], m);
    ranges_.push_back(r);
    current_.push_back(r.lo);
    count_ *= static_cast<double>(r.hi - r.lo + 1);
  }
  check_cap(cap);
}

void GridEnumerator::check_cap(double cap) const {
  if (count_ > cap) {
    std::ostringstream msg;
    msg << "grid enumeration of " << count_ << " points exceeds cap " << cap;
    throw BudgetError(msg.str(), count_);
  }
}

bool GridEnumerator::next(QuantizedSignal& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
  } else {
    std::size_t i = current_.size();
    while (i > 0) {
      --i;
      if (current_[i] < ranges_[i].hi) {
        ++current_[i];
        break;
      }
      current_[i] = ranges_[i].lo;
      if (i == 0) {
        done_ = true;
        return false;
      }
    }
  }
  out = QuantizedSignal(current_, m_);
  return true;
}

std::optional<QuantizedSignal> GridEnumerator::next() {
  QuantizedSignal q = QuantizedSignal::zeros(current_.size(), m_);
  if (!next(q)) return std::nullopt;
  return q;
}

}  // namespace mcp
