#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcp/coders.hpp"
#include "mcp/errors.hpp"

namespace mcp {

namespace {

std::uint64_t quantize_signed(double u, int bits) {
  const double top = std::ldexp(1.0, bits) - 1.0;
  const double idx = std::floor(std::ldexp(u + 1.0, bits - 1));
  return static_cast<std::uint64_t>(std::clamp(idx, 0.0, top));
}

double dequantize_signed(std::uint64_t idx, int bits) {
  return std::ldexp(static_cast<double>(idx), 1 - bits) - 1.0;
}

std::uint64_t quantize_unit(double s, int bits) {
  const double top = std::ldexp(1.0, bits) - 1.0;
  return static_cast<std::uint64_t>(
      std::clamp(std::floor(std::ldexp(s, bits)), 0.0, top));
}

constexpr double kSigmaSlack = 1e-12;

}  // namespace

LowRankResolutions low_rank_resolutions(Resolution m, std::size_t r) {
  if (r == 0) throw DomainError("low_rank_resolutions: r must be positive");
  const int m_sigma = m.bits() + ceil_log2(3 * static_cast<std::uint64_t>(r)) - 1;
  return {m_sigma, m_sigma + 1, m_sigma + 1};
}

LowRankCoder::LowRankCoder(std::size_t rows, std::size_t cols,
                           std::size_t max_rank)
    : rows_(rows), cols_(cols), max_rank_(std::min({max_rank, rows, cols})) {
  if (rows == 0 || cols == 0) throw DimensionError("LowRankCoder: empty shape");
}

std::string LowRankCoder::describe() const {
  std::ostringstream s;
  s << "low_rank(" << rows_ << "x" << cols_ << ",r<=" << max_rank_ << ")";
  return s.str();
}

namespace {

BitString write_factors(const Eigen::MatrixXd& X, std::size_t r, Resolution m,
                        CoderId id, bool require_rank) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() > 0 && s[0] > 1.0 + kSigmaSlack) {
    std::ostringstream msg;
    msg << "sigma_max = " << s[0] << " exceeds 1";
    throw DomainError(msg.str());
  }
  if (r > static_cast<std::size_t>(s.size())) {
    throw DomainError("rank exceeds matrix dimensions");
  }
  if (require_rank && static_cast<Eigen::Index>(r) < s.size() &&
      s[static_cast<Eigen::Index>(r)] > 1e-9) {
    throw DomainError("matrix rank exceeds r");
  }

  BitString out;
  out.write_uint(static_cast<std::uint64_t>(id), kTagBits);
  out.push_back(r == 0);
  if (r == 0) return out;
  out.write_delta(r);
  const LowRankResolutions res = low_rank_resolutions(m, r);
  const Eigen::MatrixXd& U = svd.matrixU();
  const Eigen::MatrixXd& V = svd.matrixV();
  for (std::size_t k = 0; k < r; ++k) {
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
      out.write_uint(quantize_signed(U(i, static_cast<Eigen::Index>(k)), res.m_u), res.m_u);
    }
  }
  for (std::size_t k = 0; k < r; ++k) {
    for (Eigen::Index j = 0; j < V.rows(); ++j) {
      out.write_uint(quantize_signed(V(j, static_cast<Eigen::Index>(k)), res.m_v), res.m_v);
    }
  }
  for (std::size_t k = 0; k < r; ++k) {
    out.write_uint(quantize_unit(s[static_cast<Eigen::Index>(k)], res.m_sigma),
                   res.m_sigma);
  }
  return out;
}

}  // namespace

BitString LowRankCoder::encode_matrix(const Eigen::MatrixXd& X, std::size_t r,
                                      Resolution m) const {
  if (static_cast<std::size_t>(X.rows()) != rows_ ||
      static_cast<std::size_t>(X.cols()) != cols_) {
    throw DimensionError("encode_matrix: shape mismatch");
  }
  return write_factors(X, r, m, id(), true);
}

Eigen::MatrixXd LowRankCoder::decode_matrix(BitReader& in, Resolution m) const {
  if (in.read_uint(kTagBits) != static_cast<std::uint64_t>(id())) {
    throw DecodeError("low_rank: tag mismatch");
  }
  const auto rows = static_cast<Eigen::Index>(rows_);
  const auto cols = static_cast<Eigen::Index>(cols_);
  if (in.read_bit()) return Eigen::MatrixXd::Zero(rows, cols);
  const std::uint64_t r = in.read_delta();
  if (r > std::min(rows_, cols_)) throw DecodeError("low_rank: rank too large");
  const LowRankResolutions res = low_rank_resolutions(m, r);
  const auto rr = static_cast<Eigen::Index>(r);
  Eigen::MatrixXd U(rows, rr), V(cols, rr);
  Eigen::VectorXd s(rr);
  for (Eigen::Index k = 0; k < rr; ++k) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      U(i, k) = dequantize_signed(in.read_uint(res.m_u), res.m_u);
    }
  }
  for (Eigen::Index k = 0; k < rr; ++k) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      V(j, k) = dequantize_signed(in.read_uint(res.m_v), res.m_v);
    }
  }
  for (Eigen::Index k = 0; k < rr; ++k) {
    s[k] = std::ldexp(static_cast<double>(in.read_uint(res.m_sigma)), -res.m_sigma);
  }
  return U * s.asDiagonal() * V.transpose();
}

namespace {

QuantizedSignal matrix_to_grid(const Eigen::MatrixXd& X, Resolution m) {
  std::vector<std::uint64_t> idx;
  idx.reserve(static_cast<std::size_t>(X.size()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double v = std::floor(std::ldexp((X(i, j) + 1.0) / 2.0, m.bits()) + 0.5);
      idx.push_back(static_cast<std::uint64_t>(
          std::clamp(v, 0.0, static_cast<double>(m.max_index()))));
    }
  }
  return QuantizedSignal(std::move(idx), m);
}

}  // namespace

std::optional<BitString> LowRankCoder::try_encode(const QuantizedSignal& q) const {
  if (q.size() != rows_ * cols_) return std::nullopt;
  const Resolution m = q.resolution();
  if (m.bits() >= Resolution::kMax) return std::nullopt;
  const Resolution fine(m.bits() + 1);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          2.0 * q.value(i * cols_ + j) - 1.0;
    }
  }
  for (std::size_t r = 0; r <= max_rank_; ++r) {
    BitString code;
    try {
      code = write_factors(X, r, fine, id(), false);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    BitReader reader(code);
    if (matrix_to_grid(decode_matrix(reader, fine), m) == q) return code;
  }
  return std::nullopt;
}

QuantizedSignal LowRankCoder::decode(BitReader& in, std::size_t n,
                                     Resolution m) const {
  if (n != rows_ * cols_) throw DecodeError("low_rank: signal length mismatch");
  if (m.bits() >= Resolution::kMax) throw DecodeError("low_rank: resolution too fine");
  const Resolution fine(m.bits() + 1);
  return matrix_to_grid(decode_matrix(in, fine), m);
}

std::size_t encode_low_rank(const Eigen::MatrixXd& X, std::size_t r,
                            Resolution m) {
  const LowRankCoder coder(static_cast<std::size_t>(X.rows()),
                           static_cast<std::size_t>(X.cols()), r);
  return coder.encode_matrix(X, r, m).size();
}

}  // namespace mcp
