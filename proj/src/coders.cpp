#include "mcp/coders.hpp"

#include <cmath>
#include <sstream>

#include "mcp/errors.hpp"

namespace mcp {

std::string to_string(CoderId id) {
  switch (id) {
    case CoderId::kSparse: return "sparse";
    case CoderId::kPiecewisePoly: return "piecewise_poly";
    case CoderId::kLowRank: return "low_rank";
    case CoderId::kLZ: return "lz";
    case CoderId::kDictionary: return "dictionary";
  }
  return "unknown";
}

CoderId coder_id_from_string(const std::string& name) {
  for (CoderId id : {CoderId::kSparse, CoderId::kPiecewisePoly,
                     CoderId::kLowRank, CoderId::kLZ, CoderId::kDictionary}) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown coder '" + name + "'");
}

std::optional<std::size_t> Coder::try_length(const QuantizedSignal& q) const {
  auto bits = try_encode(q);
  if (!bits) return std::nullopt;
  return bits->size();
}

std::optional<std::size_t> Coder::bits_for_support_size(std::size_t,
                                                        Resolution,
                                                        std::size_t) const {
  return std::nullopt;
}

BitString Coder::encode(const QuantizedSignal& q) const {
  auto bits = try_encode(q);
  if (!bits) {
    throw UnrepresentableError(describe() + ": signal is not representable");
  }
  return std::move(*bits);
}

std::size_t Coder::length(const QuantizedSignal& q) const {
  auto bits = try_length(q);
  if (!bits) {
    throw UnrepresentableError(describe() + ": signal is not representable");
  }
  return *bits;
}

QuantizedSignal Coder::decode(const BitString& bits, std::size_t n,
                              Resolution m) const {
  BitReader reader(bits);
  QuantizedSignal q = decode(reader, n, m);
  if (reader.remaining() != 0) {
    throw DecodeError(describe() + ": trailing bits after codeword");
  }
  return q;
}

DictionaryCoder::DictionaryCoder(std::vector<CoderPtr> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw DomainError("DictionaryCoder: no members");
  index_bits_ = ceil_log2(members_.size());
}

std::string DictionaryCoder::describe() const {
  std::ostringstream s;
  s << "dictionary(";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    s << (i ? "," : "") << members_[i]->describe();
  }
  s << ")";
  return s.str();
}

std::optional<std::size_t> DictionaryCoder::try_length(
    const QuantizedSignal& q) const {
  std::optional<std::size_t> best;
  for (const auto& member : members_) {
    const auto bits = member->try_length(q);
    if (bits && (!best || *bits < *best)) best = bits;
  }
  if (!best) return std::nullopt;
  return *best + static_cast<std::size_t>(index_bits_);
}

std::optional<BitString> DictionaryCoder::try_encode(
    const QuantizedSignal& q) const {
  std::optional<std::size_t> best_bits;
  std::size_t best = 0;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto bits = members_[i]->try_length(q);
    if (bits && (!best_bits || *bits < *best_bits)) {
      best_bits = bits;
      best = i;
    }
  }
  if (!best_bits) return std::nullopt;
  BitString out;
  out.write_uint(best, index_bits_);
  out.append(members_[best]->encode(q));
  return out;
}

QuantizedSignal DictionaryCoder::decode(BitReader& in, std::size_t n,
                                        Resolution m) const {
  const std::uint64_t i = in.read_uint(index_bits_);
  if (i >= members_.size()) throw DecodeError("dictionary: member index out of range");
  return members_[i]->decode(in, n, m);
}

CoderPtr default_dictionary() {
  return std::make_shared<DictionaryCoder>(std::vector<CoderPtr>{
      std::make_shared<SparseCoder>(),
      std::make_shared<PiecewisePolyCoder>(3, 2),
      std::make_shared<LZCoder>(),
  });
}

CoderPtr make_coder(CoderId id) {
  switch (id) {
    case CoderId::kSparse: return std::make_shared<SparseCoder>();
    case CoderId::kPiecewisePoly: return std::make_shared<PiecewisePolyCoder>(3, 2);
    case CoderId::kLZ: return std::make_shared<LZCoder>();
    case CoderId::kDictionary: return default_dictionary();
    case CoderId::kLowRank:
      throw ConfigError("low_rank coder needs a matrix shape");
  }
  throw ConfigError("unknown coder id");
}

KidEstimate kid(const Coder& coder, const QuantizedSignal& q) {
  const std::size_t bits = coder.length(q);
  return {static_cast<double>(bits) / q.resolution().bits(), q.resolution(),
          q.size(), coder.id(), bits};
}

QuantizedSignal phi_m(const Coder& coder, const Eigen::VectorXd& x,
                      Resolution m, double cap) {
  GridEnumerator grid(x, m, cap);
  std::optional<QuantizedSignal> best;
  std::size_t best_bits = 0;
  QuantizedSignal u = QuantizedSignal::zeros(static_cast<std::size_t>(x.size()), m);
  while (grid.next(u)) {
    const auto bits = coder.try_length(u);
    if (bits && (!best || *bits < best_bits)) {
      best = u;
      best_bits = *bits;
    }
  }
  if (!best) {
    throw UnrepresentableError(coder.describe() +
                               ": no grid point in the window is representable");
  }
  return *best;
}

double log_star(double n) {
  if (!(n >= 1.0)) throw DomainError("log_star needs n >= 1");
  const double c = std::ceil(std::log2(n));
  return c + 2.0 * std::log2(std::max(c, 1.0));
}

double binary_entropy(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("binary_entropy needs alpha in [0,1]");
  }
  if (alpha == 0.0 || alpha == 1.0) return 0.0;
  return -alpha * std::log2(alpha) - (1.0 - alpha) * std::log2(1.0 - alpha);
}

}  // namespace mcp
