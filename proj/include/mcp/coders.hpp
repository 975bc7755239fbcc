#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcp/bits.hpp"
#include "mcp/quantize.hpp"

namespace mcp {

enum class CoderId : std::uint8_t {
  kSparse = 1,
  kPiecewisePoly = 2,
  kLowRank = 3,
  kLZ = 4,
  kDictionary = 5,
};

std::string to_string(CoderId id);
CoderId coder_id_from_string(const std::string& name);

// Every member coder opens its codeword with this many bits holding its id.
inline constexpr int kTagBits = 3;

// Prefix-free code for grid signals of known (n, m). The code length of a
// signal is the proxy for its quantized Kolmogorov complexity.
class Coder {
 public:
  virtual ~Coder() = default;

  virtual CoderId id() const = 0;
  virtual std::string describe() const = 0;

  // nullopt when the signal lies outside the coder's representable set.
  virtual std::optional<BitString> try_encode(const QuantizedSignal& q) const = 0;
  virtual std::optional<std::size_t> try_length(const QuantizedSignal& q) const;
  // Consumes exactly one codeword from the reader.
  virtual QuantizedSignal decode(BitReader& in, std::size_t n,
                                 Resolution m) const = 0;
  // Bits spent before any signal-dependent payload.
  virtual std::size_t header_bits(std::size_t n, Resolution m) const = 0;
  // Coders whose length depends only on the support size report it here;
  // exhaustive solvers then enumerate support levels instead of the grid.
  virtual std::optional<std::size_t> bits_for_support_size(
      std::size_t n, Resolution m, std::size_t k) const;

  // Throwing conveniences.
  BitString encode(const QuantizedSignal& q) const;
  std::size_t length(const QuantizedSignal& q) const;
  QuantizedSignal decode(const BitString& bits, std::size_t n,
                         Resolution m) const;
};

using CoderPtr = std::shared_ptr<const Coder>;

// Tag, k in ceil(log2(n+1)) bits, support rank in ceil(log2 C(n,k)) bits,
// then m bits per nonzero value.
class SparseCoder final : public Coder {
 public:
  // Slack C in bits <= k m + n h(k/n) + 0.5 log2 n + C, valid for n <= 512:
  // tag (3) + two ceilings (2) + log2(n+1) - log2(n) (1) + 0.5 log2 512.
  static constexpr double kBoundConstant = 10.5;

  CoderId id() const override { return CoderId::kSparse; }
  std::string describe() const override { return "sparse"; }
  std::optional<BitString> try_encode(const QuantizedSignal& q) const override;
  std::optional<std::size_t> try_length(const QuantizedSignal& q) const override;
  using Coder::decode;
  QuantizedSignal decode(BitReader& in, std::size_t n,
                         Resolution m) const override;
  std::size_t header_bits(std::size_t n, Resolution m) const override;
  std::optional<std::size_t> bits_for_support_size(
      std::size_t n, Resolution m, std::size_t k) const override;
};

// Tag, one flag bit, then either the raw nm index bits or an LZ78 parse of
// them, whichever is shorter.
class LZCoder final : public Coder {
 public:
  static constexpr std::size_t kHeaderBits = kTagBits + 1;

  CoderId id() const override { return CoderId::kLZ; }
  std::string describe() const override { return "lz"; }
  std::optional<BitString> try_encode(const QuantizedSignal& q) const override;
  std::optional<std::size_t> try_length(const QuantizedSignal& q) const override;
  using Coder::decode;
  QuantizedSignal decode(BitReader& in, std::size_t n,
                         Resolution m) const override;
  std::size_t header_bits(std::size_t, Resolution) const override {
    return kHeaderBits;
  }
};

// Concatenated m-bit indices, most significant bit first.
BitString index_bits(const QuantizedSignal& q);
// Bit count of the LZ78 parse of a bit string (phrase i costs ceil(log2 i)
// index bits plus one literal; a trailing repeated phrase has no literal).
std::size_t lz78_length(const BitString& s);
BitString lz78_encode(const BitString& s);
BitString lz78_decode(BitReader& in, std::size_t length);
// LZ78 path of the LZ coder alone: header plus parse length.
std::size_t lz_bits(const QuantizedSignal& q);

// Polynomial piece starting at sample index `start`. For the global basis
// the polynomial is in t = i/n with coefficients in [0,1] summing below 1.
// For the local basis it is in s = (i - start)/n with |a_j| <= 1, each
// coefficient carrying a sign bit.
struct PolySegment {
  std::size_t start = 0;
  std::vector<double> coeffs;
};

enum class PolyBasis : std::uint8_t { kGlobalUnsigned = 0, kLocalSigned = 1 };

class PiecewisePolyCoder final : public Coder {
 public:
  PiecewisePolyCoder(std::size_t max_breakpoints, std::size_t max_degree,
                     PolyBasis basis = PolyBasis::kGlobalUnsigned);

  CoderId id() const override { return CoderId::kPiecewisePoly; }
  std::string describe() const override;
  std::optional<BitString> try_encode(const QuantizedSignal& q) const override;
  using Coder::decode;
  QuantizedSignal decode(BitReader& in, std::size_t n,
                         Resolution m) const override;
  // Tag plus the two delta-coded counts at Q = N = 0.
  std::size_t header_bits(std::size_t n, Resolution m) const override;

  std::size_t max_breakpoints() const { return max_q_; }
  std::size_t max_degree() const { return max_n_; }
  PolyBasis basis() const { return basis_; }

  // Coefficient resolution m' = m + ceil(log2(N+1)) + 1.
  static int coefficient_bits(Resolution m, std::size_t degree);

  // Encodes a segment list directly, truncating coefficients at m'. Throws
  // UnrepresentableError on constraint violations.
  BitString encode_segments(const std::vector<PolySegment>& segments,
                            std::size_t n, Resolution m) const;
  std::vector<PolySegment> decode_segments(BitReader& in, std::size_t n,
                                           Resolution m) const;
  // Real-valued samples of a segment list at i/n.
  Eigen::VectorXd evaluate(const std::vector<PolySegment>& segments,
                           std::size_t n) const;
  // Grid signal nearest to the samples of a (quantized) segment list.
  QuantizedSignal round_samples(const std::vector<PolySegment>& segments,
                                std::size_t n, Resolution m) const;

  // Bit slack for the class bound with Q <= max_breakpoints, N <= max_degree.
  double bound_constant() const;

 private:
  void validate(const std::vector<PolySegment>& segments, std::size_t n) const;
  std::optional<std::vector<PolySegment>> fit(const QuantizedSignal& q,
                                              std::size_t degree) const;

  std::size_t max_q_;
  std::size_t max_n_;
  PolyBasis basis_;
};

struct LowRankResolutions {
  int m_sigma;
  int m_u;
  int m_v;
};
LowRankResolutions low_rank_resolutions(Resolution m, std::size_t r);

// Quantized truncated SVD of a rows x cols matrix with sigma_max <= 1.
// Codeword: tag, empty flag, delta(r), U (r*rows entries at m_u bits),
// V (r*cols entries at m_v bits), sigma (r entries at m_sigma bits).
// As a grid-signal coder it reads a length rows*cols row-major signal as
// X = 2q - 1 and codes the factors one bit finer so that rounding recovers q.
class LowRankCoder final : public Coder {
 public:
  static constexpr std::size_t kHeaderBits = kTagBits + 1;

  LowRankCoder(std::size_t rows, std::size_t cols, std::size_t max_rank);

  CoderId id() const override { return CoderId::kLowRank; }
  std::string describe() const override;
  std::optional<BitString> try_encode(const QuantizedSignal& q) const override;
  using Coder::decode;
  QuantizedSignal decode(BitReader& in, std::size_t n,
                         Resolution m) const override;
  std::size_t header_bits(std::size_t, Resolution) const override {
    return kHeaderBits;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t max_rank() const { return max_rank_; }

  // Throws DomainError when sigma_max(X) > 1.
  BitString encode_matrix(const Eigen::MatrixXd& X, std::size_t r,
                          Resolution m) const;
  Eigen::MatrixXd decode_matrix(BitReader& in, Resolution m) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t max_rank_;
};

// Minimum over members plus a fixed-width member index.
class DictionaryCoder final : public Coder {
 public:
  explicit DictionaryCoder(std::vector<CoderPtr> members);

  CoderId id() const override { return CoderId::kDictionary; }
  std::string describe() const override;
  std::optional<BitString> try_encode(const QuantizedSignal& q) const override;
  std::optional<std::size_t> try_length(const QuantizedSignal& q) const override;
  using Coder::decode;
  QuantizedSignal decode(BitReader& in, std::size_t n,
                         Resolution m) const override;
  std::size_t header_bits(std::size_t, Resolution) const override {
    return index_bits_;
  }

  const std::vector<CoderPtr>& members() const { return members_; }

 private:
  std::vector<CoderPtr> members_;
  int index_bits_;
};

// Sparse, global piecewise-polynomial (Q <= 3, N <= 2) and LZ members.
CoderPtr default_dictionary();
CoderPtr make_coder(CoderId id);

struct KidEstimate {
  double kappa;
  Resolution m;
  std::size_t n;
  CoderId coder;
  std::size_t bits;
};
KidEstimate kid(const Coder& coder, const QuantizedSignal& q);

// Cheapest grid point within l-infinity distance 2^-m of x; ties go to the
// lexicographically smallest. Throws BudgetError when the window exceeds cap.
QuantizedSignal phi_m(const Coder& coder, const Eigen::VectorXd& x,
                      Resolution m, double cap = 1e6);

// ceil(log2 C(n,k)), exact.
std::size_t ceil_log2_binomial(std::size_t n, std::size_t k);
// ceil(log2 C(n,k)) + ceil(log2(n+1)).
std::size_t sparse_support_bits(std::size_t n, std::size_t k);

double log_star(double n);
double binary_entropy(double alpha);

// Code length of a segment list under the global-basis coder with enough
// capacity for it.
std::size_t encode_piecewise_poly(const std::vector<PolySegment>& segments,
                                  std::size_t n, Resolution m);
std::size_t encode_low_rank(const Eigen::MatrixXd& X, std::size_t r,
                            Resolution m);

}  // namespace mcp
