#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "mcp/coders.hpp"
#include "mcp/errors.hpp"
#include "mcp/rng.hpp"
#include "mcp/signals.hpp"

using namespace mcp;

namespace {

std::vector<QuantizedSignal> all_grid_points(std::size_t n, Resolution m) {
  std::vector<QuantizedSignal> out;
  GridEnumerator e(n, m, 1e6);
  QuantizedSignal q = QuantizedSignal::zeros(n, m);
  while (e.next(q)) out.push_back(q);
  return out;
}

QuantizedSignal random_sparse(std::size_t n, std::size_t k, Resolution m, Rng& rng) {
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = i;
  rng.shuffle(pos);
  std::vector<std::uint64_t> idx(n, 0);
  for (std::size_t i = 0; i < k; ++i) idx[pos[i]] = 1 + rng.below(m.max_index());
  return QuantizedSignal(idx, m);
}

// Codewords of one (n, m) must be prefix-free and satisfy Kraft's inequality.
void expect_prefix_free(const Coder& coder, std::size_t n, Resolution m) {
  std::vector<BitString> words;
  for (const auto& q : all_grid_points(n, m)) {
    if (auto w = coder.try_encode(q)) {
      ASSERT_EQ(coder.decode(*w, n, m), q) << coder.describe();
      ASSERT_EQ(coder.try_length(q), w->size());
      words.push_back(*w);
    }
  }
  double kraft = 0.0;
  for (const auto& w : words) kraft += std::ldexp(1.0, -static_cast<int>(w.size()));
  EXPECT_LE(kraft, 1.0) << coder.describe();
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (i != j) ASSERT_FALSE(words[i].is_proper_prefix_of(words[j])) << coder.describe();
    }
  }
}

}  // namespace

// Values from tests/oracle/coders_oracle.py (exact integer arithmetic).
TEST(Combinatorics, CeilLog2Binomial) {
  EXPECT_EQ(ceil_log2_binomial(16, 3), 10u);
  EXPECT_EQ(ceil_log2_binomial(30, 15), 28u);
  EXPECT_EQ(ceil_log2_binomial(64, 17), 51u);
  EXPECT_EQ(ceil_log2_binomial(256, 128), 252u);
  EXPECT_EQ(ceil_log2_binomial(512, 200), 490u);
  EXPECT_EQ(ceil_log2_binomial(10, 0), 0u);
  EXPECT_EQ(ceil_log2_binomial(10, 10), 0u);
}

TEST(Combinatorics, EntropyAndLogStar) {
  EXPECT_NEAR(binary_entropy(0.25), 0.81127812445913286391, 1e-15);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(log_star(1000), 16.643856189774724696, 1e-12);
  EXPECT_EQ(log_star(16), 8.0);
  EXPECT_THROW(binary_entropy(1.5), DomainError);
}

TEST(SparseCoder, KnownLength) {
  // tag 3 + k field ceil(log2 17) = 5 + rank ceil(log2 560) = 10 + 3 * 4.
  Rng rng(1);
  const SparseCoder c;
  const QuantizedSignal q = random_sparse(16, 3, Resolution(4), rng);
  EXPECT_EQ(c.length(q), 30u);
  EXPECT_EQ(c.bits_for_support_size(16, Resolution(4), 3), 30u);
  EXPECT_EQ(c.length(QuantizedSignal::zeros(16, Resolution(4))), 8u);
}

TEST(SparseCoderProperty, RoundTripAndLevelFormula) {
  Rng rng(2);
  const SparseCoder c;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(300);
    const std::size_t k = rng.below(n + 1);
    const Resolution m(1 + static_cast<int>(rng.below(16)));
    const QuantizedSignal q = random_sparse(n, k, m, rng);
    const BitString w = c.encode(q);
    ASSERT_EQ(c.decode(w, n, m), q);
    ASSERT_EQ(w.size(), c.bits_for_support_size(n, m, k).value());
    ASSERT_LE(static_cast<double>(w.size()), sparse_bound_bits(n, k, m));
  }
}

TEST(SparseCoderProperty, LengthGrowsWithSupport) {
  const SparseCoder c;
  for (std::size_t n : {8, 64, 256}) {
    for (std::size_t k = 0; k < n / 2; ++k) {
      ASSERT_LT(c.bits_for_support_size(n, Resolution(6), k).value(),
                c.bits_for_support_size(n, Resolution(6), k + 1).value());
    }
  }
}

TEST(LZ78, KnownParseLengths) {
  // From tests/oracle/coders_oracle.py, an independent LZ78 parse.
  EXPECT_EQ(lz78_length(BitString("0000000000")), 9u);
  EXPECT_EQ(lz78_length(BitString("0110100110010110")), 24u);
  EXPECT_EQ(lz78_length(BitString(std::string(32, '1'))), 24u);
  EXPECT_EQ(lz78_length(BitString("0101010101010101010")), 24u);
}

TEST(LZ78Property, RoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    BitString s;
    const std::size_t len = rng.below(400);
    const bool biased = rng.below(2) == 0;
    for (std::size_t i = 0; i < len; ++i) s.push_back(biased ? rng.below(8) == 0 : rng.below(2) == 1);
    const BitString code = lz78_encode(s);
    ASSERT_EQ(code.size(), lz78_length(s));
    BitReader r(code);
    ASSERT_EQ(lz78_decode(r, s.size()), s);
    ASSERT_EQ(r.remaining(), 0u);
  }
}

TEST(LZCoder, NeverExceedsRawPlusHeader) {
  Rng rng(4);
  const LZCoder c;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(100);
    const Resolution m(1 + static_cast<int>(rng.below(12)));
    std::vector<std::uint64_t> idx(n);
    for (auto& v : idx) v = rng.below(m.levels());
    const QuantizedSignal q(idx, m);
    const BitString w = c.encode(q);
    ASSERT_LE(w.size(), n * m.bits() + LZCoder::kHeaderBits);
    ASSERT_EQ(c.decode(w, n, m), q);
  }
  // Constant signals compress well below the raw length.
  const QuantizedSignal zeros = QuantizedSignal::zeros(512, Resolution(8));
  EXPECT_LT(c.length(zeros), 512u * 8u / 4u);
}

TEST(PrefixFree, EveryCoderOnSmallGrids) {
  expect_prefix_free(SparseCoder(), 3, Resolution(2));
  expect_prefix_free(LZCoder(), 3, Resolution(2));
  expect_prefix_free(PiecewisePolyCoder(1, 1), 3, Resolution(2));
  expect_prefix_free(PiecewisePolyCoder(2, 1, PolyBasis::kLocalSigned), 3, Resolution(2));
  expect_prefix_free(LowRankCoder(2, 2, 1), 4, Resolution(1));
  expect_prefix_free(*default_dictionary(), 3, Resolution(2));
}

TEST(PiecewisePoly, SegmentRoundTripMatchesSamples) {
  const PiecewisePolyCoder c(2, 2);
  const std::vector<PolySegment> segs = {{0, {0.25, 0.5}}, {5, {0.125}}, {9, {0.1, 0.2, 0.3}}};
  const Resolution m(6);
  const BitString w = c.encode_segments(segs, 12, m);
  BitReader r(w);
  const auto back = c.decode_segments(r, 12, m);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[1].start, 5u);
  const Eigen::VectorXd a = c.evaluate(segs, 12);
  const Eigen::VectorXd b = c.evaluate(back, 12);
  // Coefficients are truncated at m' = m + ceil(log2(N+1)) + 1 bits, so
  // each sample moves by less than (N+1) 2^-m' <= 2^-(m+1).
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), std::ldexp(1.0, -(m.bits() + 1)));
}

TEST(PiecewisePoly, ConstraintViolationsAreUnrepresentable) {
  const PiecewisePolyCoder c(1, 1);
  EXPECT_THROW(c.encode_segments({{0, {0.6, 0.5}}}, 8, Resolution(4)), UnrepresentableError);
  EXPECT_THROW(c.encode_segments({{0, {0.1}}, {3, {0.1}}, {5, {0.1}}}, 8, Resolution(4)),
               UnrepresentableError);
  EXPECT_THROW(c.encode_segments({{0, {0.1, 0.1, 0.1}}}, 8, Resolution(4)),
               UnrepresentableError);
  EXPECT_THROW(c.encode_segments({{1, {0.1}}}, 8, Resolution(4)), UnrepresentableError);
}

TEST(PiecewisePolyProperty, GeneratedSignalsAreRepresentable) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SignalSpec s;
    s.cls = SignalClass::kPiecewisePoly;
    s.n = 32;
    s.breakpoints = 3;
    s.degree = 2;
    s.m = Resolution(6);
    s.seed = seed;
    const GeneratedSignal g = generate(s);
    const auto* coder = dynamic_cast<const PiecewisePolyCoder*>(g.coder.get());
    ASSERT_NE(coder, nullptr);
    BitReader r(g.code);
    const QuantizedSignal q = coder->round_samples(coder->decode_segments(r, s.n, s.m), s.n, s.m);
    const auto w = coder->try_encode(q);
    ASSERT_TRUE(w.has_value());
    ASSERT_EQ(coder->decode(*w, s.n, s.m), q);
    ASSERT_LE(static_cast<double>(g.cert.bits), piecewise_poly_bound_bits(*coder, s.n, s.m));
  }
}

TEST(LowRank, MatrixRoundTripWithinTwoSteps) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SignalSpec s;
    s.cls = SignalClass::kLowRank;
    s.rows = 5;
    s.cols = 7;
    s.rank = 1 + seed % 3;
    s.m = Resolution(2 + static_cast<int>(seed % 7));
    s.seed = seed;
    const GeneratedSignal g = generate(s);
    const LowRankCoder c(5, 7, s.rank);
    BitReader r(g.code);
    const Eigen::MatrixXd X = c.decode_matrix(r, s.m);
    ASSERT_LE((X - *g.matrix).cwiseAbs().maxCoeff(), 2.0 * s.m.step());
    ASSERT_LE(static_cast<double>(g.cert.bits), low_rank_bound_bits(5, 7, s.rank, s.m));
  }
}

TEST(LowRank, RejectsLargeSpectralNorm) {
  const LowRankCoder c(2, 2, 2);
  EXPECT_THROW(c.encode_matrix(2.0 * Eigen::MatrixXd::Identity(2, 2), 2, Resolution(4)), DomainError);
}

TEST(Dictionary, MinimumPlusIndex) {
  const auto dict = default_dictionary();
  Rng rng(5);
  const SparseCoder sparse;
  const LZCoder lz;
  const PiecewisePolyCoder pp(3, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const QuantizedSignal q = random_sparse(12, rng.below(6), Resolution(4), rng);
    std::size_t best = std::min(sparse.length(q), lz.length(q));
    if (auto b = pp.try_length(q)) best = std::min(best, *b);
    ASSERT_EQ(dict->length(q), best + 2);
    ASSERT_EQ(dict->decode(dict->encode(q), 12, Resolution(4)), q);
  }
}

TEST(Decode, CorruptedCodewordsThrow) {
  const SparseCoder c;
  Rng rng(6);
  const QuantizedSignal q = random_sparse(10, 2, Resolution(3), rng);
  BitString w = c.encode(q);
  BitString truncated;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) truncated.push_back(w[i]);
  EXPECT_THROW(c.decode(truncated, 10, Resolution(3)), DecodeError);
  BitString longer = w;
  longer.push_back(true);
  EXPECT_THROW(c.decode(longer, 10, Resolution(3)), DecodeError);
  EXPECT_THROW(LZCoder().decode(w, 10, Resolution(3)), DecodeError);
}

TEST(PhiM, CheapestPointInWindow) {
  // At m = 2, 0.26 lies more than a step above 0, so its window is
  // {1/4, 1/2}; 0.1 may still drop to zero.
  Eigen::VectorXd x(3);
  x << 0.26, 0.9, 0.1;
  const QuantizedSignal q = phi_m(SparseCoder(), x, Resolution(2));
  EXPECT_EQ(q.indices(), (std::vector<std::uint64_t>{1, 3, 0}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(q.value(i) - x[static_cast<Eigen::Index>(i)]), 0.25);
  }
  const KidEstimate k = kid(SparseCoder(), q);
  EXPECT_EQ(k.bits, SparseCoder().length(q));
  EXPECT_DOUBLE_EQ(k.kappa, static_cast<double>(k.bits) / 2.0);
}

TEST(PhiMProperty, NeverCostlierThanTruncation) {
  Rng rng(7);
  const auto dict = default_dictionary();
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(4);
    for (int i = 0; i < 4; ++i) x[i] = rng.below(2) ? rng.uniform() : 0.0;
    const Resolution m(3);
    ASSERT_LE(dict->length(phi_m(*dict, x, m)), dict->length(truncate(x, m)));
  }
}

TEST(MakeCoder, Names) {
  EXPECT_EQ(coder_id_from_string("sparse"), CoderId::kSparse);
  EXPECT_EQ(to_string(CoderId::kDictionary), "dictionary");
  EXPECT_THROW(coder_id_from_string("huffman"), ConfigError);
  EXPECT_THROW(make_coder(CoderId::kLowRank), ConfigError);
}
