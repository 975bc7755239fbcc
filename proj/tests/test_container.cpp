#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "mcp/container.hpp"
#include "mcp/errors.hpp"

using namespace mcp;

TEST(Bitstream, RoundTripAndLayout) {
  BitstreamFile f;
  f.coder = CoderId::kLZ;
  f.n = 300;
  f.m = 7;
  f.bits = BitString("1100101");
  const auto bytes = serialize(f);
  ASSERT_EQ(bytes.size(), 16u + 1 + 4 + 1 + 8 + 1);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 16), "MCP-BITSTREAM-v1");
  EXPECT_EQ(bytes[16], 4);
  EXPECT_EQ(bytes[17], 300 & 0xff);
  EXPECT_EQ(bytes[18], 300 >> 8);
  EXPECT_EQ(bytes[21], 7);
  EXPECT_EQ(bytes[22], 7);
  const BitstreamFile g = parse_bitstream(bytes);
  EXPECT_EQ(g.coder, f.coder);
  EXPECT_EQ(g.n, f.n);
  EXPECT_EQ(g.m, f.m);
  EXPECT_EQ(g.bits, f.bits);
}

TEST(Bitstream, RejectsCorruption) {
  BitstreamFile f;
  f.bits = BitString("1");
  auto bytes = serialize(f);
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(parse_bitstream(bad), DecodeError);
  bad = bytes;
  bad[16] = 9;
  EXPECT_THROW(parse_bitstream(bad), DecodeError);
  bad = bytes;
  bad.pop_back();
  EXPECT_THROW(parse_bitstream(bad), DecodeError);
}

TEST(Container, RoundTripAllBlockTypes) {
  Container c;
  Eigen::MatrixXd A(2, 3);
  A << 1.0, -2.5, 1e-300, 0.1, std::numeric_limits<double>::infinity(), -0.0;
  c.put("A", A);
  c.put("seed", std::uint64_t{0xfedcba9876543210ull});
  c.put("note", std::string("hello, world"));
  const Container d = Container::parse(c.serialize());
  EXPECT_EQ(d.matrix("A"), A);
  EXPECT_TRUE(std::signbit(d.matrix("A")(1, 2)));
  EXPECT_EQ(d.u64("seed"), 0xfedcba9876543210ull);
  EXPECT_EQ(d.str("note"), "hello, world");
  EXPECT_THROW(d.u64("A"), DecodeError);
  EXPECT_THROW(d.matrix("missing"), DecodeError);
}

TEST(Container, RejectsTruncation) {
  Container c;
  c.put("x", Eigen::MatrixXd::Ones(4, 1));
  auto bytes = c.serialize();
  bytes.resize(bytes.size() - 3);
  EXPECT_THROW(Container::parse(bytes), DecodeError);
  EXPECT_THROW(Container::parse({'M', 'C'}), DecodeError);
}

TEST(Csv, RoundTripsExactly) {
  Eigen::MatrixXd M(3, 2);
  M << 0.1, 1.0 / 3.0, 2e-17, -5.5, 123456789.123, 0.0;
  EXPECT_EQ(matrix_from_csv(to_csv(M)), M);
  EXPECT_THROW(matrix_from_csv("1,2\n3\n"), DecodeError);
}

TEST(Files, WriteThenRead) {
  const auto path = std::filesystem::temp_directory_path() / "mcp_container_test.bin";
  const std::vector<std::uint8_t> bytes = {0, 1, 2, 255};
  write_file(path.string(), bytes);
  EXPECT_EQ(read_file(path.string()), bytes);
  std::filesystem::remove(path);
}
