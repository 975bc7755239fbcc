#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mcp/bits.hpp"
#include "mcp/coders.hpp"

namespace mcp {

// Single codeword with the (coder, n, m) context needed to decode it.
// Layout is documented in docs/FORMATS.md.
struct BitstreamFile {
  CoderId coder = CoderId::kSparse;
  std::uint32_t n = 0;
  std::uint8_t m = 1;
  BitString bits;
};

inline constexpr char kBitstreamMagic[17] = "MCP-BITSTREAM-v1";

std::vector<std::uint8_t> serialize(const BitstreamFile& file);
BitstreamFile parse_bitstream(const std::vector<std::uint8_t>& bytes);

// Named blocks holding matrices, unsigned integers or strings. Vectors are
// stored as single-column matrices.
class Container {
 public:
  using Block = std::variant<Eigen::MatrixXd, std::uint64_t, std::string>;

  void put(const std::string& name, Eigen::MatrixXd value);
  void put(const std::string& name, std::uint64_t value);
  void put(const std::string& name, std::string value);

  bool has(const std::string& name) const { return blocks_.count(name) != 0; }
  const Eigen::MatrixXd& matrix(const std::string& name) const;
  std::uint64_t u64(const std::string& name) const;
  const std::string& str(const std::string& name) const;
  const std::map<std::string, Block>& blocks() const { return blocks_; }

  std::vector<std::uint8_t> serialize() const;
  static Container parse(const std::vector<std::uint8_t>& bytes);

 private:
  const Block& at(const std::string& name) const;

  std::map<std::string, Block> blocks_;
};

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

// Plain comma-separated rows, full round-trip precision.
std::string to_csv(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_csv(const std::string& text);

}  // namespace mcp
