#include "mcp/container.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mcp/errors.hpp"

namespace mcp {

namespace {

constexpr char kContainerMagic[8] = {'M', 'C', 'P', 'B', 'I', 'N', 1, 0};

enum class BlockType : std::uint8_t { kMatrix = 1, kU64 = 2, kString = 3 };

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint64_t le(int bytes) {
    need(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      v |= std::uint64_t{bytes_[pos_++]} << (8 * i);
    }
    return v;
  }

  std::string raw(std::size_t len) {
    need(len);
    std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
    pos_ += len;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t len) const {
    if (len > remaining()) throw DecodeError("container: truncated input");
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize(const BitstreamFile& file) {
  std::vector<std::uint8_t> out(kBitstreamMagic, kBitstreamMagic + 16);
  out.push_back(static_cast<std::uint8_t>(file.coder));
  put_le(out, file.n, 4);
  out.push_back(file.m);
  put_le(out, file.bits.size(), 8);
  const auto payload = file.bits.to_bytes();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

BitstreamFile parse_bitstream(const std::vector<std::uint8_t>& bytes) {
  ByteReader in(bytes);
  if (in.raw(16) != std::string(kBitstreamMagic, 16)) {
    throw DecodeError("bitstream: bad magic");
  }
  BitstreamFile file;
  const auto id = static_cast<std::uint8_t>(in.le(1));
  if (id < 1 || id > 5) throw DecodeError("bitstream: unknown coder id");
  file.coder = static_cast<CoderId>(id);
  file.n = static_cast<std::uint32_t>(in.le(4));
  file.m = static_cast<std::uint8_t>(in.le(1));
  const std::uint64_t bit_length = in.le(8);
  const std::size_t byte_length = (bit_length + 7) / 8;
  if (in.remaining() != byte_length) {
    throw DecodeError("bitstream: payload length disagrees with header");
  }
  const std::string payload = in.raw(byte_length);
  file.bits = BitString::from_bytes(
      std::vector<std::uint8_t>(payload.begin(), payload.end()), bit_length);
  return file;
}

void Container::put(const std::string& name, Eigen::MatrixXd value) {
  blocks_[name] = std::move(value);
}

void Container::put(const std::string& name, std::uint64_t value) {
  blocks_[name] = value;
}

void Container::put(const std::string& name, std::string value) {
  blocks_[name] = std::move(value);
}

const Container::Block& Container::at(const std::string& name) const {
  const auto it = blocks_.find(name);
  if (it == blocks_.end()) throw DecodeError("container: no block '" + name + "'");
  return it->second;
}

const Eigen::MatrixXd& Container::matrix(const std::string& name) const {
  const auto* v = std::get_if<Eigen::MatrixXd>(&at(name));
  if (!v) throw DecodeError("container: block '" + name + "' is not a matrix");
  return *v;
}

std::uint64_t Container::u64(const std::string& name) const {
  const auto* v = std::get_if<std::uint64_t>(&at(name));
  if (!v) throw DecodeError("container: block '" + name + "' is not an integer");
  return *v;
}

const std::string& Container::str(const std::string& name) const {
  const auto* v = std::get_if<std::string>(&at(name));
  if (!v) throw DecodeError("container: block '" + name + "' is not a string");
  return *v;
}

std::vector<std::uint8_t> Container::serialize() const {
  std::vector<std::uint8_t> out(kContainerMagic, kContainerMagic + 8);
  put_le(out, blocks_.size(), 4);
  for (const auto& [name, block] : blocks_) {
    put_le(out, name.size(), 2);
    out.insert(out.end(), name.begin(), name.end());
    if (const auto* M = std::get_if<Eigen::MatrixXd>(&block)) {
      out.push_back(static_cast<std::uint8_t>(BlockType::kMatrix));
      put_le(out, static_cast<std::uint64_t>(M->rows()), 8);
      put_le(out, static_cast<std::uint64_t>(M->cols()), 8);
      for (Eigen::Index i = 0; i < M->rows(); ++i) {
        for (Eigen::Index j = 0; j < M->cols(); ++j) {
          put_le(out, std::bit_cast<std::uint64_t>((*M)(i, j)), 8);
        }
      }
    } else if (const auto* u = std::get_if<std::uint64_t>(&block)) {
      out.push_back(static_cast<std::uint8_t>(BlockType::kU64));
      put_le(out, *u, 8);
    } else {
      const auto& s = std::get<std::string>(block);
      out.push_back(static_cast<std::uint8_t>(BlockType::kString));
      put_le(out, s.size(), 8);
      out.insert(out.end(), s.begin(), s.end());
    }
  }
  return out;
}

Container Container::parse(const std::vector<std::uint8_t>& bytes) {
  ByteReader in(bytes);
  if (in.raw(8) != std::string(kContainerMagic, 8)) {
    throw DecodeError("container: bad magic");
  }
  Container c;
  const std::uint64_t count = in.le(4);
  for (std::uint64_t b = 0; b < count; ++b) {
    const std::string name = in.raw(in.le(2));
    switch (static_cast<BlockType>(in.le(1))) {
      case BlockType::kMatrix: {
        const std::uint64_t rows = in.le(8);
        const std::uint64_t cols = in.le(8);
        if (cols != 0 && rows > in.remaining() / 8 / cols) {
          throw DecodeError("container: matrix block larger than input");
        }
        Eigen::MatrixXd M(static_cast<Eigen::Index>(rows),
                          static_cast<Eigen::Index>(cols));
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
          for (Eigen::Index j = 0; j < M.cols(); ++j) {
            M(i, j) = std::bit_cast<double>(in.le(8));
          }
        }
        c.put(name, std::move(M));
        break;
      }
      case BlockType::kU64:
        c.put(name, in.le(8));
        break;
      case BlockType::kString: {
        const std::uint64_t len = in.le(8);
        c.put(name, in.raw(len));
        break;
      }
      default:
        throw DecodeError("container: unknown block type in '" + name + "'");
    }
  }
  if (in.remaining() != 0) throw DecodeError("container: trailing bytes");
  return c;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

std::string to_csv(const Eigen::MatrixXd& M) {
  std::ostringstream s;
  char buf[32];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const auto end = std::to_chars(buf, buf + sizeof buf, M(i, j)).ptr;
      s << (j ? "," : "") << std::string_view(buf, static_cast<std::size_t>(end - buf));
    }
    s << "\n";
  }
  return s.str();
}

Eigen::MatrixXd matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DecodeError("csv: bad number '" + cell + "' on row " +
                          std::to_string(rows.size() + 1));
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DecodeError("csv: ragged row " + std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return M;
}

}  // namespace mcp
