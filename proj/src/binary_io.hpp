#pragma once

// Little-endian helpers shared by the binary cache formats.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace drh::io {

void put_u32(std::string& out, std::uint32_t v);
void put_u64(std::string& out, std::uint64_t v);
void put_varint(std::string& out, std::uint64_t v);

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}

  std::uint32_t u32();
  std::uint64_t u64();
  std::uint64_t varint();
  std::string_view bytes(std::size_t n);
  [[nodiscard]] bool at_end() const { return pos_ == data_.size(); }
  [[nodiscard]] std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over `path`.
void write_file_atomically(const std::filesystem::path& path, std::string_view bytes);

}  // namespace drh::io
