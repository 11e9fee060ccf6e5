#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace core {

// Lowercase hex MD5 digest (integrity echo of the original verification
// procedure, not a security boundary).
std::string md5_hex(std::span<const std::uint8_t> data);

class Md5 {
 public:
  Md5();
  ~Md5();
  Md5(const Md5&) = delete;
  Md5& operator=(const Md5&) = delete;

  void update(std::span<const std::uint8_t> data);
  std::string hex_digest();  // finalizes; call once

 private:
  void* ctx_;
};

}  // namespace core
