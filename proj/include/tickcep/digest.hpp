#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace tickcep {

/// Incremental SHA-256 (OpenSSL); `hex()` finalizes a copy, so updates may continue.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256& other);
  Sha256& operator=(const Sha256& other);
  Sha256(Sha256&&) noexcept;
  Sha256& operator=(Sha256&&) noexcept;

  void update(std::span<const std::uint8_t> bytes);
  void update(std::string_view text);
  std::string hex() const;

 private:
  struct Ctx;
  std::unique_ptr<Ctx> ctx_;
};

}  // namespace tickcep
