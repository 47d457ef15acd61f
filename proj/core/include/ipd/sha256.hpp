#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace ipd {

/// Streaming SHA-256 (FIPS 180-4), used for the per-output checksums in the
/// run manifest.
class Sha256 {
 public:
  Sha256() { reset(); }

  void reset();
  void update(const void* data, std::size_t len);
  /// Finalizes and returns the lowercase hex digest; the instance must be
  /// reset() before further use.
  std::string hex_digest();

  static std::string of_string(const std::string& data);
  /// Throws DataError("IoError") if the file cannot be read.
  static std::string of_file(const std::string& path);

 private:
  void process_block(const std::uint8_t* block);

  std::uint32_t state_[8];
  std::uint8_t buffer_[64];
  std::size_t buffer_len_ = 0;
  std::uint64_t total_bits_ = 0;
};

}  // namespace ipd
