#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace mirnet {

/// Incremental SHA-256 (FIPS 180-4). Used to fingerprint input files in run
/// manifests; implemented here to keep the tool dependency-free.
class Sha256 {
  public:
    Sha256();
    void update(const void* data, std::size_t len);
    /// Finishes the digest and returns it as 64 lowercase hex characters.
    /// The object must not be updated afterwards.
    std::string hex_digest();

  private:
    void process_block(const uint8_t* block);

    uint32_t state_[8];
    uint64_t bit_count_ = 0;
    uint8_t buffer_[64];
    std::size_t buffered_ = 0;
};

/// SHA-256 of a string of bytes.
std::string sha256_hex(const std::string& bytes);

/// SHA-256 of a file's contents, streamed. Errors if the file cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace mirnet
