#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace swarmselect {

/// Fixed-length bit vector selecting feature columns.
///
/// The hex encoding packs bits in groups of four, most significant bit
/// first: bit 4*c is the high bit of hex digit c. "a" therefore selects
/// features 0 and 2 of a 4-feature mask. Trailing pad bits are zero.
class FeatureMask {
public:
    FeatureMask() = default;
    explicit FeatureMask(std::size_t size, bool value = false) : bits_(size, value ? 1 : 0) {}

    static FeatureMask from_bits(const std::vector<int>& bits);
    static FeatureMask from_indices(std::size_t size, const std::vector<std::size_t>& indices);
    static FeatureMask from_hex(std::string_view hex, std::size_t size);

    std::size_t size() const { return bits_.size(); }
    bool test(std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool value = true) { bits_[i] = value ? 1 : 0; }
    void flip(std::size_t i) { bits_[i] ^= 1; }

    std::size_t popcount() const;
    bool none() const { return popcount() == 0; }
    std::vector<std::size_t> indices() const;

    /// True when every bit set in `other` is also set here.
    bool contains(const FeatureMask& other) const;

    std::string to_hex() const;
    /// Compact key for hashing and memoization ('0'/'1' per bit).
    std::string key() const;

    friend bool operator==(const FeatureMask&, const FeatureMask&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

}  // namespace swarmselect
