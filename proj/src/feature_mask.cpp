#include "swarmselect/feature_mask.hpp"

#include <numeric>

#include "swarmselect/error.hpp"

namespace swarmselect {

FeatureMask FeatureMask::from_bits(const std::vector<int>& bits) {
    FeatureMask m(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        m.set(i, bits[i] != 0);
    }
    return m;
}

FeatureMask FeatureMask::from_indices(std::size_t size, const std::vector<std::size_t>& indices) {
    FeatureMask m(size);
    for (auto i : indices) {
        if (i >= size) {
            throw ConfigError("feature index " + std::to_string(i) + " out of range for mask of size " +
                              std::to_string(size));
        }
        m.set(i);
    }
    return m;
}

FeatureMask FeatureMask::from_hex(std::string_view hex, std::size_t size) {
    if (hex.size() != (size + 3) / 4) {
        throw ConfigError("hex mask has " + std::to_string(hex.size()) + " digits, expected " +
                          std::to_string((size + 3) / 4));
    }
    FeatureMask m(size);
    for (std::size_t c = 0; c < hex.size(); ++c) {
        const char ch = hex[c];
        int v = 0;
        if (ch >= '0' && ch <= '9') {
            v = ch - '0';
        } else if (ch >= 'a' && ch <= 'f') {
            v = ch - 'a' + 10;
        } else if (ch >= 'A' && ch <= 'F') {
            v = ch - 'A' + 10;
        } else {
            throw ConfigError(std::string("invalid hex digit '") + ch + "' in mask");
        }
        for (int b = 0; b < 4; ++b) {
            const std::size_t i = 4 * c + static_cast<std::size_t>(b);
            const bool bit = (v >> (3 - b)) & 1;
            if (i < size) {
                m.set(i, bit);
            } else if (bit) {
                throw ConfigError("hex mask sets padding bits beyond feature count");
            }
        }
    }
    return m;
}

std::size_t FeatureMask::popcount() const {
    return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0});
}

std::vector<std::size_t> FeatureMask::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out.push_back(i);
    }
    return out;
}

bool FeatureMask::contains(const FeatureMask& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (other.bits_[i] && !bits_[i]) return false;
    }
    return true;
}

std::string FeatureMask::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out((bits_.size() + 3) / 4, '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) {
            const std::size_t c = i / 4;
            const int v = (out[c] >= 'a' ? out[c] - 'a' + 10 : out[c] - '0') | (1 << (3 - static_cast<int>(i % 4)));
            out[c] = digits[v];
        }
    }
    return out;
}

std::string FeatureMask::key() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out[i] = '1';
    }
    return out;
}

}  // namespace swarmselect
