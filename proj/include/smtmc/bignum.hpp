#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "smtmc/error.hpp"

namespace smtmc {

// Unsigned big integer, little-endian base-2^64 limbs. Only the handful of
// operations the counter needs: multiply by a machine word, compare, shift
// construction for powers of two, and decimal printing.
class BigUint {
public:
    BigUint() : limbs_{0} {}
    explicit BigUint(uint64_t v) : limbs_{v} {}

    static BigUint pow2(uint32_t exponent) {
        BigUint r;
        r.limbs_.assign(exponent / 64 + 1, 0);
        r.limbs_[exponent / 64] = uint64_t{1} << (exponent % 64);
        return r;
    }

    void mul_u64(uint64_t m) {
        if (m == 0) {
            limbs_.assign(1, 0);
            return;
        }
        unsigned __int128 carry = 0;
        for (uint64_t& limb : limbs_) {
            unsigned __int128 prod = (unsigned __int128)limb * m + carry;
            limb = (uint64_t)prod;
            carry = prod >> 64;
        }
        if (carry != 0) limbs_.push_back((uint64_t)carry);
    }

    bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

    bool fits_u64() const { return normalized_size() <= 1; }

    uint64_t to_u64() const {
        if (!fits_u64()) throw Error("BigUint does not fit in 64 bits");
        return limbs_[0];
    }

    double to_double() const {
        double r = 0.0;
        for (size_t i = limbs_.size(); i-- > 0;) r = r * 18446744073709551616.0 + (double)limbs_[i];
        return r;
    }

    int compare(const BigUint& other) const {
        size_t a = normalized_size(), b = other.normalized_size();
        if (a != b) return a < b ? -1 : 1;
        for (size_t i = a; i-- > 0;) {
            if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    bool operator==(const BigUint& o) const { return compare(o) == 0; }
    bool operator!=(const BigUint& o) const { return compare(o) != 0; }
    bool operator<(const BigUint& o) const { return compare(o) < 0; }
    bool operator<=(const BigUint& o) const { return compare(o) <= 0; }
    bool operator>(const BigUint& o) const { return compare(o) > 0; }
    bool operator>=(const BigUint& o) const { return compare(o) >= 0; }

    std::string to_string() const {
        std::vector<uint64_t> work(limbs_.begin(), limbs_.begin() + normalized_size());
        std::string digits;
        while (!(work.size() == 1 && work[0] == 0)) {
            // long division by 10^19, the largest power of ten in a limb
            constexpr uint64_t chunk_div = 10000000000000000000ULL;
            unsigned __int128 rem = 0;
            for (size_t i = work.size(); i-- > 0;) {
                unsigned __int128 cur = (rem << 64) | work[i];
                work[i] = (uint64_t)(cur / chunk_div);
                rem = cur % chunk_div;
            }
            while (work.size() > 1 && work.back() == 0) work.pop_back();
            uint64_t part = (uint64_t)rem;
            bool more = !(work.size() == 1 && work[0] == 0);
            int width = more ? 19 : 0;
            std::string s = std::to_string(part);
            while ((int)s.size() < width) s.insert(s.begin(), '0');
            digits.insert(0, s);
        }
        return digits.empty() ? "0" : digits;
    }

private:
    size_t normalized_size() const {
        size_t n = limbs_.size();
        while (n > 1 && limbs_[n - 1] == 0) --n;
        return n;
    }

    std::vector<uint64_t> limbs_;
};

}  // namespace smtmc
