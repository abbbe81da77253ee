#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace evosig {

/// Packed binary sequence (bit i of word i/64).
class BehaviorVector {
public:
    BehaviorVector() = default;
    explicit BehaviorVector(std::size_t bits) : size_(bits), words_((bits + 63) / 64, 0) {}
    static BehaviorVector from_bits(std::span<const std::uint8_t> bits);
    /// Parses a string of '0' / '1' characters (whitespace ignored).
    static BehaviorVector from_string(const std::string& bits);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1ULL; }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = 1ULL << (i % 64);
        if (v)
            words_[i / 64] |= mask;
        else
            words_[i / 64] &= ~mask;
    }
    std::size_t count_ones() const;
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::string to_string() const;

    friend bool operator==(const BehaviorVector&, const BehaviorVector&) = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Number of differing positions. Throws std::invalid_argument on length mismatch.
std::size_t hamming(const BehaviorVector& a, const BehaviorVector& b);

/// Plug-in entropy (bits) plus a finite-sample correction.
struct EntropyEstimate {
    double raw_entropy = 0.0;
    double correction = 0.0;
    int states = 0; // states with nonzero probability
    double corrected() const { return raw_entropy + correction; }
};

/// Correction (S - 1) / (2 n) for n samples and S occupied states.
EntropyEstimate entropy_corrected(const BehaviorVector& a);

/// Joint entropy over the four symbol pairs, with correction
/// (S_a + S_b - S_ab - 1) / (2 n).
EntropyEstimate joint_entropy_corrected(const BehaviorVector& a, const BehaviorVector& b);

/// f2 = 1 - (H(a) + H(b) - H(a,b)) / max(H(a), H(b)) on corrected entropies.
/// When the larger corrected entropy is <= 0, returns 0 for identical
/// sequences and 1 otherwise.
double nmi_distance(const BehaviorVector& a, const BehaviorVector& b);

} // namespace evosig
