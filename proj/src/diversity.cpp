#include "evosig/diversity.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace evosig {

BehaviorVector BehaviorVector::from_bits(std::span<const std::uint8_t> bits) {
    BehaviorVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        v.set(i, bits[i] != 0);
    return v;
}

BehaviorVector BehaviorVector::from_string(const std::string& bits) {
    std::vector<std::uint8_t> raw;
    for (char c : bits) {
        if (c == '0' || c == '1')
            raw.push_back(c == '1');
        else if (c != ' ' && c != '\n' && c != '\t')
            throw std::invalid_argument("behavior string may contain only 0 and 1");
    }
    return from_bits(raw);
}

std::size_t BehaviorVector::count_ones() const {
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::string BehaviorVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i))
            s[i] = '1';
    return s;
}

std::size_t hamming(const BehaviorVector& a, const BehaviorVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming: behavior vectors differ in length");
    std::size_t d = 0;
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i)
        d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
    return d;
}

namespace {

template <std::size_t N>
EntropyEstimate plug_in(const std::array<std::size_t, N>& counts, std::size_t n) {
    EntropyEstimate e;
    const double total = static_cast<double>(n);
    for (std::size_t c : counts) {
        if (c == 0)
            continue;
        ++e.states;
        const double p = static_cast<double>(c) / total;
        e.raw_entropy -= p * std::log2(p);
    }
    return e;
}

} // namespace

EntropyEstimate entropy_corrected(const BehaviorVector& a) {
    if (a.empty())
        throw std::invalid_argument("entropy of an empty sequence");
    const std::size_t ones = a.count_ones();
    EntropyEstimate e = plug_in(std::array<std::size_t, 2>{a.size() - ones, ones}, a.size());
    e.correction = static_cast<double>(e.states - 1) / (2.0 * static_cast<double>(a.size()));
    return e;
}

EntropyEstimate joint_entropy_corrected(const BehaviorVector& a, const BehaviorVector& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("joint entropy of an empty sequence");
    if (a.size() != b.size())
        throw std::invalid_argument("joint entropy: sequences differ in length");
    const std::size_t n = a.size();
    std::size_t n11 = 0;
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i)
        n11 += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
    const std::size_t ones_a = a.count_ones();
    const std::size_t ones_b = b.count_ones();
    const std::size_t n10 = ones_a - n11;
    const std::size_t n01 = ones_b - n11;
    const std::size_t n00 = n - n11 - n10 - n01;

    // Same state order as the marginal estimate, so H(a, a) and H(a) agree bit for bit.
    EntropyEstimate e = plug_in(std::array<std::size_t, 4>{n00, n01, n10, n11}, n);
    const int s_a = (ones_a > 0) + (ones_a < n);
    const int s_b = (ones_b > 0) + (ones_b < n);
    e.correction = static_cast<double>(s_a + s_b - e.states - 1) / (2.0 * static_cast<double>(n));
    return e;
}

double nmi_distance(const BehaviorVector& a, const BehaviorVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("nmi_distance: behavior vectors differ in length");
    const double ha = entropy_corrected(a).corrected();
    const double hb = entropy_corrected(b).corrected();
    const double denom = std::max(ha, hb);
    if (!(denom > 0.0))
        return a == b ? 0.0 : 1.0;
    const double hab = joint_entropy_corrected(a, b).corrected();
    return 1.0 - (ha + hb - hab) / denom;
}

} // namespace evosig
