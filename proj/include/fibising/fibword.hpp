#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fibising/params.hpp"

namespace fibising {

enum class Letter : std::uint8_t { A = 0, B = 1 };

/// Default cap on word length (letters).
inline constexpr std::size_t kDefaultWordCap = std::size_t{1} << 26;

/// Fibonacci numbers with F_1 = 1, F_2 = 2 (F_0 = 1 and F_{-1} = 0 extend the
/// recurrence downwards). Throws CapacityError if the value overflows 64 bits.
std::uint64_t fibonacci(int k);

/// A level-k word of the substitution A -> AB, B -> A started from "A".
/// Letters are stored one bit each.
class FibWord {
public:
    FibWord() = default;

    int level() const { return level_; }
    std::size_t size() const { return size_; }
    Letter operator[](std::size_t i) const {
        return (bits_[i / 64] >> (i % 64)) & 1u ? Letter::B : Letter::A;
    }

    std::string to_string() const;
    static FibWord from_string(const std::string& text, int level);

    bool operator==(const FibWord& other) const;

    friend FibWord substitute(const FibWord& word);
    friend FibWord word_at_level(int k, std::size_t cap);
    friend FibWord concat(const FibWord& head, const FibWord& tail);

private:
    void push_back(Letter letter);

    std::vector<std::uint64_t> bits_;
    std::size_t size_ = 0;
    int level_ = 0;
};

/// Applies the substitution letterwise, raising the level by one.
FibWord substitute(const FibWord& word);

/// Level-k word; throws CapacityError when F_k exceeds `cap`.
FibWord word_at_level(int k, std::size_t cap = kDefaultWordCap);

/// Concatenation head ++ tail; the result takes head.level() + 1.
FibWord concat(const FibWord& head, const FibWord& tail);

/// Couplings along the word: A -> J0, B -> J1.
std::vector<double> coupling_sequence(const FibWord& word, const CouplingParams& params);

}  // namespace fibising
