#include "fibising/fibword.hpp"

#include <limits>

#include "fibising/errors.hpp"

namespace fibising {

std::uint64_t fibonacci(int k) {
    if (k < -1) throw DomainError("fibonacci index must be >= -1");
    if (k == -1) return 0;
    std::uint64_t prev = 0;  // F_{-1}
    std::uint64_t cur = 1;   // F_0
    for (int i = 0; i < k; ++i) {
        if (cur > std::numeric_limits<std::uint64_t>::max() - prev) {
            throw CapacityError("fibonacci(" + std::to_string(k) + ") overflows 64 bits");
        }
        const std::uint64_t next = prev + cur;
        prev = cur;
        cur = next;
    }
    return cur;
}

void FibWord::push_back(Letter letter) {
    if (size_ % 64 == 0) bits_.push_back(0);
    if (letter == Letter::B) bits_.back() |= std::uint64_t{1} << (size_ % 64);
    ++size_;
}

std::string FibWord::to_string() const {
    std::string out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back((*this)[i] == Letter::A ? 'A' : 'B');
    return out;
}

FibWord FibWord::from_string(const std::string& text, int level) {
    FibWord w;
    w.level_ = level;
    for (char c : text) {
        if (c == 'A') {
            w.push_back(Letter::A);
        } else if (c == 'B') {
            w.push_back(Letter::B);
        } else {
            throw DomainError(std::string("invalid letter '") + c + "'");
        }
    }
    return w;
}

bool FibWord::operator==(const FibWord& other) const {
    return level_ == other.level_ && size_ == other.size_ && bits_ == other.bits_;
}

FibWord substitute(const FibWord& word) {
    FibWord out;
    out.level_ = word.level_ + 1;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (word[i] == Letter::A) {
            out.push_back(Letter::A);
            out.push_back(Letter::B);
        } else {
            out.push_back(Letter::A);
        }
    }
    return out;
}

FibWord concat(const FibWord& head, const FibWord& tail) {
    FibWord out = head;
    out.level_ = head.level_ + 1;
    for (std::size_t i = 0; i < tail.size(); ++i) out.push_back(tail[i]);
    return out;
}

FibWord word_at_level(int k, std::size_t cap) {
    if (k < 1) throw DomainError("word level must be >= 1");
    if (k > 90 || fibonacci(k) > cap) {
        throw CapacityError("word of level " + std::to_string(k) + " exceeds the cap of " +
                            std::to_string(cap) + " letters");
    }
    FibWord older = FibWord::from_string("A", 1);
    if (k == 1) return older;
    FibWord newer = FibWord::from_string("AB", 2);
    for (int level = 2; level < k; ++level) {
        FibWord next = concat(newer, older);
        older = std::move(newer);
        newer = std::move(next);
    }
    return newer;
}

std::vector<double> coupling_sequence(const FibWord& word, const CouplingParams& params) {
    std::vector<double> out(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) {
        out[i] = word[i] == Letter::A ? params.j0() : params.j1();
    }
    return out;
}

}  // namespace fibising
