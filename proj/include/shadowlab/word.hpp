// Symbol words: finite heads with an optional repeating cycle, so eventually
// periodic selections have a finite encoding. Symbols are indices into the
// owning system's ordered alphabet.

#pragma once

#include <stdexcept>
#include <vector>

namespace shadowlab {

struct SymbolWord {
    enum class Direction { forward, two_sided };

    std::vector<int> head;
    std::vector<int> cycle;  // empty means the word ends with the head
    Direction direction = Direction::forward;

    static SymbolWord finite(std::vector<int> symbols) {
        SymbolWord w;
        w.head = std::move(symbols);
        return w;
    }

    static SymbolWord repeating(std::vector<int> head, std::vector<int> cycle) {
        if (cycle.empty()) throw std::invalid_argument("repeating word needs a nonempty cycle");
        SymbolWord w;
        w.head = std::move(head);
        w.cycle = std::move(cycle);
        return w;
    }

    static SymbolWord constant(int symbol) { return repeating({}, {symbol}); }

    bool eventually_periodic() const { return !cycle.empty(); }

    // Number of usable symbols; -1 when the cycle makes it unbounded.
    long length() const {
        return cycle.empty() ? static_cast<long>(head.size()) : -1;
    }

    bool has(long n) const {
        return n >= 0 && (!cycle.empty() || n < static_cast<long>(head.size()));
    }

    int at(long n) const {
        if (n < 0) throw std::out_of_range("word index must be nonnegative");
        if (n < static_cast<long>(head.size())) return head[static_cast<std::size_t>(n)];
        if (cycle.empty()) throw std::out_of_range("word exhausted: finite head, no cycle");
        long k = (n - static_cast<long>(head.size())) % static_cast<long>(cycle.size());
        return cycle[static_cast<std::size_t>(k)];
    }

    std::vector<int> prefix(long n) const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) out.push_back(at(i));
        return out;
    }

    bool operator==(const SymbolWord& o) const {
        return head == o.head && cycle == o.cycle && direction == o.direction;
    }
};

}  // namespace shadowlab
