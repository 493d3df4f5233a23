#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace trn {

// Dynamic bitset over 64-bit words. Vertex sets and adjacency rows are all
// stored this way; neighborhood intersection is the inner loop of every
// search in the library.
class Bitset {
public:
    Bitset() : n_(0) {}
    explicit Bitset(int n) : n_(n), w_((n + 63) / 64, 0) {}

    int universe() const { return n_; }

    void set(int i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
    void reset(int i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    void clear() { for (auto& w : w_) w = 0; }

    int count() const {
        int c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }

    bool any() const {
        for (auto w : w_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    // First set bit at position >= from, or -1.
    int next(int from = 0) const {
        if (from >= n_) return -1;
        int wi = from >> 6;
        uint64_t cur = w_[wi] & (~uint64_t(0) << (from & 63));
        while (true) {
            if (cur) return (wi << 6) + std::countr_zero(cur);
            if (++wi >= (int)w_.size()) return -1;
            cur = w_[wi];
        }
    }

    template <typename F>
    void for_each(F&& f) const {
        for (int wi = 0; wi < (int)w_.size(); ++wi) {
            uint64_t cur = w_[wi];
            while (cur) {
                f((wi << 6) + std::countr_zero(cur));
                cur &= cur - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> v;
        v.reserve(count());
        for_each([&](int i) { v.push_back(i); });
        return v;
    }

    Bitset& operator&=(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bitset& operator-=(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

    int count_and(const Bitset& o) const {
        int c = 0;
        for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
        return c;
    }

    bool intersects(const Bitset& o) const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }

    bool subset_of(const Bitset& o) const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator<(const Bitset& o) const { return w_ < o.w_; }

    static Bitset full(int n) {
        Bitset b(n);
        for (int i = 0; i < n / 64; ++i) b.w_[i] = ~uint64_t(0);
        if (n & 63) b.w_[n / 64] = (uint64_t(1) << (n & 63)) - 1;
        return b;
    }

    static Bitset of(int n, std::initializer_list<int> xs) {
        Bitset b(n);
        for (int x : xs) b.set(x);
        return b;
    }

    static Bitset of(int n, const std::vector<int>& xs) {
        Bitset b(n);
        for (int x : xs) b.set(x);
        return b;
    }

private:
    int n_;
    std::vector<uint64_t> w_;
};

// A vertex subset of some tournament; members are indices < universe().
using VertexSet = Bitset;

} // namespace trn
