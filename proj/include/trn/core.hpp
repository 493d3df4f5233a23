#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trn/bitset.hpp"
#include "trn/errors.hpp"
#include "trn/rational.hpp"

namespace trn {

// Complete oriented graph on vertices 0..n-1. Immutable after construction;
// row i of the packed relation is the out-neighborhood bitmask of vertex i.
class Tournament {
public:
    Tournament() : n_(0) {}

    // Orientation matrix as bit rows; every off-diagonal pair must be
    // oriented exactly one way. Checked.
    Tournament(int n, std::vector<Bitset> out_rows);

    int n() const { return n_; }
    bool beats(int i, int j) const { return out_[i].test(j); }
    const Bitset& out(int i) const { return out_[i]; }
    const Bitset& in(int i) const { return in_[i]; }
    int outdegree(int i) const { return out_[i].count(); }
    int indegree(int i) const { return in_[i].count(); }

    bool operator==(const Tournament& o) const { return n_ == o.n_ && out_ == o.out_; }

private:
    int n_;
    std::vector<Bitset> out_;
    std::vector<Bitset> in_;
};

// splitmix64; the one PRNG used anywhere in the library. Constants are the
// canonical ones, so any implementation of the same recurrence reproduces
// our streams bit-exactly.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    bool coin() { return next() >> 63; }

    // Uniform in [0, m) by rejection; m > 0.
    uint64_t below(uint64_t m) {
        uint64_t lim = ~uint64_t(0) - (~uint64_t(0) % m);
        uint64_t v;
        do { v = next(); } while (v >= lim);
        return v % m;
    }
};

// Validating constructor from an explicit edge list. Each unordered pair
// must appear exactly once.
Tournament build_tournament(int n, const std::vector<std::pair<int, int>>& edges);

// adj(i,j) for all i<j; the canonical transitive tournament.
Tournament gen_transitive(int n);

// The 5-vertex tournament with every indegree 2: i -> i+1, i -> i+2 (mod 5).
Tournament gen_c5();

// One fair coin per pair, pairs (i,j), i<j, in lexicographic order; coin = top
// bit of the next splitmix64 output. Same (n, seed) gives identical output on
// any platform.
Tournament gen_random(int n, uint64_t seed);

struct Induced {
    Tournament t;
    std::vector<int> vertex_map; // new index -> original vertex (ascending)
};

Induced induced(const Tournament& t, const VertexSet& s);

struct Substitution {
    Tournament t;
    std::vector<int> block_of;     // result vertex -> index of the replaced vertex
    std::vector<int> block_start;  // replaced vertex -> first result vertex of its block
};

// Replace vertex i of h by parts[i]; cross edges follow h.
// Blocks occupy consecutive index ranges in h's vertex order.
Substitution substitute(const Tournament& h, const std::vector<Tournament>& parts);

// Exact directed density d(X,Y) = e_{X,Y} / (|X||Y|). X, Y disjoint, nonempty.
Rational density(const Tournament& t, const VertexSet& x, const VertexSet& y);

// Directed density where one side is a single vertex.
Rational density_from(const Tournament& t, int v, const VertexSet& y); // d({v},Y)
Rational density_to(const Tournament& t, const VertexSet& x, int v);   // d(X,{v})

// Text format "trn v1": header line, vertex count line, then n rows of n
// characters over {0,1}; m[i][j]=1 iff i->j. Bit-exact: single '\n' line ends,
// no trailing whitespace.
std::string serialize(const Tournament& t);
Tournament parse_tournament(const std::string& text);
Tournament load_tournament(const std::string& path);
void save_tournament(const Tournament& t, const std::string& path);

} // namespace trn
