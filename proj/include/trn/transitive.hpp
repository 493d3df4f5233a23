#pragma once

#include <optional>
#include <vector>

#include "trn/core.hpp"
#include "trn/numeric.hpp"

namespace trn {

enum class WitnessMethod { Exact, Greedy, StarFree, Merge };

const char* to_string(WitnessMethod m);

// A transitive subtournament with the ordering that proves it: order[a]
// beats order[b] for a < b.
struct TransitiveWitness {
    VertexSet vertices;
    std::vector<int> order;
    WitnessMethod method = WitnessMethod::Exact;

    int size() const { return (int)order.size(); }
};

// Throws VerificationFailed unless the witness is a genuine transitive set
// of t with a consistent order.
void verify_witness(const Tournament& t, const TransitiveWitness& w);

// Transitive order of s if t|s is acyclic (sort by outdegree within s),
// otherwise nullopt.
std::optional<std::vector<int>> is_transitive(const Tournament& t, const VertexSet& s);

// Exact maximum transitive subtournament by branch and bound over the packed
// relation. cap guards runtime; default follows the library-wide oracle cap.
TransitiveWitness max_transitive_exact(const Tournament& t, int cap = 24);
TransitiveWitness max_transitive_exact_in(const Tournament& t, const VertexSet& s, int cap = 24);

// Ramsey-style extraction: pick a vertex, recurse into the larger of its two
// neighborhoods. Guarantees size >= floor(log2 n) + 1.
TransitiveWitness greedy_transitive(const Tournament& t);
TransitiveWitness greedy_transitive_in(const Tournament& t, const VertexSet& s);

// Star recognition: a tournament is a star iff deleting some vertex (the
// center) leaves a transitive tournament. rest is that transitive order.
struct StarShape {
    int center;
    std::vector<int> rest;
};

std::optional<StarShape> star_shape(const Tournament& h);

struct StarFreeOptions {
    // Recursion bottoms out at max(4^h, 2^(1/(1-eps))) vertices unless
    // overridden (>= 1) for tests that want to drive the full recursion.
    long long base_threshold_override = -1;
    int exact_cap = 24;
};

// Guaranteed extraction from an H-free tournament when H is a star:
// witness size >= c(H) * n^(1/(3h log 2h)). If a copy of H surfaces during
// the search, throws FoundH with the embedding (the input was not H-free).
TransitiveWitness star_free_transitive(const Tournament& t, const Tournament& h,
                                       const StarFreeOptions& opts = {});

// The guaranteed exponent and leading constant for the star extraction.
Real star_epsilon(int h);
Real star_constant(int h);

} // namespace trn
