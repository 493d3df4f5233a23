#pragma once

#include <optional>
#include <vector>

#include "trn/core.hpp"

namespace trn {

// Full homogeneous-set analysis of a small tournament. Exhaustive over all
// vertex subsets; meant for pattern tournaments, not hosts.
struct HomoStructure {
    std::vector<VertexSet> homo_sets; // nontrivial ones only (1 < |S| < n)
    bool is_prime = false;
    int p = 0; // partitioning number; |H| for prime H, 1 for the single vertex
    std::vector<std::vector<VertexSet>> partitions; // all nontrivial homogeneous partitionings
};

// True iff every vertex outside s is complete to s or complete from s.
bool is_homogeneous(const Tournament& h, const VertexSet& s);

HomoStructure analyze_homogeneous(const Tournament& h, int cap = 16,
                                  long long partition_budget = 1000000);

// Quotient tournament of one homogeneous partitioning; part i (parts ordered
// by smallest member) maps to vertex i of q.
struct Quotient {
    Tournament q;
    std::vector<VertexSet> partition;
};

// One quotient per nontrivial homogeneous partitioning, deduplicated by
// partition identity (not isomorphism). Sizes range over [p(H), |H|].
std::vector<Quotient> enumerate_quotients(const Tournament& h, int cap = 16,
                                          long long partition_budget = 1000000);

// Orientation-preserving injective map of h into t (h vertex -> t vertex),
// or nullopt iff t is h-free. Backtracking over bitmask candidate sets.
std::optional<std::vector<int>> find_embedding(const Tournament& t, const Tournament& h);

void verify_embedding(const Tournament& t, const Tournament& h, const std::vector<int>& map);

// T is H-far: free of every quotient of H with >= 2 parts.
bool is_h_far(const Tournament& t, const Tournament& h, int cap = 16);

} // namespace trn
