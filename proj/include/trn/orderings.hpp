#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trn/core.hpp"

namespace trn {

// Undirected pairs {u,v} whose tournament edge runs from the later to the
// earlier position of the ordering.
struct BackwardGraph {
    std::vector<std::pair<int, int>> edges;
};

BackwardGraph backward_graph(const Tournament& t, const std::vector<int>& ordering);

struct GalaxyStar {
    int center;              // vertex id
    std::vector<int> leaves; // vertex ids, ascending position
    bool left;               // left star: center precedes all its leaves
};

struct GalaxyDecomposition {
    std::vector<int> ordering; // position -> vertex
    std::vector<GalaxyStar> stars;
    std::vector<int> singletons;
    std::vector<int> k; // consecutive-center block sizes over non-singleton positions
    std::vector<int> w; // consecutive-leaf block sizes
    int g = 0;          // star count
    int t = 0;          // leaf-block count
    bool regular = false;
};

// Star/galaxy test for one ordering: every backward component must be a
// K(1,m) with its center on one side of its leaves, and no center may sit
// strictly inside another star's leaf span. K(1,1) components default to a
// right star; both centers are tried when the galaxy condition demands it.
std::optional<GalaxyDecomposition> classify_ordering(const Tournament& t,
                                                     const std::vector<int>& ordering);

// Lexicographically first ordering whose classification succeeds, by pruned
// exhaustive search. nullopt means not a galaxy.
std::optional<GalaxyDecomposition> find_galaxy_ordering(const Tournament& h, int cap = 10,
                                                        bool require_regular = false);

// Galaxy spec: one token per position, "C<id>" (center), "L<id>" (leaf) or
// "S" (singleton). Vertex i sits at position i of the resulting ordering.
enum class GalaxyTokenKind { Center, Leaf, Singleton };
struct GalaxyToken {
    GalaxyTokenKind kind;
    int star = -1;
};

std::vector<GalaxyToken> parse_galaxy_spec(const std::string& text);
std::string format_galaxy_spec(const std::vector<GalaxyToken>& tokens);

// Builds the tournament whose backward edges under the identity ordering are
// exactly the spec's star edges.
Tournament build_galaxy(const std::vector<GalaxyToken>& tokens);

} // namespace trn
