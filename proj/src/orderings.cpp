#include "trn/orderings.hpp"

#include <algorithm>
#include <sstream>

namespace trn {

namespace {

void check_ordering(const Tournament& t, const std::vector<int>& ordering) {
    if ((int)ordering.size() != t.n())
        throw Error(ErrorKind::BadPermutation, "ordering length mismatch");
    Bitset seen(t.n());
    for (int v : ordering) {
        if (v < 0 || v >= t.n() || seen.test(v))
            throw Error(ErrorKind::BadPermutation, "ordering is not a permutation");
        seen.set(v);
    }
}

} // namespace

BackwardGraph backward_graph(const Tournament& t, const std::vector<int>& ordering) {
    check_ordering(t, ordering);
    BackwardGraph b;
    for (int i = 0; i < t.n(); ++i)
        for (int j = i + 1; j < t.n(); ++j)
            if (t.beats(ordering[j], ordering[i])) b.edges.push_back({ordering[i], ordering[j]});
    return b;
}

namespace {

struct Component {
    std::vector<int> verts;         // vertex ids
    std::vector<std::vector<int>> adj; // local adjacency (indices into verts)
};

// Candidate reading of one backward component as a star: center + side.
struct StarOption {
    int center;
    std::vector<int> leaves;
    bool left;
};

// Decomposition block counts: scan non-singleton positions left to right and
// group maximal center runs / leaf runs. A leading or trailing leaf run gets
// an implicit zero-size center run so k always has one more entry than w.
void fill_runs(GalaxyDecomposition& d, const std::vector<int>& pos_of) {
    int n = (int)d.ordering.size();
    std::vector<char> role(n, 'S');
    for (auto& s : d.stars) {
        role[pos_of[s.center]] = 'C';
        for (int l : s.leaves) role[pos_of[l]] = 'L';
    }
    std::vector<std::pair<char, int>> runs;
    for (int p = 0; p < n; ++p) {
        if (role[p] == 'S') continue;
        if (!runs.empty() && runs.back().first == role[p]) runs.back().second++;
        else runs.push_back({role[p], 1});
    }
    d.k.clear();
    d.w.clear();
    if (runs.empty()) {
        d.k.push_back(0);
    } else {
        if (runs.front().first == 'L') d.k.push_back(0);
        for (auto& r : runs) {
            if (r.first == 'C') d.k.push_back(r.second);
            else d.w.push_back(r.second);
        }
        if (runs.back().first == 'L') d.k.push_back(0);
    }
    d.g = (int)d.stars.size();
    d.t = (int)d.w.size();
    d.regular = d.singletons.empty();
}

} // namespace

std::optional<GalaxyDecomposition> classify_ordering(const Tournament& t,
                                                     const std::vector<int>& ordering) {
    check_ordering(t, ordering);
    int n = t.n();
    std::vector<int> pos_of(n);
    for (int p = 0; p < n; ++p) pos_of[ordering[p]] = p;

    // Backward adjacency and components.
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (t.beats(ordering[j], ordering[i])) {
                adj[ordering[i]].push_back(ordering[j]);
                adj[ordering[j]].push_back(ordering[i]);
            }
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int v = 0; v < n; ++v) {
        if (comp[v] != -1) continue;
        std::vector<int> stack{v};
        comp[v] = ncomp;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int x : adj[u])
                if (comp[x] == -1) {
                    comp[x] = ncomp;
                    stack.push_back(x);
                }
        }
        ncomp++;
    }

    std::vector<int> singletons;
    std::vector<std::vector<StarOption>> options; // one entry per non-singleton component
    for (int c = 0; c < ncomp; ++c) {
        std::vector<int> verts;
        for (int v = 0; v < n; ++v)
            if (comp[v] == c) verts.push_back(v);
        if (verts.size() == 1) {
            singletons.push_back(verts[0]);
            continue;
        }
        std::sort(verts.begin(), verts.end(), [&](int a, int b) { return pos_of[a] < pos_of[b]; });
        int m = (int)verts.size();
        long long edges = 0;
        for (int v : verts) edges += (long long)adj[v].size();
        edges /= 2;
        if (edges != m - 1) return std::nullopt; // a star has exactly m-1 edges

        if (m == 2) {
            // K(1,1): either endpoint may be the center. Right star first.
            int a = verts[0], b = verts[1];
            options.push_back({StarOption{b, {a}, false}, StarOption{a, {b}, true}});
            continue;
        }
        int center = -1;
        for (int v : verts) {
            if ((int)adj[v].size() == m - 1) center = v;
            else if ((int)adj[v].size() != 1) return std::nullopt;
        }
        if (center == -1) return std::nullopt;
        std::vector<int> leaves;
        for (int v : verts)
            if (v != center) leaves.push_back(v);
        bool before_all = true, after_all = true;
        for (int l : leaves) {
            if (pos_of[center] > pos_of[l]) before_all = false;
            if (pos_of[center] < pos_of[l]) after_all = false;
        }
        if (before_all) options.push_back({StarOption{center, leaves, true}});
        else if (after_all) options.push_back({StarOption{center, leaves, false}});
        else return std::nullopt;
    }

    // Assignment search over the K(1,1) choices; the galaxy condition (no
    // center strictly inside another star's leaf span) decides.
    int s = (int)options.size();
    std::vector<int> pick(s, 0);
    while (true) {
        bool ok = true;
        for (int a = 0; a < s && ok; ++a) {
            const StarOption& sa = options[a][pick[a]];
            for (int b = 0; b < s && ok; ++b) {
                if (a == b) continue;
                const StarOption& sb = options[b][pick[b]];
                int lo = pos_of[sb.leaves.front()], hi = pos_of[sb.leaves.back()];
                if (lo < pos_of[sa.center] && pos_of[sa.center] < hi) ok = false;
            }
        }
        if (ok) break;
        int i = s - 1;
        while (i >= 0 && pick[i] + 1 >= (int)options[i].size()) pick[i--] = 0;
        if (i < 0) return std::nullopt;
        pick[i]++;
    }

    GalaxyDecomposition d;
    d.ordering = ordering;
    d.singletons = singletons;
    std::sort(d.singletons.begin(), d.singletons.end(),
              [&](int a, int b) { return pos_of[a] < pos_of[b]; });
    for (int a = 0; a < s; ++a) {
        const StarOption& so = options[a][pick[a]];
        d.stars.push_back(GalaxyStar{so.center, so.leaves, so.left});
    }
    std::sort(d.stars.begin(), d.stars.end(),
              [&](const GalaxyStar& a, const GalaxyStar& b) { return pos_of[a.center] < pos_of[b.center]; });
    fill_runs(d, pos_of);
    return d;
}

namespace {

// Prefix viability for the ordering search: degrees only grow and positions
// are fixed, so these two failures can never be repaired later.
bool prefix_viable(const Tournament& t, const std::vector<int>& prefix) {
    int p = (int)prefix.size();
    std::vector<int> deg(p, 0);
    std::vector<int> comp(p);
    for (int i = 0; i < p; ++i) comp[i] = i;
    auto find = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    std::vector<std::pair<int, int>> star_span(p, {-1, -1}); // per vertex: min/max backward-partner position
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            if (!t.beats(prefix[j], prefix[i])) continue;
            deg[i]++;
            deg[j]++;
            comp[find(i)] = find(j);
            auto upd = [&](int x, int q) {
                auto& sp = star_span[x];
                if (sp.first == -1 || q < sp.first) sp.first = q;
                if (sp.second == -1 || q > sp.second) sp.second = q;
            };
            upd(i, j);
            upd(j, i);
        }
    std::vector<int> heavy(p, -1); // component -> a vertex of backward degree >= 2
    for (int i = 0; i < p; ++i) {
        if (deg[i] < 2) continue;
        // a center must sit strictly before or after all of its leaves
        if (star_span[i].first < i && i < star_span[i].second) return false;
        int c = find(i);
        if (heavy[c] != -1) return false; // two centers in one component
        heavy[c] = i;
    }
    return true;
}

} // namespace

std::optional<GalaxyDecomposition> find_galaxy_ordering(const Tournament& h, int cap,
                                                        bool require_regular) {
    int n = h.n();
    if (n > cap)
        throw Error(ErrorKind::TooLarge,
                    "ordering search capped at " + std::to_string(cap) + " vertices");
    std::vector<int> prefix;
    std::vector<bool> used(n, false);
    std::optional<GalaxyDecomposition> found;

    auto dfs = [&](auto&& self) -> bool {
        if ((int)prefix.size() == n) {
            auto d = classify_ordering(h, prefix);
            if (d && (!require_regular || d->regular)) {
                found = std::move(d);
                return true;
            }
            return false;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            prefix.push_back(v);
            used[v] = true;
            if (prefix_viable(h, prefix) && self(self)) return true;
            used[v] = false;
            prefix.pop_back();
        }
        return false;
    };
    dfs(dfs);
    return found;
}

std::vector<GalaxyToken> parse_galaxy_spec(const std::string& text) {
    std::vector<GalaxyToken> tokens;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (tok == "S") {
            tokens.push_back({GalaxyTokenKind::Singleton, -1});
        } else if (tok.size() >= 2 && (tok[0] == 'C' || tok[0] == 'L')) {
            int id;
            try {
                size_t pos = 0;
                id = std::stoi(tok.substr(1), &pos);
                if (pos != tok.size() - 1) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw Error(ErrorKind::ParseError, "bad galaxy token '" + tok + "'");
            }
            tokens.push_back({tok[0] == 'C' ? GalaxyTokenKind::Center : GalaxyTokenKind::Leaf, id});
        } else {
            throw Error(ErrorKind::ParseError, "bad galaxy token '" + tok + "'");
        }
    }
    if (tokens.empty()) throw Error(ErrorKind::ParseError, "empty galaxy spec");
    return tokens;
}

std::string format_galaxy_spec(const std::vector<GalaxyToken>& tokens) {
    std::string out;
    for (auto& t : tokens) {
        switch (t.kind) {
            case GalaxyTokenKind::Center: out += "C" + std::to_string(t.star); break;
            case GalaxyTokenKind::Leaf: out += "L" + std::to_string(t.star); break;
            case GalaxyTokenKind::Singleton: out += "S"; break;
        }
        out += "\n";
    }
    return out;
}

Tournament build_galaxy(const std::vector<GalaxyToken>& tokens) {
    int n = (int)tokens.size();
    std::map<int, int> center_pos;
    std::map<int, std::vector<int>> leaf_pos;
    for (int p = 0; p < n; ++p) {
        const GalaxyToken& t = tokens[p];
        if (t.kind == GalaxyTokenKind::Center) {
            if (center_pos.count(t.star))
                throw Error(ErrorKind::SpecViolatesGalaxyCondition,
                            "star " + std::to_string(t.star) + " has two centers");
            center_pos[t.star] = p;
        } else if (t.kind == GalaxyTokenKind::Leaf) {
            leaf_pos[t.star].push_back(p);
        }
    }
    for (auto& [id, ls] : leaf_pos)
        if (!center_pos.count(id))
            throw Error(ErrorKind::SpecViolatesGalaxyCondition,
                        "star " + std::to_string(id) + " has leaves but no center");
    for (auto& [id, c] : center_pos) {
        auto it = leaf_pos.find(id);
        if (it == leaf_pos.end() || it->second.empty())
            throw Error(ErrorKind::SpecViolatesGalaxyCondition,
                        "star " + std::to_string(id) + " has no leaves");
        bool before = true, after = true;
        for (int lp : it->second) {
            if (c > lp) before = false;
            if (c < lp) after = false;
        }
        if (!before && !after)
            throw Error(ErrorKind::SpecViolatesGalaxyCondition,
                        "center of star " + std::to_string(id) + " sits among its own leaves");
    }
    for (auto& [ida, ca] : center_pos) {
        for (auto& [idb, lb] : leaf_pos) {
            if (ida == idb) continue;
            int lo = *std::min_element(lb.begin(), lb.end());
            int hi = *std::max_element(lb.begin(), lb.end());
            if (lo < ca && ca < hi)
                throw Error(ErrorKind::SpecViolatesGalaxyCondition,
                            "center of star " + std::to_string(ida) +
                                " lies between leaves of star " + std::to_string(idb));
        }
    }

    std::vector<Bitset> rows(n, Bitset(n));
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            bool star_pair = false;
            const GalaxyToken &a = tokens[p], &b = tokens[q];
            if (a.kind == GalaxyTokenKind::Center && b.kind == GalaxyTokenKind::Leaf &&
                a.star == b.star)
                star_pair = true;
            if (a.kind == GalaxyTokenKind::Leaf && b.kind == GalaxyTokenKind::Center &&
                a.star == b.star)
                star_pair = true;
            if (star_pair) rows[q].set(p); // backward: later position beats earlier
            else rows[p].set(q);
        }
    return Tournament(n, std::move(rows));
}

} // namespace trn
