#include "trn/structure.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace trn {

bool is_homogeneous(const Tournament& h, const VertexSet& s) {
    int size = s.count();
    if (size == 0) return true; // vacuous
    for (int v = 0; v < h.n(); ++v) {
        if (s.test(v)) continue;
        int to = h.out(v).count_and(s);
        if (to != 0 && to != size) return false;
    }
    return true;
}

namespace {

// n <= 16 throughout: subsets are uint32 masks, rows premasked.
struct MaskCtx {
    int n;
    std::vector<uint32_t> out;

    bool homo(uint32_t s) const {
        int size = std::popcount(s);
        uint32_t all = (n == 32 ? ~0u : (1u << n) - 1);
        uint32_t rest = all & ~s;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            int to = std::popcount(out[v] & s);
            if (to != 0 && to != size) return false;
        }
        return true;
    }
};

void enum_partitions(const std::vector<std::vector<uint32_t>>& by_low, uint32_t remaining,
                     std::vector<uint32_t>& acc, std::vector<std::vector<uint32_t>>& out,
                     long long budget) {
    if (remaining == 0) {
        if (acc.size() >= 2) {
            if ((long long)out.size() >= budget)
                throw Error(ErrorKind::BudgetExceeded, "too many homogeneous partitionings");
            out.push_back(acc);
        }
        return;
    }
    int low = std::countr_zero(remaining);
    for (uint32_t s : by_low[low]) {
        if ((s & ~remaining) != 0) continue;
        acc.push_back(s);
        enum_partitions(by_low, remaining & ~s, acc, out, budget);
        acc.pop_back();
    }
}

} // namespace

HomoStructure analyze_homogeneous(const Tournament& h, int cap, long long partition_budget) {
    int n = h.n();
    if (n < 1) throw Error(ErrorKind::PreconditionViolated, "empty tournament");
    if (n > cap)
        throw Error(ErrorKind::TooLarge,
                    "exhaustive homogeneous analysis capped at " + std::to_string(cap) + " vertices");

    HomoStructure res;
    if (n == 1) {
        res.is_prime = true;
        res.p = 1;
        return res;
    }

    MaskCtx ctx{n, {}};
    ctx.out.resize(n);
    for (int i = 0; i < n; ++i) {
        uint32_t row = 0;
        for (int j = 0; j < n; ++j)
            if (i != j && h.beats(i, j)) row |= 1u << j;
        ctx.out[i] = row;
    }

    uint32_t all = (1u << n) - 1;
    std::vector<uint32_t> homo_masks; // every homogeneous subset except V itself
    for (uint32_t s = 1; s < all; ++s) {
        if (!ctx.homo(s)) continue;
        homo_masks.push_back(s);
        int size = std::popcount(s);
        if (size > 1) {
            Bitset b(n);
            for (int v = 0; v < n; ++v)
                if (s & (1u << v)) b.set(v);
            res.homo_sets.push_back(b);
        }
    }
    res.is_prime = res.homo_sets.empty();

    std::vector<std::vector<uint32_t>> by_low(n);
    for (uint32_t s : homo_masks) by_low[std::countr_zero(s)].push_back(s);

    std::vector<uint32_t> acc;
    std::vector<std::vector<uint32_t>> parts;
    enum_partitions(by_low, all, acc, parts, partition_budget);

    res.p = n;
    for (auto& pa : parts) {
        res.p = std::min(res.p, (int)pa.size());
        std::vector<Bitset> bp;
        for (uint32_t s : pa) {
            Bitset b(n);
            for (int v = 0; v < n; ++v)
                if (s & (1u << v)) b.set(v);
            bp.push_back(b);
        }
        res.partitions.push_back(std::move(bp));
    }
    return res;
}

std::vector<Quotient> enumerate_quotients(const Tournament& h, int cap, long long partition_budget) {
    if (h.n() < 2)
        throw Error(ErrorKind::DomainError, "quotients are defined for tournaments with >= 2 vertices");
    HomoStructure hs = analyze_homogeneous(h, cap, partition_budget);
    std::vector<Quotient> out;
    for (auto& pa : hs.partitions) {
        int k = (int)pa.size();
        std::vector<int> rep(k);
        for (int i = 0; i < k; ++i) rep[i] = pa[i].next();
        std::vector<Bitset> rows(k, Bitset(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (i != j && h.beats(rep[i], rep[j])) rows[i].set(j);
        out.push_back(Quotient{Tournament(k, std::move(rows)), pa});
    }
    return out;
}

namespace {

struct EmbedSearcher {
    const Tournament& t;
    const Tournament& h;
    std::vector<int> horder; // h vertices, most constrained first
    std::vector<int> img;    // horder position -> t vertex
    std::vector<Bitset> cand;

    bool go(int d) {
        if (d == (int)horder.size()) return true;
        Bitset& c = cand[d];
        c = Bitset::full(t.n());
        for (int m = 0; m < d; ++m) {
            bool fwd = h.beats(horder[d], horder[m]);
            c &= fwd ? t.in(img[m]) : t.out(img[m]);
        }
        for (int v = c.next(); v != -1; v = c.next(v + 1)) {
            img[d] = v;
            if (go(d + 1)) return true;
        }
        return false;
    }
};

} // namespace

std::optional<std::vector<int>> find_embedding(const Tournament& t, const Tournament& h) {
    if (h.n() > t.n()) return std::nullopt;
    EmbedSearcher se{t, h, {}, {}, {}};
    se.horder.resize(h.n());
    for (int i = 0; i < h.n(); ++i) se.horder[i] = i;
    std::sort(se.horder.begin(), se.horder.end(), [&](int a, int b) {
        int da = std::max(h.outdegree(a), h.indegree(a));
        int db = std::max(h.outdegree(b), h.indegree(b));
        return da != db ? da > db : a < b;
    });
    se.img.resize(h.n());
    se.cand.assign(h.n(), Bitset(t.n()));
    if (!se.go(0)) return std::nullopt;
    std::vector<int> map(h.n());
    for (int d = 0; d < h.n(); ++d) map[se.horder[d]] = se.img[d];
    return map;
}

void verify_embedding(const Tournament& t, const Tournament& h, const std::vector<int>& map) {
    if ((int)map.size() != h.n())
        throw Error(ErrorKind::VerificationFailed, "embedding arity mismatch");
    Bitset used(t.n());
    for (int v : map) {
        if (v < 0 || v >= t.n() || used.test(v))
            throw Error(ErrorKind::VerificationFailed, "embedding is not injective into the host");
        used.set(v);
    }
    for (int a = 0; a < h.n(); ++a)
        for (int b = 0; b < h.n(); ++b)
            if (a != b && h.beats(a, b) && !t.beats(map[a], map[b]))
                throw Error(ErrorKind::VerificationFailed, "embedding does not preserve an edge");
}

bool is_h_far(const Tournament& t, const Tournament& h, int cap) {
    if (h.n() < 2)
        throw Error(ErrorKind::PreconditionViolated, "H-farness needs |H| >= 2");
    auto quotients = enumerate_quotients(h, cap);
    std::map<std::string, bool> seen; // identical labeled quotients share one search
    for (auto& q : quotients) {
        std::string key = serialize(q.q);
        auto it = seen.find(key);
        if (it != seen.end()) {
            if (it->second) return false;
            continue;
        }
        bool found = find_embedding(t, q.q).has_value();
        seen[key] = found;
        if (found) return false;
    }
    return true;
}

} // namespace trn
