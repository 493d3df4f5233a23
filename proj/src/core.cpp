#include "trn/core.hpp"

#include <fstream>
#include <sstream>

namespace trn {

Tournament::Tournament(int n, std::vector<Bitset> out_rows) : n_(n), out_(std::move(out_rows)) {
    if (n < 0 || (int)out_.size() != n)
        throw Error(ErrorKind::PreconditionViolated, "row count does not match vertex count");
    in_.assign(n, Bitset(n));
    for (int i = 0; i < n; ++i) {
        if (out_[i].universe() != n)
            throw Error(ErrorKind::PreconditionViolated, "row universe mismatch");
        if (out_[i].test(i)) throw Error(ErrorKind::SelfLoop, "diagonal bit set at " + std::to_string(i));
        for (int j = i + 1; j < n; ++j) {
            bool ij = out_[i].test(j), ji = out_[j].test(i);
            if (ij == ji)
                throw Error(ij ? ErrorKind::DuplicatePair : ErrorKind::MissingPair,
                            "pair {" + std::to_string(i) + "," + std::to_string(j) + "}");
        }
    }
    for (int i = 0; i < n; ++i)
        out_[i].for_each([&](int j) { in_[j].set(i); });
}

Tournament build_tournament(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 1) throw Error(ErrorKind::PreconditionViolated, "need n >= 1");
    std::vector<Bitset> rows(n, Bitset(n));
    std::vector<Bitset> seen(n, Bitset(n));
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw Error(ErrorKind::PreconditionViolated, "vertex out of range");
        if (a == b) throw Error(ErrorKind::SelfLoop, "edge (" + std::to_string(a) + "," + std::to_string(a) + ")");
        if (seen[a].test(b))
            throw Error(ErrorKind::DuplicatePair,
                        "pair {" + std::to_string(a) + "," + std::to_string(b) + "} oriented twice");
        seen[a].set(b);
        seen[b].set(a);
        rows[a].set(b);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!seen[i].test(j))
                throw Error(ErrorKind::MissingPair,
                            "pair {" + std::to_string(i) + "," + std::to_string(j) + "} unoriented");
    return Tournament(n, std::move(rows));
}

Tournament gen_transitive(int n) {
    if (n < 1) throw Error(ErrorKind::PreconditionViolated, "need n >= 1");
    std::vector<Bitset> rows(n, Bitset(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) rows[i].set(j);
    return Tournament(n, std::move(rows));
}

Tournament gen_c5() {
    std::vector<Bitset> rows(5, Bitset(5));
    for (int i = 0; i < 5; ++i) {
        rows[i].set((i + 1) % 5);
        rows[i].set((i + 2) % 5);
    }
    return Tournament(5, std::move(rows));
}

Tournament gen_random(int n, uint64_t seed) {
    if (n < 1) throw Error(ErrorKind::PreconditionViolated, "need n >= 1");
    SplitMix64 rng(seed);
    std::vector<Bitset> rows(n, Bitset(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (rng.coin()) rows[i].set(j);
            else rows[j].set(i);
        }
    return Tournament(n, std::move(rows));
}

Induced induced(const Tournament& t, const VertexSet& s) {
    if (s.none()) throw Error(ErrorKind::EmptySet, "induced subtournament of the empty set");
    std::vector<int> map = s.to_vector();
    int m = (int)map.size();
    std::vector<Bitset> rows(m, Bitset(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (a != b && t.beats(map[a], map[b])) rows[a].set(b);
    return Induced{Tournament(m, std::move(rows)), std::move(map)};
}

Substitution substitute(const Tournament& h, const std::vector<Tournament>& parts) {
    if ((int)parts.size() != h.n())
        throw Error(ErrorKind::ArityMismatch,
                    "expected " + std::to_string(h.n()) + " parts, got " + std::to_string(parts.size()));
    std::vector<int> start(h.n());
    int total = 0;
    for (int i = 0; i < h.n(); ++i) {
        if (parts[i].n() < 1) throw Error(ErrorKind::EmptySet, "empty part " + std::to_string(i));
        start[i] = total;
        total += parts[i].n();
    }
    std::vector<int> block_of(total);
    std::vector<Bitset> rows(total, Bitset(total));
    for (int i = 0; i < h.n(); ++i) {
        for (int a = 0; a < parts[i].n(); ++a) {
            int v = start[i] + a;
            block_of[v] = i;
            for (int b = 0; b < parts[i].n(); ++b)
                if (parts[i].beats(a, b)) rows[v].set(start[i] + b);
        }
        for (int j = 0; j < h.n(); ++j) {
            if (i == j || !h.beats(i, j)) continue;
            for (int a = 0; a < parts[i].n(); ++a)
                for (int b = 0; b < parts[j].n(); ++b) rows[start[i] + a].set(start[j] + b);
        }
    }
    return Substitution{Tournament(total, std::move(rows)), std::move(block_of), std::move(start)};
}

Rational density(const Tournament& t, const VertexSet& x, const VertexSet& y) {
    if (x.none() || y.none()) throw Error(ErrorKind::EmptySet, "density of an empty set");
    if (x.intersects(y)) throw Error(ErrorKind::Overlap, "density sets must be disjoint");
    long long e = 0;
    x.for_each([&](int v) { e += t.out(v).count_and(y); });
    return Rational(BigInt(e), BigInt(x.count()) * y.count());
}

Rational density_from(const Tournament& t, int v, const VertexSet& y) {
    if (y.none()) throw Error(ErrorKind::EmptySet, "density of an empty set");
    if (y.test(v)) throw Error(ErrorKind::Overlap, "vertex inside the set");
    return Rational(BigInt(t.out(v).count_and(y)), BigInt(y.count()));
}

Rational density_to(const Tournament& t, const VertexSet& x, int v) {
    if (x.none()) throw Error(ErrorKind::EmptySet, "density of an empty set");
    if (x.test(v)) throw Error(ErrorKind::Overlap, "vertex inside the set");
    return Rational(BigInt(t.in(v).count_and(x)), BigInt(x.count()));
}

std::string serialize(const Tournament& t) {
    std::string s = "trn v1\n" + std::to_string(t.n()) + "\n";
    for (int i = 0; i < t.n(); ++i) {
        for (int j = 0; j < t.n(); ++j) s += t.beats(i, j) ? '1' : '0';
        s += '\n';
    }
    return s;
}

Tournament parse_tournament(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "trn v1")
        throw Error(ErrorKind::ParseError, "missing 'trn v1' header");
    if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "missing vertex count");
    int n;
    try {
        size_t pos = 0;
        n = std::stoi(line, &pos);
        if (pos != line.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad vertex count line: '" + line + "'");
    }
    if (n < 1) throw Error(ErrorKind::ParseError, "vertex count must be >= 1");
    std::vector<Bitset> rows(n, Bitset(n));
    for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "missing row " + std::to_string(i));
        if ((int)line.size() != n)
            throw Error(ErrorKind::ParseError, "row " + std::to_string(i) + " has wrong length");
        for (int j = 0; j < n; ++j) {
            if (line[j] == '1') rows[i].set(j);
            else if (line[j] != '0')
                throw Error(ErrorKind::ParseError, "row " + std::to_string(i) + " has a non-binary character");
        }
        if (rows[i].test(i)) throw Error(ErrorKind::ParseError, "nonzero diagonal at row " + std::to_string(i));
    }
    if (std::getline(in, line) && !line.empty())
        throw Error(ErrorKind::ParseError, "trailing content after matrix");
    try {
        return Tournament(n, std::move(rows));
    } catch (const Error& e) {
        throw Error(ErrorKind::ParseError, std::string("matrix is not a tournament (") + e.what() + ")");
    }
}

Tournament load_tournament(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_tournament(ss.str());
}

void save_tournament(const Tournament& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::ParseError, "cannot write " + path);
    f << serialize(t);
}

} // namespace trn
