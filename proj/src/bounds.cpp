#include "trn/bounds.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "trn/orderings.hpp"
#include "trn/transitive.hpp"

namespace trn {

Tournament iterate_substitution(const Tournament& b, int k, long long size_cap) {
    if (k < 0) throw Error(ErrorKind::PreconditionViolated, "depth must be >= 0");
    long long size = 1;
    for (int i = 0; i < k; ++i) {
        size *= b.n();
        if (size > size_cap)
            throw Error(ErrorKind::TooLarge, "iterated substitution exceeds the size cap");
    }
    Tournament cur = gen_transitive(1);
    for (int i = 0; i < k; ++i) {
        std::vector<Tournament> parts(b.n(), cur);
        cur = substitute(b, parts).t;
    }
    return cur;
}

Real lower_bound_formula(int h, LowerFamily family, const Real& c) {
    if (h < 2) throw Error(ErrorKind::DomainError, "lower bound formulas need h >= 2");
    Real hh(h);
    switch (family) {
        case LowerFamily::Galaxy:
            return c / (rpow(hh, Real(5)) * rlog(hh));
        case LowerFamily::Star:
            return Real(1) / (Real(3) * hh * rlog(Real(2) * hh));
        case LowerFamily::General:
            return c * rexp(-(hh + 1) * rlog(hh + 1));
    }
    throw Error(ErrorKind::DomainError, "unknown family");
}

Real upper_bound_formula(const Tournament& h, UpperMode mode, const Real& c) {
    if (h.n() < 2) throw Error(ErrorKind::DomainError, "upper bound formulas need h >= 2");
    HomoStructure hs = analyze_homogeneous(h);
    if (mode == UpperMode::Prime) {
        if (!hs.is_prime) throw Error(ErrorKind::NotPrime, "prime upper bound on a non-prime pattern");
        Real hh(h.n());
        return c * rlog(hh) / hh;
    }
    Real p(hs.p);
    if (hs.p < 3)
        throw Error(ErrorKind::DomainError, "partition formula needs p >= 3 for a positive log log");
    return c * rlog(rlog(p)) / rlog(p);
}

Real compose_lower_bound(const Real& eps_f, const Real& eps_d, int k) {
    if (!(eps_f > 0) || eps_f > 1 || !(eps_d > 0) || eps_d > 1 || k < 1)
        throw Error(ErrorKind::DomainError, "composition needs eps in (0,1] and k >= 1");
    return eps_f * eps_d / (eps_d + Real(k) * eps_f);
}

std::optional<UpperCertificate> certify_upper(const Tournament& h, int n, uint64_t seed,
                                              const CertifyOptions& opts) {
    if (h.n() > opts.quotient_cap)
        throw Error(ErrorKind::TooLarge, "pattern too large for quotient enumeration");
    if (n > opts.n_cap)
        throw Error(ErrorKind::TooLarge, "certificate base capped at " + std::to_string(opts.n_cap));
    if (n < 1) throw Error(ErrorKind::PreconditionViolated, "need n >= 1");
    int budget = opts.delete_budget >= 0 ? opts.delete_budget : 2 * h.n();

    auto quotients = enumerate_quotients(h, opts.quotient_cap);
    // Identical labeled quotients only need one embedding search each.
    std::vector<Tournament> uniq;
    {
        std::map<std::string, bool> seen;
        for (auto& q : quotients)
            if (seen.emplace(serialize(q.q), true).second) uniq.push_back(q.q);
    }

    for (int trial = 0; trial < opts.trials; ++trial) {
        uint64_t trial_seed = seed + (uint64_t)trial;
        Tournament sample = gen_random(n, trial_seed);
        std::vector<int> alive(n);
        for (int i = 0; i < n; ++i) alive[i] = i;
        Tournament cur = sample;
        std::vector<int> deleted;

        while ((int)deleted.size() <= budget) {
            std::vector<std::vector<int>> found;
            for (auto& q : uniq) {
                if (q.n() > cur.n()) continue;
                auto emb = find_embedding(cur, q);
                if (emb) found.push_back(*emb);
            }
            if (found.empty()) break;
            if ((int)deleted.size() == budget) {
                deleted.push_back(-1); // budget exhausted marker, trial fails below
                break;
            }
            std::vector<int> freq(cur.n(), 0);
            for (auto& emb : found)
                for (int v : emb) freq[v]++;
            int pick = 0;
            for (int v = 1; v < cur.n(); ++v)
                if (freq[v] > freq[pick]) pick = v;
            deleted.push_back(alive[pick]);
            alive.erase(alive.begin() + pick);
            Bitset keep = Bitset::full(cur.n());
            keep.reset(pick);
            if (keep.none()) break;
            cur = induced(cur, keep).t;
        }
        if (!deleted.empty() && deleted.back() == -1) continue;
        if (cur.n() < 2) continue;
        if (!is_h_far(cur, h, opts.quotient_cap)) continue; // independent re-check

        UpperCertificate cert;
        cert.base = cur;
        cert.deleted = deleted;
        cert.trial_seed = trial_seed;
        cert.verified_h_far = true;
        cert.tr = max_transitive_exact(cur, opts.exact_cap).size();
        cert.eps_upper = rlog(Real(cert.tr)) / rlog(Real(cur.n()));
        return cert;
    }
    return std::nullopt;
}

BoundRecord bound_report(const Tournament& h, int galaxy_cap, int structure_cap) {
    BoundRecord r;
    r.h = h.n();
    if (h.n() < 2) {
        r.lower.provenance = "undefined for a single vertex";
        r.upper.provenance = "undefined for a single vertex";
        return r;
    }

    HomoStructure hs = analyze_homogeneous(h, structure_cap);

    // Lower side.
    bool star = star_shape(h).has_value();
    bool galaxy = false;
    if (h.n() <= galaxy_cap) galaxy = find_galaxy_ordering(h, galaxy_cap).has_value();
    if (star) {
        r.lower.value = lower_bound_formula(h.n(), LowerFamily::Star);
        r.lower.provenance = "star_formula";
    } else if (galaxy) {
        r.lower.value = lower_bound_formula(h.n(), LowerFamily::Galaxy);
        r.lower.provenance = "galaxy_formula";
    } else if (!hs.is_prime) {
        // Compose over the minimum-parts homogeneous partitioning, folding
        // nontrivial parts into the quotient skeleton one by one.
        auto parts_of = [&](const HomoStructure& s) -> const std::vector<VertexSet>* {
            const std::vector<VertexSet>* best = nullptr;
            for (auto& pa : s.partitions)
                if (!best || pa.size() < best->size()) best = &pa;
            return best;
        };
        std::function<std::optional<Real>(const Tournament&)> lower_of =
            [&](const Tournament& g) -> std::optional<Real> {
            if (g.n() == 1) return Real(1);
            if (star_shape(g)) return lower_bound_formula(g.n(), LowerFamily::Star);
            if (g.n() <= galaxy_cap && find_galaxy_ordering(g, galaxy_cap))
                return lower_bound_formula(g.n(), LowerFamily::Galaxy);
            HomoStructure gs = analyze_homogeneous(g, structure_cap);
            if (gs.is_prime) return std::nullopt; // prime non-galaxy: no formula in scope
            const std::vector<VertexSet>* pa = parts_of(gs);
            if (!pa) return std::nullopt;
            std::vector<int> rep;
            for (auto& part : *pa) rep.push_back(part.next());
            Bitset repset(g.n());
            for (int v : rep) repset.set(v);
            auto skel = induced(g, repset).t;
            auto cur = lower_of(skel);
            if (!cur) return std::nullopt;
            int k = skel.n();
            for (auto& part : *pa) {
                if (part.count() < 2) continue;
                auto sub = induced(g, part).t;
                auto f = lower_of(sub);
                if (!f) return std::nullopt;
                cur = compose_lower_bound(*f, *cur, k);
                k += part.count() - 1;
            }
            return cur;
        };
        auto v = lower_of(h);
        if (v) {
            r.lower.value = *v;
            r.lower.provenance = "composition";
        } else {
            r.lower.provenance = "decomposition contains a prime non-galaxy factor; no formula in scope";
        }
    } else {
        r.lower.provenance = "not a galaxy; no lower formula in scope";
    }

    // Upper side.
    if (hs.is_prime) {
        r.upper.value = upper_bound_formula(h, UpperMode::Prime);
        r.upper.provenance = "prime_formula";
    } else if (hs.p >= 3) {
        r.upper.value = upper_bound_formula(h, UpperMode::Partition);
        r.upper.provenance = "partition_formula";
    } else {
        r.upper.provenance = "partition formula degenerate for p = " + std::to_string(hs.p);
    }

    Real logh = rlog(Real(r.h));
    if (r.lower.value) r.lower.log_ratio = rlog(*r.lower.value) / logh;
    if (r.upper.value) r.upper.log_ratio = rlog(*r.upper.value) / logh;
    return r;
}

namespace {

std::string real12(const Real& v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << std::fixed << v;
    return ss.str();
}

} // namespace

std::string format_bound_record(const BoundRecord& r) {
    std::ostringstream ss;
    ss << "h=" << r.h << "\n";
    if (r.lower.value) {
        ss << "eps_lower=" << real12(*r.lower.value) << " provenance=" << r.lower.provenance << "\n";
        ss << "log_ratio_lower=" << real12(*r.lower.log_ratio) << "\n";
    } else {
        ss << "eps_lower=absent reason=\"" << r.lower.provenance << "\"\n";
    }
    if (r.upper.value) {
        ss << "eps_upper=" << real12(*r.upper.value) << " provenance=" << r.upper.provenance << "\n";
        ss << "log_ratio_upper=" << real12(*r.upper.log_ratio) << "\n";
    } else {
        ss << "eps_upper=absent reason=\"" << r.upper.provenance << "\"\n";
    }
    return ss.str();
}

} // namespace trn
