#include "trn/pipeline.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "trn/structure.hpp"

namespace trn {

namespace {

std::string rstr(const Rational& r) { return r.str(); }

// count >= frac * total, exactly.
bool count_at_least(long long count, const Rational& frac, long long total) {
    return BigInt(count) * frac.den() >= frac.num() * BigInt(total);
}

// count <= frac * total, exactly.
bool count_at_most(long long count, const Rational& frac, long long total) {
    return BigInt(count) * frac.den() <= frac.num() * BigInt(total);
}

// Backward edge count from x to y: pairs (a in x, b in y) with b beating a.
long long miss_edges(const Tournament& t, const Bitset& x, const Bitset& y) {
    long long m = 0;
    x.for_each([&](int v) { m += t.in(v).count_and(y); });
    return m;
}

} // namespace

Rational l_sequence_linearity(int h, int u, const Rational& lambda) {
    int b = ceil_log_int(u);
    if (b == 0) return Rational(1);
    Rational denom = Rational::from_int(pow2(2 * (h + 3))) * Rational(h) * Rational(h);
    denom = denom * Rational(u).pow(h) * Rational(b).pow(2 * h);
    Rational base = lambda.pow(h) / denom;
    return base.pow(b);
}

namespace {

PipelineParams make_params(const Tournament& h, int u, std::optional<Rational> c1_in,
                           std::optional<Rational> c2_in, int galaxy_cap) {
    auto dec = find_galaxy_ordering(h, galaxy_cap, true);
    if (!dec) dec = find_galaxy_ordering(h, galaxy_cap, false);
    if (!dec) throw Error(ErrorKind::NotAGalaxy, "pattern admits no galaxy ordering");

    PipelineParams p;
    p.h = h.n();
    p.u = u;
    p.g = dec->g;
    p.t = dec->t;
    p.k = dec->k;
    p.w = dec->w;
    p.dec = *dec;

    int hh = p.h, t = p.t;
    unsigned exp = (unsigned)(t + 1) * hh * hh + hh;
    BigInt big = BigInt(24) * hh * hh * hh * pow2(exp);
    p.lambda_embed = Rational(1, big);
    if (t >= 1) {
        BigInt big2 = BigInt(1536) * t * t * (t + 1) * BigInt(hh) * hh * hh * pow2(exp);
        p.lambda_assembly = Rational(1, big2);
    } else {
        p.lambda_assembly = p.lambda_embed;
    }
    p.c_seq = l_sequence_linearity(hh, u, p.lambda_assembly);

    p.c1 = c1_in ? *c1_in : Rational(1, 4);
    p.c2 = c2_in ? *c2_in : p.c_seq / Rational(2);
    if (!(p.c1 > Rational(0)) || !(p.c2 > Rational(0)))
        throw Error(ErrorKind::PreconditionViolated, "linearity coefficients must be positive");

    BigInt sumk2 = 0;
    for (int ki : p.k) sumk2 += BigInt(ki) * ki;
    p.m1 = Rational::from_int(BigInt(24) * pow2((unsigned)(sumk2 + p.g).convert_to<unsigned long long>())) / p.c2;

    int maxw = 0;
    for (int wi : p.w) maxw = std::max(maxw, wi);
    if (t >= 1) {
        p.m2 = Rational(4 * maxw) / p.c1;
        if (!(p.m2 > Rational(1)))
            throw Error(ErrorKind::PreconditionViolated, "m2 <= 1: c1 too large for the leaf blocks");
        Real m1r = to_real(p.m1), m2r = to_real(p.m2);
        p.epsilon = rlog(Real(1) + Real(1) / (m2r - 1)) / rlog(m1r);
    } else {
        p.m2 = Rational(0);
        p.epsilon = rlog(Real(2)) / rlog(to_real(p.m1));
    }
    return p;
}

} // namespace

PipelineParams params_for(const Tournament& h, int u, int galaxy_cap) {
    return make_params(h, u, std::nullopt, std::nullopt, galaxy_cap);
}

PipelineParams params_with(const Tournament& h, int u, const Rational& c1, const Rational& c2,
                           int galaxy_cap) {
    return make_params(h, u, c1, c2, galaxy_cap);
}

void verify_l_sequence(const Tournament& t, const LSequence& seq) {
    long long n = t.n();
    int k = (int)seq.sets.size();
    if (k == 0) throw Error(ErrorKind::VerificationFailed, "empty sequence");
    Bitset seen(t.n());
    for (auto& s : seq.sets) {
        if (s.none()) throw Error(ErrorKind::VerificationFailed, "empty set in sequence");
        if (seen.intersects(s)) throw Error(ErrorKind::VerificationFailed, "sets overlap");
        seen |= s;
        if (!count_at_least(s.count(), seq.c, n))
            throw Error(ErrorKind::VerificationFailed, "set below the linearity floor");
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            long long szi = seq.sets[i].count(), szj = seq.sets[j].count();
            long long miss = miss_edges(t, seq.sets[i], seq.sets[j]);
            if (!count_at_most(miss, seq.lambda, szi * szj))
                throw Error(ErrorKind::VerificationFailed, "pairwise density below 1-lambda");
            if (seq.smooth) {
                // per-vertex in both directions
                bool ok = true;
                seq.sets[i].for_each([&](int v) {
                    long long m = t.in(v).count_and(seq.sets[j]);
                    if (!count_at_most(m, seq.lambda, szj)) ok = false;
                });
                seq.sets[j].for_each([&](int v) {
                    long long m = t.out(v).count_and(seq.sets[i]);
                    if (!count_at_most(m, seq.lambda, szi)) ok = false;
                });
                if (!ok)
                    throw Error(ErrorKind::VerificationFailed, "per-vertex smoothness violated");
            }
        }
}

void verify_m_sequence(const Tournament& t, const MSequence& seq) {
    long long n = t.n();
    int k = (int)seq.sets.size();
    if (k == 0 || k % 2 == 0)
        throw Error(ErrorKind::VerificationFailed, "m-sequence length must be odd");
    if (seq.trans_order.size() != seq.sets.size())
        throw Error(ErrorKind::VerificationFailed, "transitive order list mismatch");
    Bitset seen(t.n());
    Real neps = rpow(Real(n), seq.epsilon);
    for (int i = 0; i < k; ++i) {
        const Bitset& s = seq.sets[i];
        if (s.none()) throw Error(ErrorKind::VerificationFailed, "empty set in m-sequence");
        if (seen.intersects(s)) throw Error(ErrorKind::VerificationFailed, "sets overlap");
        seen |= s;
        bool trans_slot = (i % 2 == 1); // 0-based; 1-based even positions
        if (!trans_slot) {
            if (!count_at_least(s.count(), seq.c2, n))
                throw Error(ErrorKind::VerificationFailed, "linear part below c2*n");
        } else {
            if (Real(s.count()) < to_real(seq.c1) * neps)
                throw Error(ErrorKind::VerificationFailed, "transitive part below c1*n^eps");
            const auto& ord = seq.trans_order[i];
            TransitiveWitness w;
            w.vertices = s;
            w.order = ord;
            verify_witness(t, w);
        }
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            long long szi = seq.sets[i].count(), szj = seq.sets[j].count();
            long long miss = miss_edges(t, seq.sets[i], seq.sets[j]);
            if (!count_at_most(miss, seq.lambda, szi * szj))
                throw Error(ErrorKind::VerificationFailed, "pairwise density below 1-lambda");
            if (seq.smooth) {
                bool ok = true;
                seq.sets[i].for_each([&](int v) {
                    long long m = t.in(v).count_and(seq.sets[j]);
                    if (!count_at_most(m, seq.lambda, szj)) ok = false;
                });
                seq.sets[j].for_each([&](int v) {
                    long long m = t.out(v).count_and(seq.sets[i]);
                    if (!count_at_most(m, seq.lambda, szi)) ok = false;
                });
                if (!ok)
                    throw Error(ErrorKind::VerificationFailed, "per-vertex smoothness violated");
            }
        }
}

namespace {

struct DensePairCtx {
    const Tournament& t;
    const Tournament& h;
    Rational lambda;
    long long nz;
    std::vector<int> img;
    DensePair out;
    bool pair_found = false;

    // Either completes img[idx..] (returning true) or records a dense pair.
    bool rec(int idx, std::vector<Bitset> sets) {
        int hn = h.n();
        if (idx == hn) return true;

        // first vertex with both neighborhoods substantial in every later set
        for (int v = sets[idx].next(); v != -1; v = sets[idx].next(v + 1)) {
            bool regular = true;
            for (int j = idx + 1; j < hn && regular; ++j) {
                long long szj = sets[j].count();
                long long np = t.out(v).count_and(sets[j]);
                long long nm = szj - np;
                if (!count_at_least(np, lambda, szj) || !count_at_least(nm, lambda, szj))
                    regular = false;
            }
            if (!regular) continue;
            img[idx] = v;
            std::vector<Bitset> next = sets;
            for (int j = idx + 1; j < hn; ++j)
                next[j] &= h.beats(idx, j) ? t.out(v) : t.in(v);
            return rec(idx + 1, next);
        }

        // no regular vertex: every v has some one-sided set; bucket by
        // (set, side) and keep the biggest bucket
        int bestj = -1;
        bool best_plus_small = false;
        int best_count = -1;
        for (int j = idx + 1; j < hn; ++j) {
            long long szj = sets[j].count();
            int cnt_plus = 0, cnt_minus = 0;
            for (int v = sets[idx].next(); v != -1; v = sets[idx].next(v + 1)) {
                long long np = t.out(v).count_and(sets[j]);
                long long nm = szj - np;
                if (!count_at_least(np, lambda, szj)) cnt_plus++;
                if (!count_at_least(nm, lambda, szj)) cnt_minus++;
            }
            if (cnt_plus > best_count) { best_count = cnt_plus; bestj = j; best_plus_small = true; }
            if (cnt_minus > best_count) { best_count = cnt_minus; bestj = j; best_plus_small = false; }
        }
        if (best_count <= 0)
            throw Error(ErrorKind::VerificationFailed, "non-regular level without a pigeonhole bucket");

        Bitset u(t.n());
        long long szj = sets[bestj].count();
        for (int v = sets[idx].next(); v != -1; v = sets[idx].next(v + 1)) {
            long long np = t.out(v).count_and(sets[bestj]);
            long long nm = szj - np;
            bool small = best_plus_small ? !count_at_least(np, lambda, szj)
                                         : !count_at_least(nm, lambda, szj);
            if (small) u.set(v);
        }
        if (best_plus_small) {
            // v has almost no out-edges into the set: the set nearly beats v
            out.x1 = sets[bestj];
            out.x2 = u;
        } else {
            out.x1 = u;
            out.x2 = sets[bestj];
        }
        pair_found = true;
        return false;
    }
};

} // namespace

DensePair dense_pair_or_h(const Tournament& t, const Tournament& h,
                          const std::vector<VertexSet>& sets, const Rational& lambda,
                          const VertexSet& universe, Trace* trace) {
    int hn = h.n();
    if ((int)sets.size() != hn)
        throw Error(ErrorKind::PreconditionViolated, "one set per pattern vertex required");
    if (!(lambda > Rational(0)) || !(lambda < Rational(1)))
        throw Error(ErrorKind::PreconditionViolated, "lambda must be in (0,1)");
    long long nz = universe.count();
    if (nz == 0) throw Error(ErrorKind::PreconditionViolated, "empty universe");
    Bitset seen(t.n());
    Rational c(1);
    for (auto& s : sets) {
        if (s.none()) throw Error(ErrorKind::PreconditionViolated, "empty set");
        if (!s.subset_of(universe))
            throw Error(ErrorKind::PreconditionViolated, "set escapes the universe");
        if (seen.intersects(s)) throw Error(ErrorKind::PreconditionViolated, "sets overlap");
        seen |= s;
        Rational cs(BigInt(s.count()), BigInt(nz));
        if (cs < c) c = cs;
    }

    DensePairCtx ctx{t, h, lambda, nz, std::vector<int>(hn, -1), {}, false};
    bool embedded = ctx.rec(0, sets);
    DensePair res;
    if (embedded) {
        res.embedding = ctx.img;
        verify_embedding(t, h, *res.embedding);
        for (int i = 0; i < hn; ++i)
            if (!sets[i].test((*res.embedding)[i]))
                throw Error(ErrorKind::VerificationFailed, "embedding escaped its sets");
        if (trace) trace->note("op=dense_pair_or_h nz=" + std::to_string(nz) + " branch=embedding");
        return res;
    }
    res.x1 = ctx.out.x1;
    res.x2 = ctx.out.x2;

    // exact contract checks: sizes >= (lambda^h c / h) nz, density >= 1-lambda
    Rational floor_frac = lambda.pow(hn) * c / Rational(hn);
    if (!count_at_least(res.x1.count(), floor_frac, nz) ||
        !count_at_least(res.x2.count(), floor_frac, nz))
        throw Error(ErrorKind::VerificationFailed, "dense pair below its size floor");
    long long miss = miss_edges(t, res.x1, res.x2);
    if (!count_at_most(miss, lambda, (long long)res.x1.count() * res.x2.count()))
        throw Error(ErrorKind::VerificationFailed, "dense pair below its density floor");
    if (trace)
        trace->note("op=dense_pair_or_h nz=" + std::to_string(nz) + " branch=pair x1=" +
                    std::to_string(res.x1.count()) + " x2=" + std::to_string(res.x2.count()));
    return res;
}

namespace {

struct LSeqBuilder {
    const Tournament& t;
    const Tournament& h;
    Rational lambda2;
    const SequenceOptions& opts;
    Trace* trace;

    std::vector<Bitset> build(const Bitset& s, int lvl) {
        if (lvl == 0) return {s};
        long long m = s.count();
        if (m < h.n())
            throw Error(ErrorKind::TooSmall,
                        "cannot split " + std::to_string(m) + " vertices into " +
                            std::to_string(h.n()) + " parts");

        // equal split by ascending vertex index, remainder to the front parts
        std::vector<Bitset> parts(h.n(), Bitset(t.n()));
        {
            std::vector<int> vs = s.to_vector();
            long long base = m / h.n(), extra = m % h.n();
            size_t at = 0;
            for (int i = 0; i < h.n(); ++i) {
                long long take = base + (i < extra ? 1 : 0);
                for (long long a = 0; a < take; ++a) parts[i].set(vs[at++]);
            }
        }

        DensePair dp = dense_pair_or_h(t, h, parts, lambda2, s, trace);
        if (dp.embedding) throw FoundH(*dp.embedding);

        auto harvest = [&](const Bitset& side) {
            std::vector<std::vector<Bitset>> seqs;
            Bitset rem = side;
            long long total = side.count();
            while (2 * rem.count() >= total) {
                if (rem.count() < h.n()) break;
                std::vector<Bitset> sub;
                try {
                    sub = build(rem, lvl - 1);
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::TooSmall) break;
                    throw;
                }
                seqs.push_back(sub);
                for (auto& x : sub) rem -= x;
                if ((long long)seqs.size() > opts.extraction_budget)
                    throw Error(ErrorKind::BudgetExceeded, "subsequence extraction budget exceeded");
            }
            return seqs;
        };
        auto seqs1 = harvest(dp.x1);
        auto seqs2 = harvest(dp.x2);
        if (seqs1.empty() || seqs2.empty())
            throw Error(ErrorKind::TooSmall, "dense pair side too small to carry a subsequence");

        // first pair of extracted subsequences whose unions are near-complete
        Rational thr = Rational(4) * lambda2;
        for (size_t a = 0; a < seqs1.size(); ++a) {
            Bitset ua(t.n());
            for (auto& x : seqs1[a]) ua |= x;
            for (size_t b = 0; b < seqs2.size(); ++b) {
                Bitset ub(t.n());
                for (auto& x : seqs2[b]) ub |= x;
                long long miss = miss_edges(t, ua, ub);
                if (count_at_most(miss, thr, (long long)ua.count() * ub.count())) {
                    std::vector<Bitset> combined = seqs1[a];
                    combined.insert(combined.end(), seqs2[b].begin(), seqs2[b].end());
                    return combined;
                }
            }
        }
        throw Error(ErrorKind::VerificationFailed,
                    "no extracted subsequence pair met the 1-4*lambda2 density");
    }
};

} // namespace

LSequence smooth_filter(const Tournament& t, const LSequence& seq, long long w_mult) {
    int k = (int)seq.sets.size();
    if (k == 0) throw Error(ErrorKind::PreconditionViolated, "empty sequence");
    if (w_mult < 1) throw Error(ErrorKind::PreconditionViolated, "slack multiplier must be >= 1");
    Rational wl = Rational(w_mult) * seq.lambda;

    LSequence out;
    out.c = seq.c / Rational(2);
    out.lambda = Rational(2) * wl;
    out.smooth = true;
    out.sets.resize(k, Bitset(t.n()));

    for (int i = 0; i < k; ++i) {
        Bitset keep = seq.sets[i];
        seq.sets[i].for_each([&](int v) {
            for (int j = 0; j < k; ++j) {
                if (j == i) continue;
                long long szj = seq.sets[j].count();
                long long m = j > i ? t.in(v).count_and(seq.sets[j])
                                    : t.out(v).count_and(seq.sets[j]);
                if (!count_at_most(m, wl, szj)) {
                    keep.reset(v);
                    return;
                }
            }
        });
        long long lost = seq.sets[i].count() - keep.count();
        // Markov: strictly fewer than (k-1)/W of a set can violate W*lambda
        if (BigInt(lost) * w_mult > BigInt(k - 1) * seq.sets[i].count())
            throw Error(ErrorKind::VerificationFailed,
                        "input sequence dirtier than its declared slack");
        if (keep.none())
            throw Error(ErrorKind::VerificationFailed, "smoothing emptied a set");
        out.sets[i] = keep;
    }
    return out;
}

LSequence find_l_sequence(const Tournament& t, const Tournament& h, int u, const Rational& lambda,
                          const SequenceOptions& opts, Trace* trace) {
    if (u < 1) throw Error(ErrorKind::PreconditionViolated, "length must be >= 1");
    if (!(lambda > Rational(0)) || !(lambda < Rational(1)))
        throw Error(ErrorKind::PreconditionViolated, "lambda must be in (0,1)");
    long long n = t.n();
    Rational c_guar = l_sequence_linearity(h.n(), u, lambda);
    if (trace) {
        Real need = Real(2) * h.n() / to_real(c_guar);
        std::ostringstream ss;
        ss << "op=find_l_sequence n=" << n << " u=" << u << " lambda=" << rstr(lambda)
           << " c=" << rstr(c_guar) << " guarantee_n=" << need;
        trace->note(ss.str());
    }

    LSequence out;
    out.c = c_guar;
    out.lambda = lambda;
    out.smooth = true;

    if (u == 1) {
        out.sets = {Bitset::full(t.n())};
        out.c = Rational(1);
        verify_l_sequence(t, out);
        return out;
    }

    int b = 0;
    while ((1 << b) < u) ++b;
    long long u2 = 1ll << b;
    int lnu2 = ceil_log_int(u2);
    Rational lambda2 = lambda / (Rational(16) * Rational(u2) * Rational(lnu2).pow(2));

    // slack bookkeeping across levels: lam[lvl] = max(4*lambda2*(lvl-1)^2, lam[lvl-1])
    Rational lam_pre = Rational(4) * lambda2;
    for (int lvl = 2; lvl <= b; ++lvl) {
        Rational grown = Rational(4) * lambda2 * Rational(lvl - 1).pow(2);
        if (trace)
            trace->note("op=l_sequence_slack lvl=" + std::to_string(lvl) + " grown=" + rstr(grown) +
                        " carried=" + rstr(lam_pre));
        if (grown > lam_pre) lam_pre = grown;
    }

    LSeqBuilder builder{t, h, lambda2, opts, trace};
    std::vector<Bitset> sets = builder.build(Bitset::full(t.n()), b);
    sets.resize(u);

    LSequence pre;
    pre.sets = sets;
    pre.c = c_guar;
    pre.lambda = lam_pre;
    pre.smooth = false;

    LSequence smoothed = smooth_filter(t, pre, 2 * u);
    out.sets = smoothed.sets;
    verify_l_sequence(t, out); // exact contract versus the caller's c and lambda
    if (trace) {
        std::string sizes;
        for (auto& s : out.sets) sizes += std::to_string(s.count()) + ",";
        trace->note("op=find_l_sequence result=ok sizes=" + sizes);
    }
    return out;
}

MSequence l_to_m_sequence(const Tournament& t, const LSequence& seq, const Real& epsilon,
                          const TransExtractor& extractor, Trace* trace) {
    int k = (int)seq.sets.size();
    if (k == 0 || k % 2 == 0)
        throw Error(ErrorKind::PreconditionViolated, "need an odd-length l-sequence");
    if (!seq.smooth) throw Error(ErrorKind::PreconditionViolated, "input must be smooth");
    int tt = (k - 1) / 2;
    long long n = t.n();

    // eps <= log 2 / log(2/c)
    Real eps_cap = rlog(Real(2)) / rlog(Real(2) / to_real(seq.c));
    if (epsilon > eps_cap)
        throw Error(ErrorKind::PreconditionViolated, "epsilon above log2/log(2/c)");

    MSequence out;
    out.c1 = Rational(1, 4);
    out.c2 = seq.c / Rational(2);
    out.epsilon = epsilon;
    out.smooth = true;

    if (tt == 0) {
        out.sets = seq.sets;
        out.trans_order = {{}};
        out.c2 = seq.c;
        out.lambda = seq.lambda;
        verify_m_sequence(t, out);
        return out;
    }

    struct Chunk {
        Bitset set;
        std::vector<int> order;
    };

    // repeated extraction of uniform transitive chunks from even positions
    long long target = 0;
    {
        Real raw = rpow(to_real(seq.c) * n / 2, epsilon);
        target = ceil_ll(raw);
        if (target < 1) target = 1;
    }
    std::vector<std::vector<Chunk>> chunks(tt);
    for (int i = 0; i < tt; ++i) {
        const Bitset& L = seq.sets[2 * i + 1];
        long long total = L.count();
        Bitset rem = L;
        while (2 * rem.count() >= total) {
            TransitiveWitness w = extractor(t, rem);
            if ((long long)w.size() < target)
                throw Error(ErrorKind::ExtractorTooWeak,
                            "extraction of size " + std::to_string(w.size()) + " below the chunk floor " +
                                std::to_string(target));
            Chunk ch;
            ch.order.assign(w.order.begin(), w.order.begin() + target);
            ch.set = Bitset(t.n());
            for (int v : ch.order) ch.set.set(v);
            rem -= ch.set;
            chunks[i].push_back(std::move(ch));
        }
        if (chunks[i].empty())
            throw Error(ErrorKind::ExtractorTooWeak, "no chunk extracted from a linear part");
    }

    // chi': odd sets unchanged, even replaced by their chunk unions
    std::vector<Bitset> chi(k, Bitset(t.n()));
    for (int i = 0; i < k; ++i) {
        if (i % 2 == 0) chi[i] = seq.sets[i];
        else {
            for (auto& ch : chunks[i / 2]) chi[i] |= ch.set;
        }
    }

    // W-bad pruning of chunks versus the chi' sequence
    long long W = 4 * tt;
    Rational bad_thr = Rational(2 * W) * seq.lambda; // 2*lambda0*W slack on chi'
    std::vector<std::vector<Chunk>> good(tt);
    for (int i = 0; i < tt; ++i) {
        int pos = 2 * i + 1;
        for (auto& ch : chunks[i]) {
            bool bad = false;
            for (int j = 0; j < k && !bad; ++j) {
                if (j == pos) continue;
                long long szj = chi[j].count(), szc = ch.set.count();
                long long miss = j < pos ? miss_edges(t, chi[j], ch.set)
                                         : miss_edges(t, ch.set, chi[j]);
                if (!count_at_most(miss, bad_thr, szj * szc)) bad = true;
            }
            if (!bad) good[i].push_back(ch);
        }
        if (2 * good[i].size() < chunks[i].size())
            throw Error(ErrorKind::VerificationFailed, "more than half of the chunks were bad");
        if (good[i].empty())
            throw Error(ErrorKind::VerificationFailed, "no good chunk at an even position");
    }

    // greedy clique over the chunk-compatibility graph, M = t+1
    Rational pick_thr = Rational(8) * Rational(tt + 1) * Rational(tt) * seq.lambda;
    std::vector<Chunk> picked;
    {
        std::vector<std::vector<Chunk>> cand = good;
        for (int i = 0; i < tt; ++i) {
            if (cand[i].empty())
                throw Error(ErrorKind::VerificationFailed, "chunk selection ran out of candidates");
            Chunk chosen = cand[i][0];
            for (int j = i + 1; j < tt; ++j) {
                std::vector<Chunk> keep;
                for (auto& y : cand[j]) {
                    long long miss = miss_edges(t, chosen.set, y.set);
                    if (count_at_most(miss, pick_thr, (long long)chosen.set.count() * y.set.count()))
                        keep.push_back(y);
                }
                cand[j] = keep;
            }
            picked.push_back(std::move(chosen));
        }
    }

    // assemble and prune per-vertex
    std::vector<Bitset> fsets(k, Bitset(t.n()));
    std::vector<std::vector<int>> forder(k);
    for (int i = 0; i < k; ++i) {
        if (i % 2 == 0) fsets[i] = seq.sets[i];
        else {
            fsets[i] = picked[i / 2].set;
            forder[i] = picked[i / 2].order;
        }
    }
    Rational lambda1 = pick_thr; // 8 t (t+1) lambda0
    Rational vx_thr = Rational(W) * lambda1;
    std::vector<Bitset> qsets(k, Bitset(t.n()));
    for (int i = 0; i < k; ++i) {
        Bitset keep = fsets[i];
        fsets[i].for_each([&](int v) {
            for (int j = 0; j < k; ++j) {
                if (j == i) continue;
                long long szj = fsets[j].count();
                long long m = j > i ? t.in(v).count_and(fsets[j]) : t.out(v).count_and(fsets[j]);
                if (!count_at_most(m, vx_thr, szj)) {
                    keep.reset(v);
                    return;
                }
            }
        });
        if (2 * keep.count() < fsets[i].count())
            throw Error(ErrorKind::VerificationFailed, "per-vertex pruning removed over half a set");
        if (keep.none()) throw Error(ErrorKind::VerificationFailed, "pruning emptied a set");
        qsets[i] = keep;
        if (i % 2 == 1) {
            std::vector<int> ord;
            for (int v : forder[i])
                if (keep.test(v)) ord.push_back(v);
            forder[i] = ord;
        }
    }

    out.sets = qsets;
    out.trans_order = forder;
    out.lambda = Rational(64) * Rational(tt).pow(2) * Rational(tt + 1) * seq.lambda;
    verify_m_sequence(t, out);
    if (trace) {
        std::string sizes;
        for (auto& s : out.sets) sizes += std::to_string(s.count()) + ",";
        trace->note("op=l_to_m_sequence t=" + std::to_string(tt) + " chunk=" + std::to_string(target) +
                    " sizes=" + sizes);
    }
    return out;
}

namespace {

struct EmbedCtx {
    const Tournament& t;
    const Tournament& h;
    const MSequence& mseq;
    const PipelineParams& params;
    const TransExtractor& extractor;
    const EmbedOptions& opts;
    Trace* trace;

    std::vector<int> pos_of;                 // h vertex -> position in the galaxy ordering
    std::vector<int> coord_block;            // center coordinate -> m-sequence set index
    std::vector<int> center_of_coord;        // coordinate -> h vertex
    std::vector<std::pair<int, int>> leaf_at; // global leaf index -> (m-seq set index, subchunk no)
    std::vector<int> leaf_vertex;            // global leaf index -> h vertex
    std::vector<int> leaf_index_of;          // h vertex -> global leaf index (-1 for centers)

    std::vector<std::vector<int>> tuples; // live center tuples, coordinate order
    std::vector<Bitset> chunk_set;        // per global leaf: current subchunk set
    std::vector<std::vector<int>> chunk_order;
    std::vector<bool> chunk_dead;

    FindResult run();

    void layout();
    void enumerate_tuples();
    void update_chunks_for(int x_vertex_in_t, int h_vertex);
};

void EmbedCtx::layout() {
    const GalaxyDecomposition& dec = params.dec;
    int n_h = h.n();
    pos_of.assign(n_h, -1);
    for (int p = 0; p < n_h; ++p) pos_of[dec.ordering[p]] = p;

    // centers in position order become tuple coordinates; the k-runs say
    // which linear set each coordinate draws from
    std::vector<int> centers;
    for (auto& s : dec.stars) centers.push_back(s.center);
    std::sort(centers.begin(), centers.end(), [&](int a, int b) { return pos_of[a] < pos_of[b]; });
    center_of_coord = centers;
    coord_block.clear();
    {
        int coord = 0;
        for (size_t run = 0; run < params.k.size(); ++run)
            for (int a = 0; a < params.k[run]; ++a) {
                (void)a;
                coord_block.push_back(2 * (int)run);
                ++coord;
            }
        if (coord != params.g)
            throw Error(ErrorKind::HypothesisViolated, "center runs do not cover the stars");
    }

    // leaves in position order; run r feeds the transitive set at index 2r+1
    std::vector<int> leaves;
    for (auto& s : dec.stars)
        for (int l : s.leaves) leaves.push_back(l);
    std::sort(leaves.begin(), leaves.end(), [&](int a, int b) { return pos_of[a] < pos_of[b]; });
    leaf_vertex = leaves;
    leaf_index_of.assign(n_h, -1);
    for (size_t i = 0; i < leaves.size(); ++i) leaf_index_of[leaves[i]] = (int)i;
    leaf_at.clear();
    {
        size_t li = 0;
        for (size_t run = 0; run < params.w.size(); ++run)
            for (int a = 0; a < params.w[run]; ++a) {
                if (li >= leaves.size())
                    throw Error(ErrorKind::HypothesisViolated, "leaf runs exceed the leaves");
                leaf_at.push_back({2 * (int)run + 1, a});
                ++li;
            }
        if (li != leaves.size())
            throw Error(ErrorKind::HypothesisViolated, "leaf runs do not cover the leaves");
    }

    // subchunks: q = floor(|T_i| / w_i) consecutive pieces of the transitive order
    chunk_set.assign(leaves.size(), Bitset(t.n()));
    chunk_order.assign(leaves.size(), {});
    chunk_dead.assign(leaves.size(), false);
    for (size_t run = 0; run < params.w.size(); ++run) {
        int set_idx = 2 * (int)run + 1;
        const auto& ord = mseq.trans_order[set_idx];
        long long q = (long long)ord.size() / params.w[run];
        if (q < 1)
            throw Error(ErrorKind::HypothesisViolated,
                        "transitive part too small for its subchunks");
        for (size_t li = 0; li < leaves.size(); ++li) {
            if (leaf_at[li].first != set_idx) continue;
            int a = leaf_at[li].second;
            for (long long x = a * q; x < (a + 1) * q; ++x) {
                chunk_order[li].push_back(ord[x]);
                chunk_set[li].set(ord[x]);
            }
        }
    }
}

void EmbedCtx::enumerate_tuples() {
    std::vector<int> cur(params.g, -1);
    long long count = 0;
    std::vector<Bitset> cand(params.g + 1, Bitset(t.n()));
    cand[0] = Bitset::full(t.n());

    // transitive tuples, coordinate c drawn from its linear set, every
    // earlier coordinate beating it
    auto dfs = [&](auto&& self, int c, const Bitset& allowed) -> void {
        if (c == params.g) {
            if ((long long)tuples.size() >= opts.tuple_budget)
                throw Error(ErrorKind::BudgetExceeded, "center tuple budget exceeded");
            tuples.push_back(cur);
            ++count;
            return;
        }
        Bitset pool = mseq.sets[coord_block[c]] & allowed;
        for (int v = pool.next(); v != -1; v = pool.next(v + 1)) {
            cur[c] = v;
            self(self, c + 1, allowed & t.out(v));
            cur[c] = -1;
        }
    };
    dfs(dfs, 0, Bitset::full(t.n()));
}

void EmbedCtx::update_chunks_for(int x_in_t, int h_vertex) {
    for (size_t li = 0; li < leaf_vertex.size(); ++li) {
        if (chunk_dead[li]) continue;
        bool fwd = pos_of[h_vertex] < pos_of[leaf_vertex[li]];
        const Bitset& row = fwd ? t.out(x_in_t) : t.in(x_in_t);
        Bitset keep = chunk_set[li] & row;
        if (keep.none())
            throw Error(ErrorKind::HypothesisViolated, "a subchunk died during the star updates");
        if (!(keep == chunk_set[li])) {
            chunk_set[li] = keep;
            std::vector<int> ord;
            for (int v : chunk_order[li])
                if (keep.test(v)) ord.push_back(v);
            chunk_order[li] = ord;
        }
    }
}

FindResult EmbedCtx::run() {
    long long n = t.n();
    int hh = h.n();

    layout();
    enumerate_tuples();
    if (tuples.empty())
        throw Error(ErrorKind::HypothesisViolated, "no transitive center tuples exist");

    // alpha = e^(-2 g^2 lambda_max) / 2^(sum k_i^2 + 1) with
    // lambda_max = min(1/(2 max k), 1/(2 g^2))
    int maxk = 1;
    for (int ki : params.k) maxk = std::max(maxk, ki);
    Real lambda_max = Real(1) / (2 * std::max(maxk, params.g * params.g));
    Real sumk2 = 0;
    for (int ki : params.k) sumk2 += Real(ki) * ki;
    Real alpha = rexp(Real(-2) * params.g * params.g * lambda_max) /
                 rpow(Real(2), sumk2 + 1);
    Real lam = to_real(mseq.lambda);

    std::vector<int> chosen(params.g, -1);
    std::vector<std::vector<int>> leaf_pick(params.g); // per star: leaf images in star-leaf order
    Real alpha_s = alpha;

    const auto& stars = params.dec.stars; // already sorted by center position
    for (int s = 0; s < params.g; ++s) {
        const GalaxyStar& star = stars[s];
        int star_size = 1 + (int)star.leaves.size();

        // candidate centers: tuple values at coordinate s with enough support
        Real rest = 1;
        for (int c = s + 1; c < params.g; ++c) rest *= Real(mseq.sets[coord_block[c]].count());
        Real need = alpha_s / 2 * rest;
        std::map<int, long long> support;
        for (auto& tu : tuples) support[tu[s]]++;
        std::vector<int> cands;
        for (auto& [v, cnt] : support)
            if (Real(cnt) >= need) cands.push_back(v);
        if (cands.empty())
            throw Error(ErrorKind::HypothesisViolated, "no center candidate met the tuple support");

        int star_v = -1;
        std::vector<int> ys;
        std::vector<int> fail_leaf(cands.size(), -1);
        for (size_t ci = 0; ci < cands.size() && star_v == -1; ++ci) {
            int v = cands[ci];
            std::vector<int> picks;
            int bad = -1;
            for (size_t li = 0; li < star.leaves.size(); ++li) {
                int gl = leaf_index_of[star.leaves[li]];
                if (chunk_dead[gl])
                    throw Error(ErrorKind::HypothesisViolated, "a needed subchunk was deleted");
                const Bitset& row = star.left ? t.in(v) : t.out(v);
                int y = (chunk_set[gl] & row).next();
                if (y == -1) { bad = (int)li; break; }
                picks.push_back(y);
            }
            if (bad == -1) {
                star_v = v;
                ys = picks;
            } else {
                fail_leaf[ci] = bad;
            }
        }

        if (star_v == -1) {
            // non-star setting: bucket candidates by their failing leaf
            std::vector<long long> bucket(star.leaves.size(), 0);
            for (size_t ci = 0; ci < cands.size(); ++ci) bucket[fail_leaf[ci]]++;
            int best = 0;
            for (size_t li = 1; li < bucket.size(); ++li)
                if (bucket[li] > bucket[best]) best = (int)li;
            Bitset u(t.n());
            for (size_t ci = 0; ci < cands.size(); ++ci)
                if (fail_leaf[ci] == best) u.set(cands[ci]);
            int gl = leaf_index_of[star.leaves[best]];

            // claimed floor on the one-way linear set
            Real alpha_f = alpha / rpow(Real(2), Real(params.g)) - (params.t + 1) * hh * hh * lam;
            Real floor_u = alpha_f / (2 - alpha_f) / hh * to_real(params.c2) * n;
            if (Real(u.count()) < floor_u)
                throw Error(ErrorKind::VerificationFailed,
                            "non-star linear side below its claimed floor");

            TransitiveWitness r = extractor(t, u);
            std::vector<int> order;
            if (star.left) {
                // every candidate beats the whole subchunk
                order = r.order;
                order.insert(order.end(), chunk_order[gl].begin(), chunk_order[gl].end());
            } else {
                order = chunk_order[gl];
                order.insert(order.end(), r.order.begin(), r.order.end());
            }
            TransitiveWitness w;
            w.method = WitnessMethod::Merge;
            w.order = order;
            w.vertices = Bitset(t.n());
            for (int v : order) w.vertices.set(v);
            verify_witness(t, w);
            if (Real(w.size()) < rpow(Real(n), params.epsilon))
                throw Error(ErrorKind::VerificationFailed, "merged witness below n^epsilon");
            if (trace)
                trace->note("op=embed_galaxy branch=non_star star=" + std::to_string(s) +
                            " witness=" + std::to_string(w.size()));
            FindResult res;
            res.witness = w;
            res.branch = "embed_non_star";
            return res;
        }

        // star setting: commit, retire the star's chunks, update the rest
        chosen[s] = star_v;
        leaf_pick[s] = ys;
        for (int l : star.leaves) chunk_dead[leaf_index_of[l]] = true;

        update_chunks_for(star_v, star.center);
        for (size_t li = 0; li < star.leaves.size(); ++li) update_chunks_for(ys[li], star.leaves[li]);

        // keep tuples that start with the chosen centers and respect the
        // chosen leaves
        std::vector<std::vector<int>> kept;
        for (auto& tu : tuples) {
            if (tu[s] != star_v) continue;
            bool ok = true;
            for (int c = 0; c < params.g && ok; ++c) {
                if (c == s) continue;
                for (size_t li = 0; li < star.leaves.size() && ok; ++li) {
                    bool fwd = pos_of[center_of_coord[c]] < pos_of[star.leaves[li]];
                    bool have = fwd ? t.beats(tu[c], ys[li]) : t.beats(ys[li], tu[c]);
                    if (!have) ok = false;
                }
            }
            if (ok) kept.push_back(tu);
        }
        tuples = kept;
        if (tuples.empty())
            throw Error(ErrorKind::HypothesisViolated, "tuple set exhausted after a star commit");
        alpha_s = alpha_s / 2 - (params.t + 1) * star_size * hh * lam;
        if (trace)
            trace->note("op=embed_galaxy branch=star star=" + std::to_string(s) +
                        " tuples=" + std::to_string((long long)tuples.size()));
    }

    // every star landed: read off the embedding
    std::vector<int> emb(hh, -1);
    for (int s = 0; s < params.g; ++s) {
        emb[stars[s].center] = chosen[s];
        for (size_t li = 0; li < stars[s].leaves.size(); ++li)
            emb[stars[s].leaves[li]] = leaf_pick[s][li];
    }
    verify_embedding(t, h, emb);
    FindResult res;
    res.embedding = emb;
    res.branch = "embed_star_by_star";
    if (trace) trace->note("op=embed_galaxy branch=embedding");
    return res;
}

} // namespace

FindResult embed_galaxy_or_transitive(const Tournament& t, const Tournament& h,
                                      const MSequence& mseq, const PipelineParams& params,
                                      const TransExtractor& extractor, const EmbedOptions& opts,
                                      Trace* trace) {
    long long n = t.n();
    verify_m_sequence(t, mseq);

    if ((int)mseq.sets.size() != 2 * params.t + 1)
        throw Error(ErrorKind::HypothesisViolated, "m-sequence length does not match the leaf runs");
    if (!mseq.smooth) throw Error(ErrorKind::HypothesisViolated, "m-sequence must be smooth");
    if (!(mseq.lambda <= params.lambda_embed))
        throw Error(ErrorKind::HypothesisViolated,
                    "slack above the ceiling: " + rstr(mseq.lambda) + " > " + rstr(params.lambda_embed));
    if (!count_at_least(n, Rational(2 * h.n()) / params.c1, 1))
        throw Error(ErrorKind::HypothesisViolated, "n below 2h/c1");
    {
        Real base = Real(1) - rexp(Real(1)) * h.n() / (to_real(params.c2) * n);
        if (base <= 0 || rpow(base, Real(h.n())) < Real(1) / 2)
            throw Error(ErrorKind::HypothesisViolated, "strong linearity condition fails");
    }

    if (params.t == 0) {
        // no leaf blocks: nothing to build star by star; the single linear
        // set carries the witness
        TransitiveWitness w = extractor(t, mseq.sets[0]);
        verify_witness(t, w);
        if (Real(w.size()) < rpow(Real(n), params.epsilon))
            throw Error(ErrorKind::VerificationFailed, "degenerate witness below n^epsilon");
        FindResult res;
        res.witness = w;
        res.branch = "embed_degenerate";
        return res;
    }

    if (!params.dec.regular)
        throw Error(ErrorKind::HypothesisViolated,
                    "pattern presentation has singletons; embedding needs a regular galaxy ordering");

    EmbedCtx ctx{t, h, mseq, params, extractor, opts, trace, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
    return ctx.run();
}

FindResult find_transitive(const Tournament& t, const Tournament& h, const FindOptions& opts,
                           Trace* trace) {
    HomoStructure hs = analyze_homogeneous(h);
    if (!hs.is_prime) throw Error(ErrorKind::NotPrime, "pattern must be prime");
    auto dec = find_galaxy_ordering(h, opts.galaxy_cap);
    if (!dec) throw Error(ErrorKind::NotAGalaxy, "pattern is not a galaxy");

    long long n = t.n();
    Real threshold = opts.threshold ? *opts.threshold
                                    : rexp(rpow(Real(h.n()), Real(5)));

    auto base_case = [&](const std::string& tag) {
        TransitiveWitness w = n <= opts.exact_cap ? max_transitive_exact(t, opts.exact_cap)
                                                  : greedy_transitive(t);
        verify_witness(t, w);
        FindResult res;
        res.witness = w;
        res.branch = tag;
        if (trace)
            trace->note("op=find_transitive n=" + std::to_string(n) + " branch=" + tag +
                        " witness=" + std::to_string(w.size()));
        return res;
    };

    if (Real(n) < threshold) return base_case("base");

    PipelineParams params = params_for(h, 2 * dec->t + 1, opts.galaxy_cap);

    // the inductive extractor: recurse on the induced subtournament, and
    // translate any discovered pattern copy back to the host's labels
    TransExtractor extractor = [&](const Tournament& host, const VertexSet& within) {
        Induced ind = induced(host, within);
        try {
            FindResult sub = find_transitive(ind.t, h, opts, trace);
            if (sub.embedding) {
                std::vector<int> mapped(h.n());
                for (int i = 0; i < h.n(); ++i) mapped[i] = ind.vertex_map[(*sub.embedding)[i]];
                throw FoundH(mapped);
            }
            TransitiveWitness w;
            w.method = sub.witness->method;
            w.vertices = Bitset(host.n());
            for (int v : sub.witness->order) {
                w.order.push_back(ind.vertex_map[v]);
                w.vertices.set(ind.vertex_map[v]);
            }
            return w;
        } catch (const FoundH&) {
            throw;
        }
    };

    try {
        LSequence lseq = find_l_sequence(t, h, params.u, params.lambda_assembly, {}, trace);
        MSequence mseq = l_to_m_sequence(t, lseq, params.epsilon, extractor, trace);
        EmbedOptions eopts;
        eopts.tuple_budget = opts.tuple_budget;
        return embed_galaxy_or_transitive(t, h, mseq, params, extractor, eopts, trace);
    } catch (const FoundH& f) {
        verify_embedding(t, h, f.map());
        FindResult res;
        res.embedding = f.map();
        res.branch = "found_h";
        if (trace) trace->note("op=find_transitive n=" + std::to_string(n) + " branch=found_h");
        return res;
    } catch (const Error& e) {
        switch (e.kind()) {
            case ErrorKind::TooSmall:
            case ErrorKind::HypothesisViolated:
            case ErrorKind::ExtractorTooWeak:
            case ErrorKind::BudgetExceeded: {
                if (trace)
                    trace->note(std::string("op=find_transitive fallback=1 reason=\"") + e.what() +
                                "\"");
                return base_case(std::string("base_after_") + to_string(e.kind()));
            }
            default:
                throw;
        }
    }
}

Coloring color_tournament(const Tournament& t, const Tournament& h, const FindOptions& opts,
                          Trace* trace) {
    long long n = t.n();
    auto dec = find_galaxy_ordering(h, opts.galaxy_cap);
    if (!dec) throw Error(ErrorKind::NotAGalaxy, "pattern is not a galaxy");
    PipelineParams params = params_for(h, 2 * dec->t + 1, opts.galaxy_cap);

    Coloring col;
    col.epsilon = params.epsilon;
    col.bound = Real(4) * rpow(Real(n), Real(1) - params.epsilon) * rlog(Real(n));

    Bitset residual = Bitset::full(t.n());
    while (residual.any()) {
        Induced ind = induced(t, residual);
        FindResult fr = find_transitive(ind.t, h, opts, trace);
        if (fr.embedding) {
            std::vector<int> mapped(h.n());
            for (int i = 0; i < h.n(); ++i) mapped[i] = ind.vertex_map[(*fr.embedding)[i]];
            throw FoundH(mapped);
        }
        TransitiveWitness w;
        w.method = fr.witness->method;
        w.vertices = Bitset(t.n());
        for (int v : fr.witness->order) {
            int orig = ind.vertex_map[v];
            w.order.push_back(orig);
            w.vertices.set(orig);
        }
        verify_witness(t, w);
        col.classes.push_back(w);
        residual -= w.vertices;
    }
    if (trace)
        trace->note("op=color_tournament n=" + std::to_string(n) +
                    " classes=" + std::to_string((long long)col.classes.size()));
    if (n > 1 && Real((long long)col.classes.size()) > col.bound)
        throw Error(ErrorKind::VerificationFailed, "class count exceeded the guarded bound");
    return col;
}

} // namespace trn
