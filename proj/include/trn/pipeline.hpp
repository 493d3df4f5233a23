#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trn/core.hpp"
#include "trn/numeric.hpp"
#include "trn/orderings.hpp"
#include "trn/transitive.hpp"

namespace trn {

// Line-delimited key=value audit log; one record per lemma-level invocation.
struct Trace {
    std::vector<std::string> lines;

    void note(const std::string& line) { lines.push_back(line); }
    std::string text() const {
        std::string out;
        for (auto& l : lines) out += l + "\n";
        return out;
    }
};

// Every numeric parameter the dense-pair / sequence / embedding machinery
// consumes, derived from a galaxy decomposition of the pattern and the
// sequence length u. Densities and slacks are exact rationals; only the
// exponent epsilon lives in high-precision floating point.
struct PipelineParams {
    int h = 0, u = 0, g = 0, t = 0;
    std::vector<int> k, w;

    Rational lambda_embed;    // slack ceiling for the embedding step
    Rational lambda_assembly; // slack used when extracting the l-sequence
    Rational c1, c2;          // bigness/linearity carried by the m-sequence
    Rational m1, m2;
    Rational c_seq;           // guaranteed linearity of the extracted l-sequence
    Real epsilon;
};

// Standard parameters: c1 = 1/4 and c2 = c_seq/2, matching what the sequence
// conversion yields inside find_transitive.
PipelineParams params_for(const Tournament& h, int u, int galaxy_cap = 10);

// Same formulas with caller-chosen linearities, for driving the sequence and
// embedding operations directly on synthetic inputs.
PipelineParams params_with(const Tournament& h, int u, const Rational& c1, const Rational& c2,
                           int galaxy_cap = 10);

// The guaranteed l-sequence linearity (lambda^h / (4^(h+3) h^2 u^h ceil(log u)^(2h)))^ceil(log u).
Rational l_sequence_linearity(int h, int u, const Rational& lambda);

struct LSequence {
    std::vector<VertexSet> sets;
    Rational c;      // every set has size >= c * n
    Rational lambda; // pairwise (and per-vertex when smooth) slack
    bool smooth = false;
};

// Exact checks of every LSequence invariant; throws VerificationFailed.
void verify_l_sequence(const Tournament& t, const LSequence& seq);

struct MSequence {
    std::vector<VertexSet> sets;               // odd positions linear, even transitive (1-based)
    std::vector<std::vector<int>> trans_order; // per set: beat order for even slots, empty otherwise
    Rational c1, c2;
    Rational lambda;
    Real epsilon;
    bool smooth = false;
};

void verify_m_sequence(const Tournament& t, const MSequence& seq);

// Either an embedding of the pattern with s_i drawn from sets[i], or a pair
// of disjoint subsets x1, x2 with |x1|,|x2| >= (lambda^h c / h)|Z| and
// d(x1,x2) >= 1 - lambda.
struct DensePair {
    std::optional<std::vector<int>> embedding;
    VertexSet x1, x2;
};

DensePair dense_pair_or_h(const Tournament& t, const Tournament& h,
                          const std::vector<VertexSet>& sets, const Rational& lambda,
                          const VertexSet& universe, Trace* trace = nullptr);

struct SequenceOptions {
    long long extraction_budget = 4096; // sequences pulled per side before giving up
};

// Smooth (c,lambda)-l-sequence of length u from an H-free tournament, by the
// doubling recursion over dense pairs. Throws FoundH if the input was not
// H-free, TooSmall if the recursion cannot even split.
LSequence find_l_sequence(const Tournament& t, const Tournament& h, int u, const Rational& lambda,
                          const SequenceOptions& opts = {}, Trace* trace = nullptr);

// Per-vertex pruning against slack W*lambda; result is smooth with slack
// 2*W*lambda and every set keeps at least half its vertices.
LSequence smooth_filter(const Tournament& t, const LSequence& seq, long long w_mult);

// Extracts a transitive set from any induced subtournament it is handed.
using TransExtractor =
    std::function<TransitiveWitness(const Tournament& t, const VertexSet& within)>;

// Replaces even-position sets of a smooth l-sequence of length 2t+1 by
// transitive chunks: repeated extraction, bad-chunk pruning, greedy chunk
// selection, final per-vertex pruning. Output is a smooth
// (1/4, c/2, 64 t^2 (t+1) lambda0, epsilon)-m-sequence.
MSequence l_to_m_sequence(const Tournament& t, const LSequence& seq, const Real& epsilon,
                          const TransExtractor& extractor, Trace* trace = nullptr);

struct FindResult {
    std::optional<std::vector<int>> embedding; // pattern vertex -> host vertex
    std::optional<TransitiveWitness> witness;
    std::string branch; // which step produced the result
};

struct EmbedOptions {
    long long tuple_budget = 2000000;
};

// Star-by-star construction of the pattern inside a smooth m-sequence, or a
// transitive witness of size >= n^epsilon when some star admits no setting.
// Hypothesis violations are reported as HypothesisViolated, never ignored.
FindResult embed_galaxy_or_transitive(const Tournament& t, const Tournament& h,
                                      const MSequence& mseq, const PipelineParams& params,
                                      const TransExtractor& extractor,
                                      const EmbedOptions& opts = {}, Trace* trace = nullptr);

struct FindOptions {
    // Inputs below the threshold take the induction base (exact or greedy
    // extraction). The default e^(h^5) keeps every feasible input there.
    std::optional<Real> threshold;
    int exact_cap = 24;
    int galaxy_cap = 10;
    long long tuple_budget = 2000000;
};

// Dichotomy for a prime galaxy pattern: an embedding of the pattern or a
// transitive witness. Pipeline failures above the threshold (hypotheses that
// only hold asymptotically) fall back to the base case and are recorded in
// the trace; a discovered copy of the pattern always wins.
FindResult find_transitive(const Tournament& t, const Tournament& h, const FindOptions& opts = {},
                           Trace* trace = nullptr);

struct Coloring {
    std::vector<TransitiveWitness> classes;
    Real epsilon;   // exponent used for the class-count bound
    Real bound;     // 4 * n^(1-eps) * ln n
};

// Partition of V(T) into transitive classes by repeated extraction. Throws
// FoundH if the input turns out to contain the pattern.
Coloring color_tournament(const Tournament& t, const Tournament& h, const FindOptions& opts = {},
                          Trace* trace = nullptr);

} // namespace trn
