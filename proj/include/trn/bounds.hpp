#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "trn/core.hpp"
#include "trn/numeric.hpp"
#include "trn/structure.hpp"

namespace trn {

// T^B_k: iterated substitution of B into itself, |result| = |B|^k.
Tournament iterate_substitution(const Tournament& b, int k, long long size_cap = 100000);

enum class LowerFamily { Galaxy, Star, General };

// Lower-bound evaluators, constants unnormalized (C defaults to 1):
//   galaxy : C / (h^5 log h)
//   star   : 1 / (3 h log 2h)
//   general: C * exp(-(h+1) log(h+1))
Real lower_bound_formula(int h, LowerFamily family, const Real& c = Real(1));

enum class UpperMode { Prime, Partition };

// Upper-bound evaluators (C defaults to 1):
//   prime    : C log(h) / h
//   partition: C log(log p) / log p
Real upper_bound_formula(const Tournament& h, UpperMode mode, const Real& c = Real(1));

// eps(H(F,D)) >= eps_F * eps_D / (eps_D + k eps_F), the limit value of the
// substitution composition (slack term taken as zero).
Real compose_lower_bound(const Real& eps_f, const Real& eps_d, int k);

// Randomized H-far base: sample, greedily delete a vertex per surviving
// quotient embedding, verify, report log(tr)/log(n).
struct UpperCertificate {
    Tournament base;
    std::vector<int> deleted; // original vertex ids of the sampled tournament
    int tr = 0;
    Real eps_upper;
    bool verified_h_far = false;
    uint64_t trial_seed = 0;
};

struct CertifyOptions {
    int trials = 20;
    int delete_budget = -1; // default 2|H|
    int n_cap = 64;
    int exact_cap = 64;
    int quotient_cap = 16;
};

std::optional<UpperCertificate> certify_upper(const Tournament& h, int n, uint64_t seed,
                                              const CertifyOptions& opts = {});

struct BoundSide {
    std::optional<Real> value;
    std::string provenance; // formula name, "composition", "certificate", or absence reason
    std::optional<Real> log_ratio;
};

struct BoundRecord {
    int h = 0;
    BoundSide lower;
    BoundSide upper;
};

// Best applicable lower and upper estimates: star/galaxy formulas when the
// shape matches, composition over the minimum-parts homogeneous partitioning
// for non-prime patterns, prime/partition upper formulas.
BoundRecord bound_report(const Tournament& h, int galaxy_cap = 10, int structure_cap = 16);

std::string format_bound_record(const BoundRecord& r);

} // namespace trn
