#pragma once

#include "sperfect/presentation.hpp"

namespace sperfect {

// target == sum of lambda_j * 2^j over j in [s, t], lambda_j in {-1, m}.
struct PowerTwoRepresentation {
    i64 target = 0;
    int s = 0;
    int t = 0;
    i64 m = 1;
    std::vector<i64> lambdas;  // index j - s

    i64 value() const;  // recompute the weighted sum
};

// n = 2^k * p with p an odd prime; beta = nu2(m+1).
struct TwoKpForm {
    int k = 0;
    i64 p = 0;
    i64 m = 1;
    int beta = 0;

    static TwoKpForm from(i64 n, i64 m);
};

// A set S (at most tau(n)-2 elements) with a verifying first-kind witness,
// built from the two smallest prime divisors. Prime powers are rejected.
std::pair<CoefficientSet, PresentationWitness> adhoc_coefficient_set(i64 n);

// (m+1)(m^2+m+1) with its {0,m}-presentation.
std::pair<i64, PresentationWitness> seed_0m(i64 m);

// n in P(0,m) implies (m+1)n in P(0,m): keep the old terms, coefficient m on
// divisor n, 0 on every other new divisor.
PresentationWitness scale_0m(const PresentationWitness& w, i64 m);

bool lemma2_representable(i64 target, int s, int t, i64 m);
PowerTwoRepresentation lemma2_witness(i64 target, int s, int t, i64 m);

// Same target over [s, t+alpha]; needs t >= s+beta-1 and 2^alpha = 1 mod (m+1)/2^beta.
PowerTwoRepresentation corollary1_extend(const PowerTwoRepresentation& rep, int alpha);

// The congruence 2^alpha = 1 mod (m+1)/2^beta that double membership of
// 2^k p and 2^{k+alpha} p in P(-1,m) forces.
bool thrm1_congruence_check(i64 m, int k, int alpha, i64 p);

// Witness for 2^{k+alpha} p from a witness for 2^k p, both under {-1,m}.
PresentationWitness thrm1_lift(const PresentationWitness& w, i64 m, int alpha);

// Constructive membership 2^k p in P(-1,m) for p = 2(2^{alpha+1}-1)-1 mod 2(m+1);
// returns the minimal qualifying k with the assembled witness.
std::pair<int, PresentationWitness> thrm2_construct(i64 m, int alpha, i64 p);

// n == 1 + sum lambda_j 2^j with lambda in {-1,1} for some k iff n = 3 mod 4.
bool lemma3_representable(i64 n);

// One induction step of the p-power lift under {-1,1}: from witnesses for
// a (= n or np, p prime not dividing n) and for np^j, a witness for a*p^{j+1}.
PresentationWitness lemma4_lift(const PresentationWitness& base,
                                const PresentationWitness& current, i64 p);

// n in P(-1,1) implies 2n in P(-1,1).
PresentationWitness lemma5_double(const PresentationWitness& w);

// True iff the odd part of n is a perfect square; such n are never {-1,1}-perfect.
bool square_obstruction(i64 n);

// Membership of 2^k d in P(-1,1) for k in [0, kmax], by exact solver calls.
std::vector<bool> minimal_k_scan(i64 d, int kmax, const SearchConfig& config = {});

}  // namespace sperfect
