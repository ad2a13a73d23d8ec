#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sperfect/arith.hpp"

namespace sperfect {

enum class Kind { first, second };

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& s);

// Finite S subset of Z. Nonempty, distinct, every |element| < 2^31.
class CoefficientSet {
  public:
    explicit CoefficientSet(std::vector<i64> elems);
    CoefficientSet(std::initializer_list<i64> elems)
        : CoefficientSet(std::vector<i64>(elems)) {}

    const std::vector<i64>& elements() const { return elems_; }
    i64 min_elem() const { return elems_.front(); }
    i64 max_elem() const { return elems_.back(); }
    bool contains(i64 v) const;
    std::string to_string() const;  // "a,b,c"
    bool operator==(const CoefficientSet&) const = default;

    static CoefficientSet parse(const std::string& csv);  // rejects dups and empties

  private:
    std::vector<i64> elems_;
};

CoefficientSet set_union(const CoefficientSet& a, const CoefficientSet& b);
std::optional<CoefficientSet> set_intersection(const CoefficientSet& a, const CoefficientSet& b);

// Coefficient assignment realizing the defining equation for n.
// First kind:  1 + sum(coefficients[j] * d_j) == n
// Second kind: lambda0 + sum(coefficients[j] * d_j) == n
// coefficients aligned to divisor_profile(n).intermediate_divisors.
struct PresentationWitness {
    i64 n = 0;
    Kind kind = Kind::first;
    i64 lambda0 = 0;  // second kind only
    std::vector<i64> coefficients;

    bool operator==(const PresentationWitness&) const = default;
};

enum class SolveStatus { Perfect, NotPerfect, Exhausted };

struct SolveStats {
    i64 layers = 0;
    i64 nodes = 0;
    i64 bytes = 0;
};

// NotPerfect is only ever produced by exact coverage (feasibility interval,
// complete reachability DP, or a DFS that ran to completion).
struct SolveOutcome {
    SolveStatus status = SolveStatus::NotPerfect;
    std::optional<PresentationWitness> witness;
    SolveStats stats;
};

struct SearchConfig {
    i64 memory_cap_bytes = i64(1) << 30;
    i64 node_budget = 1'000'000'000;
    bool canonicalize = true;
};

// True iff every coefficient is in s and the defining equation holds.
// Coefficient count mismatch against divisor_profile(w.n) is a structural error.
bool verify(const PresentationWitness& w, const CoefficientSet& s);

// Exact decision with witness extraction. Witnesses are canonical: the
// lexicographically smallest coefficient vector, divisors ascending, S ascending.
SolveOutcome solve(i64 n, const CoefficientSet& s, Kind kind, const SearchConfig& config = {});

// Convenience wrapper; throws exhausted_error if the caps were hit.
bool is_sperfect(i64 n, const CoefficientSet& s, Kind kind = Kind::first,
                 const SearchConfig& config = {});

// Wire shape: {"n","kind","set","divisors","coefficients"[,"lambda0"]}.
nlohmann::json witness_json(const PresentationWitness& w, const CoefficientSet& s);
PresentationWitness witness_from_json(const nlohmann::json& j);

}  // namespace sperfect
