#pragma once

#include <utility>
#include <vector>

#include "sperfect/common.hpp"

namespace sperfect {

// Prime-exponent decomposition of |n|.
struct Factorization {
    i64 n = 0;
    std::vector<std::pair<i64, int>> factors;  // primes ascending
};

// n with its sorted intermediate divisors (1 < d < |n|) plus tau/sigma/nu2 of |n|.
struct DivisorProfile {
    i64 n = 0;
    std::vector<i64> intermediate_divisors;
    i64 tau = 0;
    i64 sigma = 0;
    int nu2 = 0;
};

// Deterministic Miller-Rabin, exact for all 64-bit inputs. n >= 1.
bool is_prime(i64 n);

bool is_square(i64 n);

// sigma(n) >= 2n. Perfect numbers count as abundant.
bool is_abundant(i64 n);

// Trial division by primes below 1e6, Brent rho for the rest. |n| > 1 required.
Factorization factorize(i64 n);

// All positive divisors of |f.n|, ascending.
std::vector<i64> divisors(const Factorization& f);

DivisorProfile divisor_profile(i64 n);

i64 sigma(i64 n);   // sum of positive divisors, n >= 1
i64 tau(i64 n);     // divisor count, n >= 1
int nu2(i64 n);     // 2-adic valuation, n >= 1
i64 odd_part(i64 n);

// sigma(n) for 1 <= n <= N; entry [n] is sigma(n), entry [0] unused.
std::vector<i64> sigma_sieve(i64 N, i64 memory_cap_bytes = i64(1) << 30);

}  // namespace sperfect
