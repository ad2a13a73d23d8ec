#include "sperfect/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sperfect {

std::string to_string_i128(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 u = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

i64 checked_i64(i128 v, const char* what) {
    if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
        throw std::overflow_error(std::string(what) + ": value " + to_string_i128(v) +
                                  " exceeds 64-bit range");
    return static_cast<i64>(v);
}

namespace {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u128>(a) * b % m; }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Witness set complete for all n < 2^64 (Sinclair/Feitsma verification).
constexpr u64 kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool miller_rabin(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : kMrBases) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

constexpr i64 kTrialBound = 1'000'000;

const std::vector<i64>& small_primes() {
    static const std::vector<i64> primes = [] {
        std::vector<bool> comp(kTrialBound, false);
        std::vector<i64> ps;
        for (i64 i = 2; i < kTrialBound; ++i) {
            if (comp[i]) continue;
            ps.push_back(i);
            for (i64 j = i * i; j < kTrialBound; j += i) comp[j] = true;
        }
        return ps;
    }();
    return primes;
}

u64 brent_rho(u64 n) {
    // Brent's cycle variant of Pollard rho; n must be odd composite, not a prime power issue here.
    if (n % 2 == 0) return 2;
    u64 c = 1;
    while (true) {
        u64 x = 2, y = 2, d = 1, q = 1, ys = y;
        u64 r = 1;
        const u64 m = 128;
        while (d == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
            u64 k = 0;
            while (k < r && d == 1) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = (mulmod(y, y, n) + c) % n;
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
                k += m;
            }
            r <<= 1;
        }
        if (d == n) {
            // back-track one step at a time
            do {
                ys = (mulmod(ys, ys, n) + c) % n;
                d = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (d == 1);
        }
        if (d != n) return d;
        ++c;  // rare: retry with a different polynomial
    }
}

void factor_recurse(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (miller_rabin(n)) {
        out.push_back(n);
        return;
    }
    u64 d = brent_rho(n);
    factor_recurse(d, out);
    factor_recurse(n / d, out);
}

}  // namespace

bool is_prime(i64 n) {
    if (n < 1) throw std::domain_error("is_prime: n must be >= 1");
    return miller_rabin(static_cast<u64>(n));
}

bool is_square(i64 n) {
    if (n < 1) throw std::domain_error("is_square: n must be >= 1");
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n;
}

Factorization factorize(i64 n) {
    if (n > -2 && n < 2) throw std::domain_error("factorize: |n| must be > 1");
    u64 m = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
    Factorization f;
    f.n = n;
    std::vector<u64> primes;
    for (i64 p : small_primes()) {
        if (static_cast<u64>(p) * static_cast<u64>(p) > m) break;
        while (m % static_cast<u64>(p) == 0) {
            primes.push_back(static_cast<u64>(p));
            m /= static_cast<u64>(p);
        }
        if (m == 1) break;
    }
    if (m > 1) factor_recurse(m, primes);
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size();) {
        std::size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        f.factors.emplace_back(static_cast<i64>(primes[i]), static_cast<int>(j - i));
        i = j;
    }
    return f;
}

std::vector<i64> divisors(const Factorization& f) {
    std::vector<i64> divs{1};
    for (const auto& [p, e] : f.factors) {
        std::size_t base = divs.size();
        i128 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i)
                divs.push_back(checked_i64(static_cast<i128>(divs[i]) * pk, "divisors"));
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

DivisorProfile divisor_profile(i64 n) {
    Factorization f = factorize(n);
    std::vector<i64> divs = divisors(f);
    DivisorProfile prof;
    prof.n = n;
    prof.tau = static_cast<i64>(divs.size());
    i128 s = 0;
    for (i64 d : divs) s += d;
    prof.sigma = checked_i64(s, "divisor_profile sigma");
    i64 a = n < 0 ? -n : n;
    prof.nu2 = a % 2 == 0 ? __builtin_ctzll(static_cast<u64>(a)) : 0;
    prof.intermediate_divisors.assign(divs.begin() + 1, divs.end() - 1);
    return prof;
}

i64 sigma(i64 n) {
    if (n < 1) throw std::domain_error("sigma: n must be >= 1");
    if (n == 1) return 1;
    i128 s = 1;
    for (const auto& [p, e] : factorize(n).factors) {
        i128 term = 1, pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            term += pk;
        }
        s *= term;
    }
    return checked_i64(s, "sigma");
}

i64 tau(i64 n) {
    if (n < 1) throw std::domain_error("tau: n must be >= 1");
    if (n == 1) return 1;
    i64 t = 1;
    for (const auto& [p, e] : factorize(n).factors) t *= e + 1;
    return t;
}

int nu2(i64 n) {
    if (n < 1) throw std::domain_error("nu2: n must be >= 1");
    return n % 2 == 0 ? __builtin_ctzll(static_cast<u64>(n)) : 0;
}

i64 odd_part(i64 n) {
    if (n < 1) throw std::domain_error("odd_part: n must be >= 1");
    return n >> nu2(n);
}

bool is_abundant(i64 n) { return sigma(n) >= 2 * n; }

std::vector<i64> sigma_sieve(i64 N, i64 memory_cap_bytes) {
    if (N < 1) throw std::domain_error("sigma_sieve: N must be >= 1");
    i128 need = (static_cast<i128>(N) + 1) * static_cast<i128>(sizeof(i64));
    if (need > memory_cap_bytes)
        throw resource_error("sigma_sieve: " + to_string_i128(need) + " bytes needed, cap is " +
                             std::to_string(memory_cap_bytes));
    std::vector<i64> sig(static_cast<std::size_t>(N) + 1, 0);
    for (i64 d = 1; d <= N; ++d)
        for (i64 m = d; m <= N; m += d) sig[static_cast<std::size_t>(m)] += d;
    return sig;
}

}  // namespace sperfect
