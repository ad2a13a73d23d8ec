#include "sperfect/structure.hpp"

#include <algorithm>
#include <map>

namespace sperfect {

namespace {

const CoefficientSet& minus1_1() {
    static const CoefficientSet s{-1, 1};
    return s;
}

i64 sign_of(i64 n) { return n < 0 ? -1 : 1; }

i64 abs_i64(i64 n) { return n < 0 ? -n : n; }

u64 powmod_u64(u64 a, u64 e, u64 mod) {
    if (mod == 1) return 0;
    u64 r = 1;
    a %= mod;
    while (e > 0) {
        if (e & 1) r = static_cast<u128>(r) * a % mod;
        a = static_cast<u128>(a) * a % mod;
        e >>= 1;
    }
    return r;
}

// 2^alpha == 1 mod (m+1)/2^beta
bool two_pow_unit(i64 m, int alpha) {
    i64 mod = (m + 1) >> nu2(m + 1);
    return powmod_u64(2, static_cast<u64>(alpha), static_cast<u64>(mod)) == 1 % static_cast<u64>(mod);
}

i64 mod_inverse(i64 a, i64 mod) {
    i64 r0 = mod, r1 = ((a % mod) + mod) % mod, t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        t0 -= q * t1;
        std::swap(t0, t1);
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: arguments not coprime");
    return ((t0 % mod) + mod) % mod;
}

// Aligns a divisor->coefficient map onto divisor_profile(n); unmapped slots get fill.
PresentationWitness assemble(i64 n, const std::map<i64, i64>& coeff_by_divisor, i64 fill) {
    DivisorProfile prof = divisor_profile(n);
    PresentationWitness w;
    w.n = n;
    w.kind = Kind::first;
    w.coefficients.reserve(prof.intermediate_divisors.size());
    std::size_t used = 0;
    for (i64 d : prof.intermediate_divisors) {
        auto it = coeff_by_divisor.find(d);
        if (it == coeff_by_divisor.end()) {
            w.coefficients.push_back(fill);
        } else {
            w.coefficients.push_back(it->second);
            ++used;
        }
    }
    if (used != coeff_by_divisor.size())
        throw std::logic_error("assemble: coefficient map names a non-divisor of " +
                               std::to_string(n));
    return w;
}

}  // namespace

i64 PowerTwoRepresentation::value() const {
    i128 sum = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        sum += static_cast<i128>(lambdas[i]) * (static_cast<i128>(1) << (s + static_cast<int>(i)));
    return checked_i64(sum, "PowerTwoRepresentation::value");
}

TwoKpForm TwoKpForm::from(i64 n, i64 m) {
    if (m < 1) throw std::domain_error("TwoKpForm: m must be >= 1");
    Factorization f = factorize(n);
    if (f.factors.size() != 2 || f.factors[0].first != 2 || f.factors[1].second != 1)
        throw std::domain_error(std::to_string(n) + " is not of the form 2^k p with p an odd prime");
    TwoKpForm form;
    form.k = f.factors[0].second;
    form.p = f.factors[1].first;
    form.m = m;
    form.beta = nu2(m + 1);
    return form;
}

std::pair<CoefficientSet, PresentationWitness> adhoc_coefficient_set(i64 n) {
    Factorization f = factorize(n);
    if (f.factors.size() < 2)
        throw std::domain_error("adhoc_coefficient_set: " + std::to_string(n) +
                                " is a prime power");
    const i64 p = f.factors[0].first;
    const i64 q = f.factors[1].first;
    // x*p + y*q = n - 1 with 0 <= x < q; gcd(p, q) = 1 guarantees a solution.
    i128 target = static_cast<i128>(n) - 1;
    i64 tmodq = static_cast<i64>(((target % q) + q) % q);
    i64 x = static_cast<i64>(static_cast<i128>(tmodq) * mod_inverse(p, q) % q);
    i128 y128 = (target - static_cast<i128>(x) * p) / q;
    constexpr i64 kMagCap = i64(1) << 31;
    if (y128 >= kMagCap || y128 <= -kMagCap)
        throw std::domain_error("adhoc_coefficient_set: coefficients exceed the set magnitude cap");
    i64 y = static_cast<i64>(y128);

    PresentationWitness w = assemble(n, {{p, x}, {q, y}}, 0);
    std::vector<i64> elems{x};
    if (y != x) elems.push_back(y);
    bool need_zero = divisor_profile(n).tau > 4 && x != 0 && y != 0;
    if (need_zero) elems.push_back(0);
    CoefficientSet s(std::move(elems));
    if (!verify(w, s)) throw std::logic_error("adhoc_coefficient_set: construction failed");
    return {std::move(s), std::move(w)};
}

std::pair<i64, PresentationWitness> seed_0m(i64 m) {
    if (m < 1) throw std::domain_error("seed_0m: m must be >= 1");
    i128 a = m + 1;
    i128 b = static_cast<i128>(m) * m + m + 1;
    i64 n = checked_i64(a * b, "seed_0m");
    PresentationWitness w = assemble(n, {{static_cast<i64>(a), m}, {static_cast<i64>(b), m}}, 0);
    return {n, w};
}

PresentationWitness scale_0m(const PresentationWitness& w, i64 m) {
    if (m < 1) throw std::domain_error("scale_0m: m must be >= 1");
    if (w.n < 2) throw std::domain_error("scale_0m: requires a positive member");
    CoefficientSet s{0, m};
    if (w.kind != Kind::first || !verify(w, s))
        throw std::invalid_argument("scale_0m: input witness does not verify under {0,m}");
    i64 scaled = checked_i64(static_cast<i128>(m + 1) * w.n, "scale_0m");
    std::map<i64, i64> coeffs;
    DivisorProfile prof = divisor_profile(w.n);
    for (std::size_t i = 0; i < w.coefficients.size(); ++i)
        coeffs[prof.intermediate_divisors[i]] = w.coefficients[i];
    coeffs[w.n] = m;
    PresentationWitness out = assemble(scaled, coeffs, 0);
    if (!verify(out, s)) throw std::logic_error("scale_0m: transform produced a non-witness");
    return out;
}

namespace {

void check_lemma2_domain(int s, int t, i64 m) {
    if (s < 0 || t < s) throw std::domain_error("lemma2: need 0 <= s <= t");
    if (m < 1) throw std::domain_error("lemma2: need m >= 1");
    if (t > 90) throw std::domain_error("lemma2: t beyond supported range");
}

}  // namespace

bool lemma2_representable(i64 target, int s, int t, i64 m) {
    check_lemma2_domain(s, t, m);
    i128 all_neg = (static_cast<i128>(1) << s) * ((static_cast<i128>(1) << (t - s + 1)) - 1);
    i128 modulus = (static_cast<i128>(1) << s) * (m + 1);
    if (target < -all_neg || target > static_cast<i128>(m) * all_neg) return false;
    return (static_cast<i128>(target) + all_neg) % modulus == 0;
}

PowerTwoRepresentation lemma2_witness(i64 target, int s, int t, i64 m) {
    check_lemma2_domain(s, t, m);
    if (t - s > 62) throw std::domain_error("lemma2_witness: span beyond supported range");
    if (!lemma2_representable(target, s, t, m))
        throw std::domain_error("lemma2_witness: " + std::to_string(target) +
                                " is not representable over [" + std::to_string(s) + "," +
                                std::to_string(t) + "] with m=" + std::to_string(m));
    i128 all_neg = (static_cast<i128>(1) << s) * ((static_cast<i128>(1) << (t - s + 1)) - 1);
    i128 modulus = (static_cast<i128>(1) << s) * (m + 1);
    u64 q = static_cast<u64>((static_cast<i128>(target) + all_neg) / modulus);
    PowerTwoRepresentation rep;
    rep.target = target;
    rep.s = s;
    rep.t = t;
    rep.m = m;
    rep.lambdas.resize(static_cast<std::size_t>(t - s + 1));
    for (int b = 0; b <= t - s; ++b)
        rep.lambdas[static_cast<std::size_t>(b)] = (q >> b) & 1 ? m : -1;
    return rep;
}

PowerTwoRepresentation corollary1_extend(const PowerTwoRepresentation& rep, int alpha) {
    if (alpha < 1) throw std::domain_error("corollary1_extend: alpha must be >= 1");
    if (rep.value() != rep.target)
        throw std::invalid_argument("corollary1_extend: representation is inconsistent");
    int beta = nu2(rep.m + 1);
    if (rep.t < rep.s + beta - 1)
        throw std::domain_error("corollary1_extend: need t >= s + beta - 1");
    if (!two_pow_unit(rep.m, alpha))
        throw std::domain_error("corollary1_extend: 2^alpha != 1 mod (m+1)/2^beta");
    return lemma2_witness(rep.target, rep.s, rep.t + alpha, rep.m);
}

bool thrm1_congruence_check(i64 m, int k, int alpha, i64 p) {
    if (m < 1 || k < 1 || alpha < 1) throw std::domain_error("thrm1: need m, k, alpha >= 1");
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw std::domain_error("thrm1: p must be an odd prime");
    return two_pow_unit(m, alpha);
}

PresentationWitness thrm1_lift(const PresentationWitness& w, i64 m, int alpha) {
    TwoKpForm form = TwoKpForm::from(w.n, m);
    const int k = form.k;
    const i64 p = form.p;
    CoefficientSet s{-1, m};
    if (w.kind != Kind::first || !verify(w, s))
        throw std::invalid_argument("thrm1_lift: input witness does not verify under {-1,m}");
    if (alpha < 1) throw std::domain_error("thrm1_lift: alpha must be >= 1");
    if (k < form.beta) throw std::domain_error("thrm1_lift: need k >= nu2(m+1)");
    if (!two_pow_unit(m, alpha))
        throw std::domain_error("thrm1_lift: 2^alpha != 1 mod (m+1)/2^beta");
    if (k + alpha > 60) throw std::domain_error("thrm1_lift: lifted exponent out of range");

    // Split the presentation into the pure-power part and the p-multiples part.
    DivisorProfile prof = divisor_profile(w.n);
    std::vector<i64> lam1(static_cast<std::size_t>(k), 0);      // divisor 2^j, j in [1, k]
    std::vector<i64> lam2(static_cast<std::size_t>(k), 0);      // divisor 2^j p, j in [0, k-1]
    for (std::size_t i = 0; i < prof.intermediate_divisors.size(); ++i) {
        i64 d = prof.intermediate_divisors[i];
        int j = nu2(d);
        if ((d >> j) == 1)
            lam1[static_cast<std::size_t>(j - 1)] = w.coefficients[i];
        else
            lam2[static_cast<std::size_t>(j)] = w.coefficients[i];
    }

    i128 sum1 = 0;
    for (int j = 1; j <= k; ++j)
        sum1 += static_cast<i128>(lam1[static_cast<std::size_t>(j - 1)]) * (static_cast<i128>(1) << j);
    PowerTwoRepresentation rep1{checked_i64(sum1, "thrm1_lift"), 1, k, m, lam1};
    PowerTwoRepresentation ext1 = corollary1_extend(rep1, alpha);

    // A = old p-part plus the new all-ones block 2^k + ... + 2^{k+alpha-1}.
    i128 a = (static_cast<i128>(1) << (k + alpha)) - (static_cast<i128>(1) << k);
    for (int j = 0; j < k; ++j)
        a += static_cast<i128>(lam2[static_cast<std::size_t>(j)]) * (static_cast<i128>(1) << j);
    PowerTwoRepresentation rep2 =
        lemma2_witness(checked_i64(a, "thrm1_lift A"), 0, k + alpha - 1, m);

    i64 lifted = checked_i64((static_cast<i128>(1) << (k + alpha)) * p, "thrm1_lift n");
    std::map<i64, i64> coeffs;
    for (int j = 1; j <= k + alpha; ++j)
        coeffs[i64(1) << j] = ext1.lambdas[static_cast<std::size_t>(j - 1)];
    for (int j = 0; j < k + alpha; ++j)
        coeffs[(i64(1) << j) * p] = rep2.lambdas[static_cast<std::size_t>(j)];
    coeffs.erase(lifted);  // 2^{k+alpha} p itself is not an intermediate divisor
    PresentationWitness out = assemble(lifted, coeffs, 0);
    if (!verify(out, s)) throw std::logic_error("thrm1_lift: lifted witness does not verify");
    return out;
}

std::pair<int, PresentationWitness> thrm2_construct(i64 m, int alpha, i64 p) {
    if (m < 1) throw std::domain_error("thrm2_construct: m must be >= 1");
    int beta = nu2(m + 1);
    if (alpha <= beta) throw std::domain_error("thrm2_construct: need alpha > beta");
    if (alpha > 40) throw std::domain_error("thrm2_construct: alpha beyond supported range");
    if (!two_pow_unit(m, alpha))
        throw std::domain_error("thrm2_construct: 2^alpha != 1 mod (m+1)/2^beta");
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw std::domain_error("thrm2_construct: p must be an odd prime");
    i128 big_n = (static_cast<i128>(1) << (alpha + 1)) - 1;
    i64 two_m1 = 2 * (m + 1);
    i128 want = ((2 * big_n - 1) % two_m1 + two_m1) % two_m1;
    if (p % two_m1 != want)
        throw std::domain_error("thrm2_construct: p != 2(2^{alpha+1}-1)-1 mod 2(m+1)");

    i128 np = big_n * p;
    int k = alpha;
    for (;; ++k) {
        if (k > 62) throw std::domain_error("thrm2_construct: qualifying k exceeds 63-bit range");
        i128 two_k = static_cast<i128>(1) << k;
        bool congruent =
            (two_k % two_m1) == ((static_cast<i128>(1) << alpha) % two_m1);
        if (congruent && np - 1 <= 2 * static_cast<i128>(m) * (two_k - 1)) break;
    }

    PowerTwoRepresentation rep1 = lemma2_witness(checked_i64(np - 1, "thrm2"), 1, k, m);
    PowerTwoRepresentation rep2 =
        lemma2_witness(checked_i64((static_cast<i128>(1) << k) - big_n, "thrm2"), 0, k - 1, m);

    i64 n = checked_i64((static_cast<i128>(1) << k) * p, "thrm2 n");
    std::map<i64, i64> coeffs;
    for (int j = 1; j <= k; ++j)
        coeffs[i64(1) << j] = rep1.lambdas[static_cast<std::size_t>(j - 1)];
    for (int j = 0; j < k; ++j)
        coeffs[(i64(1) << j) * p] = rep2.lambdas[static_cast<std::size_t>(j)];
    PresentationWitness w = assemble(n, coeffs, 0);
    CoefficientSet s{-1, m};
    if (!verify(w, s)) throw std::logic_error("thrm2_construct: witness does not verify");
    return {k, w};
}

bool lemma3_representable(i64 n) { return ((n % 4) + 4) % 4 == 3; }

PresentationWitness lemma4_lift(const PresentationWitness& base,
                                const PresentationWitness& current, i64 p) {
    if (p < 2 || !is_prime(p)) throw std::domain_error("lemma4_lift: p must be prime");
    const CoefficientSet& s = minus1_1();
    if (base.kind != Kind::first || current.kind != Kind::first || !verify(base, s) ||
        !verify(current, s))
        throw std::invalid_argument("lemma4_lift: inputs must verify under {-1,1}");

    auto val_p = [p](i64 n) {
        int v = 0;
        n = abs_i64(n);
        while (n % p == 0) {
            n /= p;
            ++v;
        }
        return v;
    };
    int v1 = val_p(base.n);
    if (v1 > 1) throw std::domain_error("lemma4_lift: p^2 divides the base");
    int j = val_p(current.n);
    i64 core1 = base.n / static_cast<i64>(std::pow(static_cast<double>(p), v1));
    // recompute exactly, pow() above only sizes it
    core1 = base.n;
    for (int i = 0; i < v1; ++i) core1 /= p;
    i64 core2 = current.n;
    for (int i = 0; i < j; ++i) core2 /= p;
    if (core1 != core2)
        throw std::domain_error("lemma4_lift: witnesses disagree on the p-free part");
    if (v1 == 1 && j < 1) throw std::domain_error("lemma4_lift: current must be a p-multiple");

    i128 pj1 = 1;
    for (int i = 0; i <= j; ++i) pj1 *= p;  // p^{j+1}
    i64 lifted = checked_i64(static_cast<i128>(base.n) * pj1, "lemma4_lift n");

    std::map<i64, i64> coeffs;
    DivisorProfile prof_cur = divisor_profile(current.n);
    for (std::size_t i = 0; i < current.coefficients.size(); ++i)
        coeffs[prof_cur.intermediate_divisors[i]] = current.coefficients[i];
    coeffs[abs_i64(current.n)] = -sign_of(current.n);
    i64 pj1_64 = checked_i64(pj1, "lemma4_lift p^{j+1}");
    coeffs[pj1_64] = 1;
    DivisorProfile prof_base = divisor_profile(base.n);
    for (std::size_t i = 0; i < base.coefficients.size(); ++i)
        coeffs[checked_i64(pj1 * prof_base.intermediate_divisors[i], "lemma4_lift")] =
            base.coefficients[i];

    DivisorProfile prof_out = divisor_profile(lifted);
    if (coeffs.size() != prof_out.intermediate_divisors.size())
        throw std::logic_error("lemma4_lift: divisor bookkeeping mismatch");
    PresentationWitness out = assemble(lifted, coeffs, 0);
    if (!verify(out, s)) throw std::logic_error("lemma4_lift: output does not verify");
    return out;
}

PresentationWitness lemma5_double(const PresentationWitness& w) {
    const CoefficientSet& s = minus1_1();
    if (w.kind != Kind::first || !verify(w, s))
        throw std::invalid_argument("lemma5_double: input must verify under {-1,1}");
    if (w.n % 2 != 0) return lemma4_lift(w, w, 2);

    i64 doubled = checked_i64(2 * static_cast<i128>(w.n), "lemma5_double");
    i64 a = abs_i64(w.n);
    DivisorProfile prof = divisor_profile(w.n);
    std::map<i64, i64> coeffs;
    for (std::size_t i = 0; i < w.coefficients.size(); ++i) {
        i64 d = prof.intermediate_divisors[i];
        i64 lam = w.coefficients[i];
        if ((2 * d) % a == 0 ? a % (2 * d) == 0 : a % (2 * d) == 0) {
        }
        if (a % (2 * d) == 0 || 2 * d == a) {
            coeffs[d] = lam;  // 2d already divides n, nothing missing
        } else {
            coeffs[d] = -lam;
            coeffs[2 * d] = lam;
        }
    }
    coeffs[a] = sign_of(w.n);
    PresentationWitness out;
    try {
        out = assemble(doubled, coeffs, 0);
        if (!verify(out, s)) throw std::logic_error("transform failed");
    } catch (const std::logic_error&) {
        // Index bookkeeping has no clean closed form in degenerate cases; the
        // exact solver is the sound fallback.
        SolveOutcome solved = solve(doubled, s, Kind::first);
        if (solved.status != SolveStatus::Perfect)
            throw std::logic_error("lemma5_double: 2n is not {-1,1}-perfect, lemma violated");
        return *solved.witness;
    }
    return out;
}

bool square_obstruction(i64 n) {
    if (n < 2) throw std::domain_error("square_obstruction: n must be >= 2");
    return is_square(odd_part(n));
}

std::vector<bool> minimal_k_scan(i64 d, int kmax, const SearchConfig& config) {
    if (d < 3 || d % 2 == 0 || is_square(d))
        throw std::domain_error("minimal_k_scan: d must be odd, nonsquare, > 1");
    if (kmax < 0) throw std::domain_error("minimal_k_scan: kmax must be >= 0");
    std::vector<bool> member(static_cast<std::size_t>(kmax) + 1, false);
    for (int k = 0; k <= kmax; ++k) {
        i64 n = checked_i64((static_cast<i128>(1) << k) * d, "minimal_k_scan");
        member[static_cast<std::size_t>(k)] = is_sperfect(n, minus1_1(), Kind::first, config);
    }
    return member;
}

}  // namespace sperfect
