#include "sperfect/presentation.hpp"

#include <algorithm>
#include <limits>

namespace sperfect {

std::string kind_name(Kind k) { return k == Kind::first ? "first" : "second"; }

Kind kind_from_name(const std::string& s) {
    if (s == "first") return Kind::first;
    if (s == "second") return Kind::second;
    throw std::invalid_argument("unknown presentation kind: " + s);
}

CoefficientSet::CoefficientSet(std::vector<i64> elems) : elems_(std::move(elems)) {
    if (elems_.empty()) throw std::invalid_argument("coefficient set must be nonempty");
    std::sort(elems_.begin(), elems_.end());
    if (std::adjacent_find(elems_.begin(), elems_.end()) != elems_.end())
        throw std::invalid_argument("coefficient set has duplicate elements");
    constexpr i64 kMagCap = i64(1) << 31;
    for (i64 e : elems_)
        if (e >= kMagCap || e <= -kMagCap)
            throw std::invalid_argument("coefficient magnitude " + std::to_string(e) +
                                        " out of range (< 2^31 required)");
}

bool CoefficientSet::contains(i64 v) const {
    return std::binary_search(elems_.begin(), elems_.end(), v);
}

std::string CoefficientSet::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < elems_.size(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(elems_[i]);
    }
    return s;
}

CoefficientSet CoefficientSet::parse(const std::string& csv) {
    std::vector<i64> elems;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (tok.empty()) throw std::invalid_argument("empty element in coefficient set: '" + csv + "'");
        std::size_t used = 0;
        i64 v;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad coefficient '" + tok + "'");
        }
        if (used != tok.size()) throw std::invalid_argument("bad coefficient '" + tok + "'");
        elems.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return CoefficientSet(std::move(elems));
}

CoefficientSet set_union(const CoefficientSet& a, const CoefficientSet& b) {
    std::vector<i64> u = a.elements();
    for (i64 e : b.elements())
        if (!a.contains(e)) u.push_back(e);
    return CoefficientSet(std::move(u));
}

std::optional<CoefficientSet> set_intersection(const CoefficientSet& a, const CoefficientSet& b) {
    std::vector<i64> v;
    for (i64 e : a.elements())
        if (b.contains(e)) v.push_back(e);
    if (v.empty()) return std::nullopt;
    return CoefficientSet(std::move(v));
}

bool verify(const PresentationWitness& w, const CoefficientSet& s) {
    DivisorProfile prof = divisor_profile(w.n);
    if (w.coefficients.size() != prof.intermediate_divisors.size())
        throw std::invalid_argument(
            "witness for n=" + std::to_string(w.n) + " has " +
            std::to_string(w.coefficients.size()) + " coefficients, expected " +
            std::to_string(prof.intermediate_divisors.size()));
    i128 sum;
    if (w.kind == Kind::first) {
        sum = 1;
    } else {
        if (!s.contains(w.lambda0)) return false;
        sum = w.lambda0;
    }
    for (std::size_t i = 0; i < w.coefficients.size(); ++i) {
        if (!s.contains(w.coefficients[i])) return false;
        sum += static_cast<i128>(w.coefficients[i]) * prof.intermediate_divisors[i];
    }
    return sum == static_cast<i128>(w.n);
}

namespace {

// Bitset over the value interval [lo, lo + nbits).
struct Layer {
    i128 lo = 0;
    i64 nbits = 0;
    std::vector<u64> w;

    void init(i128 lo_, i64 nbits_) {
        lo = lo_;
        nbits = nbits_;
        w.assign(static_cast<std::size_t>((nbits + 63) / 64), 0);
    }
    void mask_tail() {
        int r = static_cast<int>(nbits & 63);
        if (r != 0 && !w.empty()) w.back() &= (~u64(0)) >> (64 - r);
    }
    bool test_value(i128 v) const {
        if (v < lo || v >= lo + nbits) return false;
        i64 b = static_cast<i64>(v - lo);
        return (w[static_cast<std::size_t>(b >> 6)] >> (b & 63)) & 1;
    }
    void set_value(i128 v) {
        i64 b = static_cast<i64>(v - lo);
        w[static_cast<std::size_t>(b >> 6)] |= u64(1) << (b & 63);
    }
    bool any() const {
        for (u64 x : w)
            if (x) return true;
        return false;
    }
};

u64 word_at(const Layer& src, i64 idx) {
    if (idx < 0 || idx >= static_cast<i64>(src.w.size())) return 0;
    return src.w[static_cast<std::size_t>(idx)];
}

// dst |= { v + value_shift : v in src }, clipped to dst's interval.
void or_shifted(Layer& dst, const Layer& src, i128 value_shift) {
    i128 ofs128 = src.lo + value_shift - dst.lo;  // dst bit = src bit + ofs
    if (ofs128 >= static_cast<i128>(dst.nbits)) return;
    if (ofs128 + static_cast<i128>(src.nbits) <= 0) return;
    i64 ofs = static_cast<i64>(ofs128);
    i64 q = ofs >= 0 ? ofs / 64 : -((-ofs + 63) / 64);
    int r = static_cast<int>(ofs - 64 * q);
    i64 first_bit = std::max<i64>(0, ofs);
    i64 last_bit = std::min<i64>(dst.nbits - 1, ofs + src.nbits - 1);
    for (i64 di = first_bit >> 6; di <= (last_bit >> 6); ++di) {
        u64 v;
        if (r == 0) {
            v = word_at(src, di - q);
        } else {
            v = (word_at(src, di - q) << r) | (word_at(src, di - q - 1) >> (64 - r));
        }
        dst.w[static_cast<std::size_t>(di)] |= v;
    }
    dst.mask_tail();
}

enum class DfsResult { Found, NotFound, Budget };

struct DfsSearch {
    const std::vector<i64>& divs;
    const std::vector<i64>& coeffs;  // S ascending
    i128 target;
    i64 budget;
    i64 nodes = 0;
    std::vector<i128> suf_min, suf_max;  // over positions j..k-1
    std::vector<i64> lambda;

    DfsResult run(std::size_t j, i128 s) {
        if (++nodes > budget) return DfsResult::Budget;
        if (j == divs.size()) return s == target ? DfsResult::Found : DfsResult::NotFound;
        i128 rem = target - s;
        if (rem < suf_min[j] || rem > suf_max[j]) return DfsResult::NotFound;
        for (i64 c : coeffs) {
            DfsResult res = run(j + 1, s + static_cast<i128>(c) * divs[j]);
            if (res == DfsResult::Found) {
                lambda[j] = c;
                return res;
            }
            if (res == DfsResult::Budget) return res;
        }
        return DfsResult::NotFound;
    }
};

}  // namespace

SolveOutcome solve(i64 n, const CoefficientSet& s, Kind kind, const SearchConfig& config) {
    if (n > -2 && n < 2) throw std::domain_error("solve: |n| must be > 1");
    if (config.memory_cap_bytes <= 0 || config.node_budget <= 0)
        throw std::domain_error("solve: caps must be positive");

    DivisorProfile prof = divisor_profile(n);
    const std::vector<i64>& divs = prof.intermediate_divisors;
    const std::size_t k = divs.size();
    const i64 min_s = s.min_elem(), max_s = s.max_elem();
    const i128 base_lo = kind == Kind::first ? 1 : min_s;
    const i128 base_hi = kind == Kind::first ? 1 : max_s;

    // Prefix/suffix divisor sums for the per-layer feasible intervals.
    std::vector<i128> prefd(k + 1, 0);
    for (std::size_t j = 0; j < k; ++j) prefd[j + 1] = prefd[j] + divs[j];
    const i128 total = prefd[k];

    SolveOutcome out;
    out.stats.layers = static_cast<i64>(k) + 1;

    // Feasibility pre-check: a necessary interval bound, exact when it fails.
    if (n < base_lo + min_s * total || n > base_hi + max_s * total) {
        out.status = SolveStatus::NotPerfect;
        return out;
    }

    // Layer j holds the sums after divisors 1..j from which n stays reachable.
    // Bracketed both forward (coefficients so far) and backward (coefficients to go).
    std::vector<i128> range_lo(k + 1), range_hi(k + 1);
    bool empty_range = false;
    i128 total_words = 0;
    for (std::size_t j = 0; j <= k; ++j) {
        i128 sufd = total - prefd[j];
        i128 lo = std::max(base_lo + min_s * prefd[j], static_cast<i128>(n) - max_s * sufd);
        i128 hi = std::min(base_hi + max_s * prefd[j], static_cast<i128>(n) - min_s * sufd);
        if (lo > hi) {
            empty_range = true;
            break;
        }
        range_lo[j] = lo;
        range_hi[j] = hi;
        total_words += (hi - lo + 1 + 63) / 64;
    }
    if (empty_range) {
        out.status = SolveStatus::NotPerfect;
        return out;
    }

    if (total_words * 8 <= config.memory_cap_bytes) {
        std::vector<Layer> layers(k + 1);
        for (std::size_t j = 0; j <= k; ++j)
            layers[j].init(range_lo[j], static_cast<i64>(range_hi[j] - range_lo[j] + 1));
        out.stats.bytes = static_cast<i64>(total_words) * 8;

        layers[k].set_value(n);
        for (std::size_t j = k; j >= 1; --j) {
            for (i64 c : s.elements())
                or_shifted(layers[j - 1], layers[j], -static_cast<i128>(c) * divs[j - 1]);
            if (!layers[j - 1].any()) {
                out.status = SolveStatus::NotPerfect;
                return out;
            }
        }

        PresentationWitness w;
        w.n = n;
        w.kind = kind;
        i128 sum;
        if (kind == Kind::first) {
            if (!layers[0].test_value(1)) {
                out.status = SolveStatus::NotPerfect;
                return out;
            }
            sum = 1;
        } else {
            bool found = false;
            sum = 0;
            for (i64 c : s.elements()) {
                if (layers[0].test_value(c)) {
                    w.lambda0 = c;
                    sum = c;
                    found = true;
                    break;
                }
            }
            if (!found) {
                out.status = SolveStatus::NotPerfect;
                return out;
            }
        }
        w.coefficients.resize(k);
        for (std::size_t j = 1; j <= k; ++j) {
            bool stepped = false;
            for (i64 c : s.elements()) {
                i128 next = sum + static_cast<i128>(c) * divs[j - 1];
                if (layers[j].test_value(next)) {
                    w.coefficients[j - 1] = c;
                    sum = next;
                    stepped = true;
                    break;
                }
            }
            if (!stepped)
                throw std::logic_error("solve: backtrack lost the target at layer " +
                                       std::to_string(j));
        }
        out.status = SolveStatus::Perfect;
        out.witness = std::move(w);
        return out;
    }

    // Bitset layers would not fit: complete DFS with suffix-interval pruning.
    // Ascending divisor order with ascending coefficients keeps the first hit canonical.
    DfsSearch dfs{divs, s.elements(), 0, config.node_budget, 0, {}, {}, {}};
    dfs.suf_min.assign(k + 1, 0);
    dfs.suf_max.assign(k + 1, 0);
    for (std::size_t j = k; j-- > 0;) {
        dfs.suf_min[j] = dfs.suf_min[j + 1] + static_cast<i128>(min_s) * divs[j];
        dfs.suf_max[j] = dfs.suf_max[j + 1] + static_cast<i128>(max_s) * divs[j];
    }
    dfs.lambda.assign(k, 0);

    auto finish = [&](DfsResult res, i64 lambda0) {
        out.stats.nodes = dfs.nodes;
        switch (res) {
            case DfsResult::Found: {
                PresentationWitness w;
                w.n = n;
                w.kind = kind;
                w.lambda0 = lambda0;
                w.coefficients = dfs.lambda;
                out.status = SolveStatus::Perfect;
                out.witness = std::move(w);
                break;
            }
            case DfsResult::NotFound:
                out.status = SolveStatus::NotPerfect;
                break;
            case DfsResult::Budget:
                out.status = SolveStatus::Exhausted;
                break;
        }
        return out;
    };

    if (kind == Kind::first) {
        dfs.target = n;
        return finish(dfs.run(0, 1), 0);
    }
    for (i64 lambda0 : s.elements()) {
        dfs.target = n;
        DfsResult res = dfs.run(0, lambda0);
        if (res != DfsResult::NotFound) return finish(res, lambda0);
    }
    return finish(DfsResult::NotFound, 0);
}

bool is_sperfect(i64 n, const CoefficientSet& s, Kind kind, const SearchConfig& config) {
    SolveOutcome out = solve(n, s, kind, config);
    if (out.status == SolveStatus::Exhausted)
        throw exhausted_error("solve exhausted its budget for n=" + std::to_string(n) +
                              ", S={" + s.to_string() + "}; raise the caps");
    return out.status == SolveStatus::Perfect;
}

nlohmann::json witness_json(const PresentationWitness& w, const CoefficientSet& s) {
    nlohmann::json j;
    j["n"] = w.n;
    j["kind"] = kind_name(w.kind);
    j["set"] = s.elements();
    j["divisors"] = divisor_profile(w.n).intermediate_divisors;
    j["coefficients"] = w.coefficients;
    if (w.kind == Kind::second) j["lambda0"] = w.lambda0;
    return j;
}

PresentationWitness witness_from_json(const nlohmann::json& j) {
    PresentationWitness w;
    w.n = j.at("n").get<i64>();
    w.kind = kind_from_name(j.at("kind").get<std::string>());
    w.coefficients = j.at("coefficients").get<std::vector<i64>>();
    if (w.kind == Kind::second) w.lambda0 = j.at("lambda0").get<i64>();
    return w;
}

}  // namespace sperfect
