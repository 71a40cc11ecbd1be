#pragma once

#include <functional>
#include <numeric>
#include <optional>
#include <string>

#include "cubres/sieve.hpp"
#include "cubres/thresholds.hpp"

// Post-processing of sieve candidates, in cost order:
//  (1) find the least non-residue q1 <= 317 (wheel primes are residues and
//      are skipped); on success reject by threshold table, then by primality
//  (2) when q1 > 317: reject if gcd(x,y) > 1 or f is a cube or f is
//      composite, then continue the q1 search up to 541
//  (3) search prime non-residues q1 < q2 < m <= 541 with q2 m a residue and
//      apply the witness criterion
//  (4) whatever remains is a survivor and must be reported.

namespace cubres {

enum class Disposition : std::uint8_t {
    RejectedThreshold,
    RejectedComposite,
    RejectedStructural,
    RejectedCriterion,
    Survivor,
};

inline const char* to_cstr(Disposition d) {
    switch (d) {
        case Disposition::RejectedThreshold: return "RejectedThreshold";
        case Disposition::RejectedComposite: return "RejectedComposite";
        case Disposition::RejectedStructural: return "RejectedStructural";
        case Disposition::RejectedCriterion: return "RejectedCriterion";
        case Disposition::Survivor: return "Survivor";
    }
    return "?";
}

struct CandidateRecord {
    u128 f = 0;
    i64 x = 0;
    u64 y = 0;
    Disposition disposition = Disposition::Survivor;
    u32 q1 = 0, q2 = 0, m = 0;  // zero when not applicable

    std::string line() const {
        std::string s = cubres::to_string(f);
        s += '\t';
        s += cubres::to_string(i128(x));
        s += '\t';
        s += cubres::to_string(u128(y));
        s += '\t';
        s += to_cstr(disposition);
        if (q1 != 0) {
            s += '\t';
            s += std::to_string(q1);
        }
        if (q2 != 0) {
            s += '\t';
            s += std::to_string(q2);
            s += '\t';
            s += std::to_string(m);
        }
        return s;
    }
};

using SymbolFn = std::function<CubicSymbol(u64)>;

// Witness criterion: m coprime to q1 q2, chi(q2) chi(m) = 1, and the size
// clauses; q1 = 2 needs 3 q2 m <= f, otherwise 3 q1 q2 m (resp. 2 q1 q2 m
// outside the q2^2 m == f (mod q1), q2 < 2 q1 branch) and 10 q1^2 q2, all
// bounded by f.
inline bool criterion_check(u128 f, u64 q1, u64 q2, u64 m, const SymbolFn& chi_of) {
    if (q1 >= q2 || !is_prime_u128(q1) || !is_prime_u128(q2)) {
        throw std::invalid_argument("criterion_check: need primes q1 < q2");
    }
    if (m == 0) return false;
    if (m % q1 == 0 || m % q2 == 0) return false;  // (m, q1 q2) = 1
    CubicSymbol sq2 = chi_of(q2);
    if (!is_nonresidue(sq2)) throw std::invalid_argument("criterion_check: q2 must be a non-residue");
    if (sq2 * chi_of(m) != CubicSymbol::One) return false;
    u128 size1;
    if (q1 == 2) {
        size1 = u128(3) * q2 * m;
        return size1 <= f;
    }
    bool special = q2 < 2 * q1 && (u128(q2) * q2 % q1) * m % q1 == f % q1;
    size1 = (special ? u128(3) : u128(2)) * q1 * q2 * m;
    u128 size2 = u128(10) * q1 * q1 * q2;
    return size1 <= f && size2 <= f;
}

// First (q2, m) in lexicographic order passing the criterion, both prime
// non-residues in (q1, 541].
inline std::optional<std::pair<u32, u32>> criterion_search(u128 f, u32 q1, const SymbolFn& chi_of) {
    const auto& ps = primes_to_541();
    for (u32 q2 : ps) {
        if (q2 <= q1) continue;
        CubicSymbol s2 = chi_of(q2);
        if (!is_nonresidue(s2)) continue;
        for (u32 m : ps) {
            if (m <= q2) continue;
            CubicSymbol sm = chi_of(m);
            if (!is_nonresidue(sm)) continue;
            if (s2 * sm != CubicSymbol::One) continue;
            if (criterion_check(f, q1, q2, m, chi_of)) return std::make_pair(q2, m);
        }
    }
    return std::nullopt;
}

// gcd(x, y) > 1 or f a perfect cube.
inline bool structural_reject(const PrimeRep& rep) {
    u64 ax = u64(rep.x < 0 ? -rep.x : rep.x);
    if (std::gcd(ax, rep.y) > 1) return true;
    return is_cube_u128(rep.f);
}

class PostProcessor {
  public:
    PostProcessor(const SymbolTableSet& tables, std::vector<u32> wheel_primes)
        : tables_(&tables), wheel_(std::move(wheel_primes)) {
        for (u32 p : primes_to_541()) {
            if (p <= 3) continue;
            if (std::find(wheel_.begin(), wheel_.end(), p) != wheel_.end()) continue;
            search_.push_back(p);
        }
    }

    // Least prime non-residue q <= bound per the symbol tables; wheel primes
    // skipped (residues by construction).
    std::optional<u32> find_q1(const PrimeRep& rep, u32 bound) const {
        for (u32 q : search_) {
            if (q > bound) break;
            if (is_nonresidue(tables_->symbol(q, rep))) return q;
        }
        return std::nullopt;
    }

    CandidateRecord process(const PrimeRep& rep) const {
        CandidateRecord rec;
        rec.f = rep.f;
        rec.x = rep.x;
        rec.y = rep.y;
        SymbolFn chi = [&](u64 q) { return tables_->symbol(u32(q), rep); };
        auto q1 = find_q1(rep, 317);
        if (q1) {
            rec.q1 = *q1;
            if (auto f0 = threshold_f0_for(*q1); f0 && rep.f >= *f0) {
                rec.disposition = Disposition::RejectedThreshold;
                return rec;
            }
            if (!is_prime_u128(rep.f)) {
                rec.disposition = Disposition::RejectedComposite;
                return rec;
            }
        } else {
            if (structural_reject(rep)) {
                rec.disposition = Disposition::RejectedStructural;
                return rec;
            }
            if (!is_prime_u128(rep.f)) {
                rec.disposition = Disposition::RejectedComposite;
                return rec;
            }
            q1 = find_q1(rep, 541);
            if (!q1) {
                rec.disposition = Disposition::Survivor;
                return rec;
            }
            rec.q1 = *q1;
        }
        if (auto hit = criterion_search(rep.f, *q1, chi)) {
            rec.disposition = Disposition::RejectedCriterion;
            rec.q2 = hit->first;
            rec.m = hit->second;
        } else {
            rec.disposition = Disposition::Survivor;
        }
        return rec;
    }

    static std::optional<u128> threshold_f0_for(u32 q1) {
        const ThresholdRow* row = threshold_row(q1);
        if (!row) return std::nullopt;
        return row->f0_u128();
    }

  private:
    const SymbolTableSet* tables_;
    std::vector<u32> wheel_;
    std::vector<u32> search_;
};

// Standalone predicate: reject iff f >= f0(q1). q1 without a table row is
// "not applicable" and reported via nullopt by threshold_f0_for.
inline bool threshold_reject(u128 f, u32 q1) {
    auto f0 = PostProcessor::threshold_f0_for(q1);
    if (!f0) throw std::invalid_argument("threshold_reject: q1 not in table");
    return f >= *f0;
}

}  // namespace cubres
