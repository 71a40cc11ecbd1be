#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cubres/cubic.hpp"

// Candidate enumeration: all f = x^2 + 243 y^2 in (B1, B2] whose residues
// pass the normalization constraint x == 3y - 1 (mod 6) and for which every
// wheel prime q > 3 has symbol One. Admissible residues are precomputed per
// prime and combined with the CRT into two moduli M1, M2; for each y the
// admissible x mod M1*M2 are enumerated from the per-modulus lists.

namespace cubres {

struct SieveConfig {
    u128 b1 = 0, b2 = 0;
    std::vector<u32> m1_primes, m2_primes;
    u32 table_bound = 541;
    u64 chunk = 65536;  // y-interval width per work unit
    unsigned workers = 1;

    std::vector<u32> wheel_primes() const {
        std::vector<u32> all = m1_primes;
        all.insert(all.end(), m2_primes.begin(), m2_primes.end());
        std::sort(all.begin(), all.end());
        return all;
    }
    u64 m1() const {
        u64 m = 1;
        for (u32 p : m1_primes) m *= p;
        return m;
    }
    u64 m2() const {
        u64 m = 1;
        for (u32 p : m2_primes) m *= p;
        return m;
    }
    void validate() const {
        if (b1 > b2) throw std::invalid_argument("config: need B1 <= B2");
        if (b2 >= (u128(1) << 70)) throw std::invalid_argument("config: B2 must stay below 2^70");
        auto all = wheel_primes();
        for (std::size_t i = 0; i + 1 < all.size(); ++i) {
            if (all[i] == all[i + 1]) throw std::invalid_argument("config: repeated wheel prime");
        }
        for (u32 p : all) {
            if (!is_prime_u128(p)) throw std::invalid_argument("config: wheel entries must be prime");
            if (p > 3 && p > table_bound)
                throw std::invalid_argument("config: wheel prime above table bound");
        }
        if (chunk == 0) throw std::invalid_argument("config: chunk must be positive");
    }
};

inline SieveConfig preset_config(const std::string& name) {
    SieveConfig c;
    if (name == "range-A" || name == "range-a") {
        c.b1 = parse_u128("2e14");
        c.b2 = parse_u128("8.47e15");
        c.m1_primes = {2, 3, 5};
        c.m2_primes = {7};
    } else if (name == "range-B" || name == "range-b") {
        c.b1 = parse_u128("8.47e15");
        c.b2 = parse_u128("2e20");
        c.m1_primes = {2, 3, 5, 7, 11, 13, 17};
        c.m2_primes = {19, 23, 29};
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return c;
}

inline std::vector<u32> parse_prime_list(const std::string& s) {
    std::vector<u32> out;
    std::string tok;
    std::stringstream ss(s);
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(u32(parse_u128(tok)));
    }
    return out;
}

// Key-value config file: '#' comments, "key = value" lines. Keys: preset,
// range (two values), wheel_m1, wheel_m2, chunk, table_bound, workers.
inline SieveConfig parse_config_text(std::istream& in) {
    SieveConfig c;
    bool have_preset = false;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "preset") {
            auto p = preset_config(val);
            if (!have_preset) {
                c = p;
                have_preset = true;
            }
        } else if (key == "range") {
            std::stringstream vs(val);
            std::string a, b;
            vs >> a >> b;
            c.b1 = parse_u128(a);
            c.b2 = parse_u128(b);
        } else if (key == "wheel_m1") {
            c.m1_primes = parse_prime_list(val);
        } else if (key == "wheel_m2") {
            c.m2_primes = parse_prime_list(val);
        } else if (key == "chunk") {
            c.chunk = u64(parse_u128(val));
        } else if (key == "table_bound") {
            c.table_bound = u32(parse_u128(val));
        } else if (key == "workers") {
            c.workers = unsigned(parse_u128(val));
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    return c;
}

// ---- symbol tables -------------------------------------------------------------

// Full symbol table over (x mod q, y mod q). Built by walking the cyclic
// group once instead of a powmod per entry; a spot check against
// cubic_symbol pins the orientation.
struct SymbolTable {
    u32 q = 0;
    std::vector<CubicSymbol> sym;  // q*q entries, index x*q + y

    CubicSymbol at(u64 x, u64 y) const { return sym[std::size_t(x % q) * q + std::size_t(y % q)]; }
    CubicSymbol at_signed(i64 x, u64 y) const {
        u64 xr = u64(((x % i64(q)) + i64(q)) % i64(q));
        return at(xr, y % q);
    }
    u64 admissible_count() const {
        u64 n = 0;
        for (auto s : sym) n += (s == CubicSymbol::One);
        return n;
    }
};

namespace detail {

inline std::vector<u64> distinct_prime_factors_u64(u64 n) {
    std::vector<u64> f;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            f.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) f.push_back(n);
    return f;
}

// Index-mod-3 of every nonzero element of F_q via a primitive root walk.
inline std::vector<std::uint8_t> cube_classes_fq(u32 q) {
    auto fac = distinct_prime_factors_u64(q - 1);
    u64 g = 2;
    for (;; ++g) {
        bool ok = true;
        for (u64 ell : fac) {
            if (powmod(g, (q - 1) / ell, q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) break;
    }
    std::vector<std::uint8_t> cls(q, 0);
    u64 e = 1;
    for (u64 k = 0; k < q - 1; ++k) {
        cls[std::size_t(e)] = std::uint8_t(k % 3);
        e = e * g % q;
    }
    return cls;
}

}  // namespace detail

inline SymbolTable build_symbol_table(u32 q) {
    if (q <= 3 || !is_prime_u128(q)) throw std::invalid_argument("build_symbol_table: need prime q > 3");
    SymbolTable t;
    t.q = q;
    t.sym.assign(std::size_t(q) * q, CubicSymbol::Zero);
    u64 inv2 = (q + 1) / 2;
    if (q % 3 == 1) {
        u64 s = u64(sqrt_minus3(q));
        auto cls = detail::cube_classes_fq(q);
        // Orient the class labels: which nontrivial cube root of unity is
        // g^((q-1)/3) for the walk generator? Recover it from any class-1
        // element and the detection targets (-1 +- s)/2.
        CubicSymbol class_sym[3] = {CubicSymbol::One, CubicSymbol::Omega, CubicSymbol::OmegaSq};
        for (u64 a = 1; a < q; ++a) {
            if (cls[a] == 1) {
                u64 tpow = u64(powmod(a, (q - 1) / 3, q));
                u64 om = u64(mulmod(q - 1 + s, inv2, q));
                class_sym[1] = (tpow == om) ? CubicSymbol::Omega : CubicSymbol::OmegaSq;
                class_sym[2] = conj(class_sym[1]);
                break;
            }
        }
        for (u64 x = 0; x < q; ++x) {
            for (u64 y = 0; y < q; ++y) {
                u64 w = 9 * y % q * s % q;
                u64 A = (x + q - w) % q;
                u64 B = (x + w) % q;
                CubicSymbol v;
                if (A == 0 || B == 0) {
                    v = CubicSymbol::Zero;  // q | x^2 + 243 y^2
                } else {
                    v = class_sym[(2 * cls[A] + cls[B]) % 3];
                }
                t.sym[std::size_t(x) * q + y] = v;
            }
        }
    } else {
        // Walk F_q[sqrt(-3)]^*, a field of order q^2 since -3 is a non-square.
        u64 order = u64(q) * q - 1;
        auto fac = detail::distinct_prime_factors_u64(order);
        QuadExtElement gen{q, 0, 1};
        auto is_generator = [&](const QuadExtElement& g) {
            for (u64 ell : fac) {
                QuadExtElement p = g.pow(order / ell);
                if (p.a == 1 && p.b == 0) return false;
            }
            return true;
        };
        bool found = false;
        for (u64 a = 0; a < q && !found; ++a) {
            for (u64 b = 1; b < q && !found; ++b) {
                gen = QuadExtElement{q, a, b};
                if (is_generator(gen)) found = true;
            }
        }
        if (!found) throw std::logic_error("build_symbol_table: no generator found");
        std::vector<std::uint8_t> cls(std::size_t(q) * q, 0);
        QuadExtElement e{q, 1, 0};
        for (u64 k = 0; k < order; ++k) {
            cls[std::size_t(e.a) * q + e.b] = std::uint8_t(k % 3);
            e = e.mul(gen);
        }
        CubicSymbol class_sym[3] = {CubicSymbol::One, CubicSymbol::Omega, CubicSymbol::OmegaSq};
        QuadExtElement w3 = gen.pow(order / 3);
        u64 am = q - inv2;
        if (w3.a != am) throw std::logic_error("build_symbol_table: bad cube root of unity");
        class_sym[1] = (w3.b == inv2) ? CubicSymbol::Omega : CubicSymbol::OmegaSq;
        class_sym[2] = conj(class_sym[1]);
        for (u64 x = 0; x < q; ++x) {
            for (u64 y = 0; y < q; ++y) {
                u64 b = 9 * y % q;
                CubicSymbol v;
                if (x == 0 && b == 0) {
                    v = CubicSymbol::Zero;
                } else {
                    v = class_sym[cls[std::size_t(x) * q + b]];
                }
                t.sym[std::size_t(x) * q + y] = v;
            }
        }
    }
    return t;
}

// Admissibility view of a symbol table: (x, y) is admissible iff the symbol
// is One; pairs on the x^2 + 243 y^2 == 0 locus carry symbol Zero and are
// excluded automatically.
struct ResidueTable {
    u32 q = 0;
    std::vector<bool> admissible;  // q*q entries, index x*q + y

    bool at(u64 x, u64 y) const { return admissible[std::size_t(x % q) * q + std::size_t(y % q)]; }
    u64 count() const {
        u64 n = 0;
        for (bool b : admissible) n += b;
        return n;
    }
};

inline ResidueTable build_residue_table(u32 q) {
    SymbolTable t = build_symbol_table(q);
    ResidueTable r;
    r.q = q;
    r.admissible.resize(t.sym.size());
    for (std::size_t i = 0; i < t.sym.size(); ++i) r.admissible[i] = t.sym[i] == CubicSymbol::One;
    return r;
}

// Tables for every prime in (3, bound].
class SymbolTableSet {
  public:
    explicit SymbolTableSet(u32 bound) : bound_(bound) {
        for (u32 p : sieve_primes(bound)) {
            if (p > 3) tables_.emplace(p, build_symbol_table(p));
        }
    }

    u32 bound() const { return bound_; }
    bool has(u32 q) const { return tables_.count(q) != 0; }
    const SymbolTable& at(u32 q) const { return tables_.at(q); }

    // Table lookup when available, closed-form evaluation otherwise.
    CubicSymbol symbol(u32 q, const PrimeRep& rep) const {
        auto it = tables_.find(q);
        if (it != tables_.end()) return it->second.at_signed(rep.x, rep.y);
        return cubic_symbol(q, rep);
    }

  private:
    u32 bound_;
    std::map<u32, SymbolTable> tables_;
};

// ---- CRT wheel -------------------------------------------------------------------

struct Candidate {
    u128 f;
    i64 x;
    u64 y;
};

class WheelPlan {
  public:
    WheelPlan(const SieveConfig& cfg, const SymbolTableSet& tables)
        : m1_primes_(cfg.m1_primes), m2_primes_(cfg.m2_primes), tables_(&tables) {
        m1_ = cfg.m1();
        m2_ = cfg.m2();
        if (gcd_u128(m1_, m2_) != 1) throw std::invalid_argument("wheel: moduli not coprime");
        m_ = m1_ * m2_;
        if (m1_ == 1) {
            c1_ = 0;
            c2_ = 1 % m_;
        } else if (m2_ == 1) {
            c1_ = 1 % m_;
            c2_ = 0;
        } else {
            c1_ = u64(mulmod(m2_, invmod(m2_ % m1_, m1_), m_));
            c2_ = u64(mulmod(m1_, invmod(m1_ % m2_, m2_), m_));
        }
        bool has2 = false, has3 = false;
        for (u32 p : m1_primes_) has2 |= p == 2, has3 |= p == 3;
        for (u32 p : m2_primes_) has2 |= p == 2, has3 |= p == 3;
        has_six_ = has2 && has3;
        // Cache complete per-y lists when the combined modulus is small.
        if (m_ <= (1u << 20)) {
            cache_.resize(std::size_t(m_));
            for (u64 y = 0; y < m_; ++y) {
                cache_[std::size_t(y)] = combine(y);
            }
            cached_ = true;
        }
    }

    u64 modulus() const { return m_; }
    bool mod6_structural() const { return has_six_; }

    // Sorted admissible x' mod M for this y.
    std::vector<u64> admissible_x(u64 y) const {
        if (cached_) return cache_[std::size_t(y % m_)];
        return combine(y);
    }

    u64 admissible_pairs() const {
        if (!cached_) throw std::logic_error("admissible_pairs: wheel too large to materialize");
        u64 n = 0;
        for (const auto& v : cache_) n += v.size();
        return n;
    }

  private:
    std::vector<u64> lists_mod(const std::vector<u32>& primes, u64 y) const {
        std::vector<u64> xs{0};
        u64 mod = 1;
        for (u32 q : primes) {
            std::vector<u64> adm;
            if (q == 2) {
                adm.push_back((y + 1) & 1);  // opposite parity
            } else if (q == 3) {
                adm.push_back(2);  // x == 2 (mod 3)
            } else {
                const SymbolTable& t = tables_->at(q);
                for (u64 x = 0; x < q; ++x) {
                    if (t.at(x, y % q) == CubicSymbol::One) adm.push_back(x);
                }
            }
            std::vector<u64> next;
            next.reserve(xs.size() * adm.size());
            // CRT lift: value v mod `mod` and a mod q.
            u64 minv = u64(invmod(mod % q, q));
            for (u64 v : xs) {
                for (u64 a : adm) {
                    u64 delta = (a + q - v % q) % q;
                    u64 k = delta * minv % q;
                    next.push_back(v + mod * k);
                }
            }
            xs = std::move(next);
            mod *= q;
        }
        return xs;
    }

    std::vector<u64> combine(u64 y) const {
        std::vector<u64> l1 = m1_primes_.empty() ? std::vector<u64>{0} : lists_mod(m1_primes_, y % m1_);
        std::vector<u64> l2 = m2_primes_.empty() ? std::vector<u64>{0} : lists_mod(m2_primes_, y % m2_);
        std::vector<u64> out;
        out.reserve(l1.size() * l2.size());
        for (u64 x1 : l1) {
            u128 t1 = mulmod(x1, c1_, m_);
            for (u64 x2 : l2) {
                u64 x0 = u64(addmod(t1, mulmod(x2, c2_, m_), m_));
                out.push_back(x0);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<u32> m1_primes_, m2_primes_;
    const SymbolTableSet* tables_;
    u64 m1_ = 1, m2_ = 1, m_ = 1, c1_ = 0, c2_ = 0;
    bool has_six_ = false;
    bool cached_ = false;
    std::vector<std::vector<u64>> cache_;
};

inline u64 sieve_y_max(u128 b2) { return u64(isqrt_u128(b2 / 243)); }

namespace detail {
inline i64 floordiv(i64 a, i64 b) {  // b > 0
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}
inline i64 ceildiv(i64 a, i64 b) { return -floordiv(-a, b); }
}  // namespace detail

// Emit candidates for y in [y_lo, y_hi], ascending y then ascending x.
// Only the shell B1 < x^2 + 243 y^2 <= B2 is walked: for each admissible
// residue x0 the progression x = x0 + k M visits the two arms
// [-xmax, -xmin] and [xmin, xmax].
template <typename Fn>
void enumerate_y_range(const SieveConfig& cfg, const WheelPlan& plan, u64 y_lo, u64 y_hi, Fn&& fn) {
    const i64 m = i64(plan.modulus());
    const bool need_mod6 = !plan.mod6_structural();
    std::vector<i64> xs;
    for (u64 y = y_lo; y <= y_hi; ++y) {
        u128 yy = u128(243) * y * y;
        if (yy >= cfg.b2) break;
        i64 xmax = i64(isqrt_u128(cfg.b2 - yy));
        i64 xmin = cfg.b1 >= yy ? i64(isqrt_u128(cfg.b1 - yy)) + 1 : 0;
        if (xmin > xmax) continue;
        xs.clear();
        auto arm = [&](i64 lo, i64 hi, i64 x0) {
            i64 k0 = detail::ceildiv(lo - x0, m);
            i64 k1 = detail::floordiv(hi - x0, m);
            for (i64 k = k0; k <= k1; ++k) xs.push_back(x0 + k * m);
        };
        for (u64 x0u : plan.admissible_x(y)) {
            i64 x0 = i64(x0u);
            if (xmin == 0) {
                arm(-xmax, xmax, x0);
            } else {
                arm(-xmax, -xmin, x0);
                arm(xmin, xmax, x0);
            }
        }
        std::sort(xs.begin(), xs.end());
        for (i64 x : xs) {
            if (need_mod6) {
                i64 want = i64((3 * (y % 2) + 5) % 6);
                if (((x % 6) + 6) % 6 != want) continue;
            }
            u128 f = u128(u64(x < 0 ? -x : x)) * u64(x < 0 ? -x : x) + yy;
            if (f > cfg.b1 && f <= cfg.b2) fn(Candidate{f, x, y});
        }
    }
}

}  // namespace cubres
