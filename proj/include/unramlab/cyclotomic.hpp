#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_N).
//
// Elements are kept in canonical form on the power basis
// {zeta_N^i : 0 <= i < phi(N)} after reduction modulo the N-th cyclotomic
// polynomial Phi_N. The power basis is a Z-basis of the ring of integers of
// Q(zeta_N), so integrality is just "all coefficients are integers".
// Conductors are never auto-minimized; descend() is the explicit move to a
// subfield. Values are immutable and all operations are pure.

#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unramlab/errors.hpp"
#include "unramlab/numeric.hpp"

#include <json.hpp>

namespace unram {

namespace detail {

using SparseIntPoly = std::vector<std::pair<int, Int>>;

// Dense ascending-degree integer polynomial helpers (for Phi_N construction).
inline std::vector<Int> poly_div_exact(const std::vector<Int>& num, const std::vector<Int>& den) {
    // den monic; exact division, remainder must vanish
    std::vector<Int> rem = num;
    int dn = static_cast<int>(rem.size()) - 1;
    int dd = static_cast<int>(den.size()) - 1;
    std::vector<Int> quot(dn - dd + 1, Int(0));
    for (int k = dn - dd; k >= 0; --k) {
        Int c = rem[k + dd];
        quot[k] = c;
        if (c != 0)
            for (int i = 0; i <= dd; ++i) rem[k + i] -= c * den[i];
    }
    for (const Int& c : rem)
        if (c != 0) throw InternalInconsistency("cyclotomic polynomial division left a remainder");
    return quot;
}

struct ConductorData {
    long n = 1;
    long phi = 1;
    std::vector<Int> cyclo;              // Phi_n, dense ascending, monic of degree phi
    std::vector<SparseIntPoly> powers;   // x^t mod Phi_n for t in [0, 2n)
};

inline std::shared_ptr<const ConductorData> build_conductor_data(long n) {
    auto data = std::make_shared<ConductorData>();
    data->n = n;
    data->phi = euler_phi(n);

    // Phi_d for all d | n via iterated exact division of x^d - 1.
    std::map<long, std::vector<Int>> phis;
    for (long long d : divisors(n)) {
        std::vector<Int> f(static_cast<size_t>(d) + 1, Int(0));
        f[0] = -1;
        f[static_cast<size_t>(d)] = 1; // x^d - 1
        for (long long e : divisors(d))
            if (e != d) f = poly_div_exact(f, phis.at(e));
        phis[static_cast<long>(d)] = std::move(f);
    }
    data->cyclo = phis.at(n);

    // x^phi == -(c_0 + c_1 x + ... + c_{phi-1} x^{phi-1})
    const long phi = data->phi;
    data->powers.resize(static_cast<size_t>(2 * n));
    std::vector<Int> cur(static_cast<size_t>(phi), Int(0)); // dense current power
    cur[0] = 1;
    for (long t = 0; t < 2 * n; ++t) {
        SparseIntPoly row;
        for (long i = 0; i < phi; ++i)
            if (cur[static_cast<size_t>(i)] != 0) row.emplace_back(static_cast<int>(i), cur[static_cast<size_t>(i)]);
        data->powers[static_cast<size_t>(t)] = std::move(row);
        // multiply by x
        Int head = cur[static_cast<size_t>(phi - 1)];
        for (long i = phi - 1; i > 0; --i) cur[static_cast<size_t>(i)] = cur[static_cast<size_t>(i - 1)];
        cur[0] = 0;
        if (head != 0)
            for (long i = 0; i < phi; ++i) cur[static_cast<size_t>(i)] -= head * data->cyclo[static_cast<size_t>(i)];
    }
    return data;
}

inline const ConductorData& conductor_data(long n) {
    static std::mutex mtx;
    static std::map<long, std::shared_ptr<const ConductorData>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_conductor_data(n)).first;
    return *it->second;
}

} // namespace detail

class Cyc {
public:
    // zero at conductor 1
    Cyc() : n_(1) {}

    explicit Cyc(const Rat& r) : n_(1) {
        if (r != 0) terms_.emplace_back(0, r);
    }
    explicit Cyc(long v) : Cyc(Rat(v)) {}

    static Cyc root_of_unity(long n, long k) {
        if (n < 1) throw UnramError("root_of_unity: conductor must be positive");
        k %= n;
        if (k < 0) k += n;
        const auto& cd = detail::conductor_data(n);
        Cyc out;
        out.n_ = n;
        for (const auto& [i, c] : cd.powers[static_cast<size_t>(k)])
            out.terms_.emplace_back(i, Rat(c));
        return out;
    }

    long conductor() const { return n_; }
    bool is_zero() const { return terms_.empty(); }

    // nonzero coefficients on the power basis, ascending exponent
    const std::vector<std::pair<int, Rat>>& terms() const { return terms_; }

    std::vector<Rat> dense_coeffs() const {
        std::vector<Rat> out(static_cast<size_t>(detail::conductor_data(n_).phi), Rat(0));
        for (const auto& [i, c] : terms_) out[static_cast<size_t>(i)] = c;
        return out;
    }

    bool is_rational() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0);
    }
    Rat rational_value() const {
        if (!is_rational()) throw UnramError("rational_value: element is not rational");
        return terms_.empty() ? Rat(0) : terms_[0].second;
    }

    // lies in Z[zeta_N]: power basis is a Z-basis of the ring of integers
    bool is_integral() const {
        for (const auto& [i, c] : terms_) {
            (void)i;
            if (c.get_den() != 1) return false;
        }
        return true;
    }

    // re-express at conductor m, n_ | m
    Cyc lifted(long m) const {
        if (m == n_) return *this;
        if (m % n_ != 0) throw UnramError("lifted: target conductor not a multiple");
        const auto& cd = detail::conductor_data(m);
        std::vector<Rat> acc(static_cast<size_t>(cd.phi), Rat(0));
        const long stride = m / n_;
        for (const auto& [i, c] : terms_)
            for (const auto& [j, w] : cd.powers[static_cast<size_t>(i * stride)])
                acc[static_cast<size_t>(j)] += c * Rat(w);
        return from_dense(m, acc);
    }

    friend Cyc operator+(const Cyc& a, const Cyc& b) {
        long m = lcm_ll(a.n_, b.n_);
        Cyc x = a.lifted(m), y = b.lifted(m);
        std::vector<Rat> acc(static_cast<size_t>(detail::conductor_data(m).phi), Rat(0));
        for (const auto& [i, c] : x.terms_) acc[static_cast<size_t>(i)] += c;
        for (const auto& [i, c] : y.terms_) acc[static_cast<size_t>(i)] += c;
        return from_dense(m, acc);
    }
    friend Cyc operator-(const Cyc& a, const Cyc& b) { return a + (-b); }
    Cyc operator-() const {
        Cyc out = *this;
        for (auto& [i, c] : out.terms_) { (void)i; c = -c; }
        return out;
    }
    friend Cyc operator*(const Cyc& a, const Cyc& b) {
        if (a.is_zero() || b.is_zero()) return Cyc();
        long m = lcm_ll(a.n_, b.n_);
        Cyc x = a.lifted(m), y = b.lifted(m);
        const auto& cd = detail::conductor_data(m);
        std::vector<Rat> acc(static_cast<size_t>(cd.phi), Rat(0));
        for (const auto& [i, c] : x.terms_)
            for (const auto& [j, d] : y.terms_) {
                Rat cd2 = c * d;
                for (const auto& [t, w] : cd.powers[static_cast<size_t>(i + j)])
                    acc[static_cast<size_t>(t)] += cd2 * Rat(w);
            }
        return from_dense(m, acc);
    }
    friend Cyc operator*(const Rat& s, const Cyc& a) {
        if (s == 0) return Cyc();
        Cyc out = a;
        for (auto& [i, c] : out.terms_) { (void)i; c *= s; }
        return out;
    }
    friend Cyc operator*(const Cyc& a, const Rat& s) { return s * a; }
    Cyc& operator+=(const Cyc& o) { *this = *this + o; return *this; }
    Cyc& operator-=(const Cyc& o) { *this = *this - o; return *this; }
    Cyc& operator*=(const Cyc& o) { *this = *this * o; return *this; }

    friend bool operator==(const Cyc& a, const Cyc& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const Cyc& a, const Cyc& b) { return cmp(a, b) != 0; }

    // total order (for deterministic sorting): compare dense coefficients at
    // the common conductor, low exponent first
    static int cmp(const Cyc& a, const Cyc& b) {
        long m = lcm_ll(a.n_, b.n_);
        Cyc x = a.lifted(m), y = b.lifted(m);
        size_t ia = 0, ib = 0;
        while (ia < x.terms_.size() || ib < y.terms_.size()) {
            int ea = ia < x.terms_.size() ? x.terms_[ia].first : INT32_MAX;
            int eb = ib < y.terms_.size() ? y.terms_[ib].first : INT32_MAX;
            if (ea < eb) {
                int s = sgn(x.terms_[ia].second);
                return s; // y has 0 there
            }
            if (eb < ea) return -sgn(y.terms_[ib].second);
            int c = ::cmp(x.terms_[ia].second, y.terms_[ib].second);
            if (c != 0) return c < 0 ? -1 : 1;
            ++ia; ++ib;
        }
        return 0;
    }

    static Cyc from_dense(long n, const std::vector<Rat>& coeffs) {
        Cyc out;
        out.n_ = n;
        for (size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs[i] != 0) out.terms_.emplace_back(static_cast<int>(i), coeffs[i]);
        return out;
    }

private:
    static int sgn(const Rat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

    long n_;
    std::vector<std::pair<int, Rat>> terms_;
};

// image of x under zeta_N -> zeta_N^s; requires gcd(s, N) = 1
inline Cyc galois_apply(const Cyc& x, long long s) {
    const long n = x.conductor();
    long long sr = ((s % n) + n) % n;
    if (std::gcd(sr, static_cast<long long>(n)) != 1)
        throw NotCoprime("galois_apply: exponent not coprime to conductor");
    const auto& cd = detail::conductor_data(n);
    std::vector<Rat> acc(static_cast<size_t>(cd.phi), Rat(0));
    for (const auto& [i, c] : x.terms())
        for (const auto& [j, w] : cd.powers[static_cast<size_t>((i * sr) % n)])
            acc[static_cast<size_t>(j)] += c * Rat(w);
    return Cyc::from_dense(n, acc);
}

inline Cyc conjugate(const Cyc& x) { return galois_apply(x, -1); }

namespace detail {

// Cached exact solver for re-expressing conductor-n values in the embedded
// basis {zeta_n^{(n/r) j} : j < phi(r)}.
struct DescentSolver {
    long n, r;
    long phin, phir;
    std::vector<std::vector<Int>> embed;   // phin x phir, integer
    std::vector<int> pivot_rows;           // phir selected rows
    std::vector<std::vector<Rat>> inv;     // inverse of embed[pivot_rows]
};

inline std::shared_ptr<const DescentSolver> build_descent_solver(long n, long r) {
    auto sv = std::make_shared<DescentSolver>();
    sv->n = n; sv->r = r;
    const auto& cd = conductor_data(n);
    sv->phin = cd.phi;
    sv->phir = euler_phi(r);
    sv->embed.assign(static_cast<size_t>(sv->phin), std::vector<Int>(static_cast<size_t>(sv->phir), Int(0)));
    const long stride = n / r;
    for (long j = 0; j < sv->phir; ++j)
        for (const auto& [t, w] : cd.powers[static_cast<size_t>(j * stride)])
            sv->embed[static_cast<size_t>(t)][static_cast<size_t>(j)] = w;

    // pick phir independent rows by Gaussian elimination
    std::vector<std::vector<Rat>> work;
    std::vector<int> rows;
    std::vector<std::vector<Rat>> basis; // echelon rows over selected set
    for (int t = 0; t < sv->phin && static_cast<long>(rows.size()) < sv->phir; ++t) {
        std::vector<Rat> v(static_cast<size_t>(sv->phir));
        for (long j = 0; j < sv->phir; ++j) v[static_cast<size_t>(j)] = Rat(sv->embed[static_cast<size_t>(t)][static_cast<size_t>(j)]);
        // reduce against current echelon
        std::vector<Rat> red = v;
        for (const auto& b : basis) {
            size_t lead = 0;
            while (lead < b.size() && b[lead] == 0) ++lead;
            if (lead < b.size() && red[lead] != 0) {
                Rat f = red[lead] / b[lead];
                for (size_t k = lead; k < red.size(); ++k) red[k] -= f * b[k];
            }
        }
        bool nonzero = false;
        for (const auto& c : red) if (c != 0) { nonzero = true; break; }
        if (nonzero) {
            rows.push_back(t);
            basis.push_back(red);
            // keep echelon sorted by leading index
            std::sort(basis.begin(), basis.end(), [](const auto& a, const auto& b2) {
                size_t la = 0, lb = 0;
                while (la < a.size() && a[la] == 0) ++la;
                while (lb < b2.size() && b2[lb] == 0) ++lb;
                return la < lb;
            });
        }
    }
    if (static_cast<long>(rows.size()) != sv->phir)
        throw InternalInconsistency("descent: embedding matrix is rank-deficient");
    sv->pivot_rows = rows;

    // invert the phir x phir submatrix exactly
    const long d = sv->phir;
    std::vector<std::vector<Rat>> a(static_cast<size_t>(d), std::vector<Rat>(static_cast<size_t>(2 * d), Rat(0)));
    for (long i = 0; i < d; ++i) {
        for (long j = 0; j < d; ++j)
            a[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(sv->embed[static_cast<size_t>(rows[static_cast<size_t>(i)])][static_cast<size_t>(j)]);
        a[static_cast<size_t>(i)][static_cast<size_t>(d + i)] = 1;
    }
    for (long col = 0; col < d; ++col) {
        long piv = -1;
        for (long i = col; i < d; ++i)
            if (a[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) { piv = i; break; }
        if (piv < 0) throw InternalInconsistency("descent: singular pivot submatrix");
        std::swap(a[static_cast<size_t>(piv)], a[static_cast<size_t>(col)]);
        Rat lead = a[static_cast<size_t>(col)][static_cast<size_t>(col)];
        for (long j = 0; j < 2 * d; ++j) a[static_cast<size_t>(col)][static_cast<size_t>(j)] /= lead;
        for (long i = 0; i < d; ++i) {
            if (i == col) continue;
            Rat f = a[static_cast<size_t>(i)][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (long j = 0; j < 2 * d; ++j)
                a[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(col)][static_cast<size_t>(j)];
        }
    }
    sv->inv.assign(static_cast<size_t>(d), std::vector<Rat>(static_cast<size_t>(d)));
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j)
            sv->inv[static_cast<size_t>(i)][static_cast<size_t>(j)] = a[static_cast<size_t>(i)][static_cast<size_t>(d + j)];
    return sv;
}

inline const DescentSolver& descent_solver(long n, long r) {
    static std::mutex mtx;
    static std::map<std::pair<long, long>, std::shared_ptr<const DescentSolver>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(n, r);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_descent_solver(n, r)).first;
    return *it->second;
}

} // namespace detail

// re-express x at conductor r (r | conductor), or NotInSubfield
inline Cyc descend(const Cyc& x, long r) {
    const long n = x.conductor();
    if (r < 1 || n % r != 0) throw UnramError("descend: target must divide the conductor");
    if (r == n) return x;
    if (x.is_zero()) return Cyc();
    const auto& sv = detail::descent_solver(n, r);
    std::vector<Rat> b = x.dense_coeffs();
    std::vector<Rat> y(static_cast<size_t>(sv.phir), Rat(0));
    for (long i = 0; i < sv.phir; ++i) {
        Rat s(0);
        for (long j = 0; j < sv.phir; ++j)
            s += sv.inv[static_cast<size_t>(i)][static_cast<size_t>(j)] * b[static_cast<size_t>(sv.pivot_rows[static_cast<size_t>(j)])];
        y[static_cast<size_t>(i)] = s;
    }
    // verify on all rows
    for (long t = 0; t < sv.phin; ++t) {
        Rat s(0);
        for (long j = 0; j < sv.phir; ++j)
            if (y[static_cast<size_t>(j)] != 0 && sv.embed[static_cast<size_t>(t)][static_cast<size_t>(j)] != 0)
                s += Rat(sv.embed[static_cast<size_t>(t)][static_cast<size_t>(j)]) * y[static_cast<size_t>(j)];
        if (s != b[static_cast<size_t>(t)])
            throw NotInSubfield("descend: element does not lie in the requested subfield");
    }
    return Cyc::from_dense(r, y);
}

constexpr long kValuationInfinity = -1; // not used as a value; depth uses optional

// Largest m with x - y in p^m Z[zeta_r] for r the prime-to-p part of the
// common conductor; nullopt means x == y (infinite congruence).
inline std::optional<int> congruence_valuation(const Cyc& x, const Cyc& y, long long p) {
    Cyc d = x - y;
    if (d.is_zero()) return std::nullopt;
    const long n = d.conductor();
    const long r = static_cast<long>(prime_to_p_part(n, p));
    Cyc dr = descend(d, r); // throws NotInSubfield if it fails
    int best = INT32_MAX;
    for (const auto& [i, c] : dr.terms()) {
        (void)i;
        if (c.get_den() != 1)
            throw NotIntegral("congruence_valuation: difference is not an algebraic integer");
        best = std::min(best, p_valuation(Int(c.get_num()), p));
        if (best == 0) break;
    }
    return best;
}

// ---- rendering ----

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

// polynomial in z{N}, highest power first, e.g. "-z3-1", "2", "1/2*z8^3+z8"
inline std::string to_string(const Cyc& x) {
    if (x.is_zero()) return "0";
    if (x.conductor() == 1 || x.is_rational()) return rat_to_string(x.rational_value());
    std::string out;
    const auto& ts = x.terms();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        const auto& [e, c] = *it;
        Rat a = c;
        bool neg = a < 0;
        if (neg) a = -a;
        if (out.empty()) { if (neg) out += "-"; }
        else out += neg ? "-" : "+";
        std::string var;
        if (e == 0) var = "";
        else if (e == 1) var = "z" + std::to_string(x.conductor());
        else var = "z" + std::to_string(x.conductor()) + "^" + std::to_string(e);
        if (var.empty()) out += rat_to_string(a);
        else if (a == 1) out += var;
        else out += rat_to_string(a) + "*" + var;
    }
    return out;
}

// ---- serialization ----
// { "conductor": N, "coeffs": [c0, c1, ...] } with c either a bare integer,
// [num, den], or decimal strings when outside int64 range.

namespace detail {
inline nlohmann::json int_to_json(const Int& z) {
    if (z.fits_slong_p()) return static_cast<long long>(z.get_si());
    return z.get_str();
}
inline Int int_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return Int(j.get<std::string>());
    throw SchemaError("expected integer or integer string");
}
} // namespace detail

inline nlohmann::json cyc_to_json(const Cyc& x) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const Rat& c : x.dense_coeffs()) {
        if (c.get_den() == 1) coeffs.push_back(detail::int_to_json(Int(c.get_num())));
        else coeffs.push_back(nlohmann::json::array({detail::int_to_json(Int(c.get_num())), detail::int_to_json(Int(c.get_den()))}));
    }
    return nlohmann::json{{"conductor", x.conductor()}, {"coeffs", coeffs}};
}

inline Cyc cyc_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("conductor") || !j.contains("coeffs"))
        throw SchemaError("cyclotomic value: expected {conductor, coeffs}");
    long n = j.at("conductor").get<long>();
    if (n < 1) throw SchemaError("cyclotomic value: conductor must be positive");
    const auto& cj = j.at("coeffs");
    if (!cj.is_array() || static_cast<long>(cj.size()) != detail::conductor_data(n).phi)
        throw SchemaError("cyclotomic value: coeffs must have length phi(conductor)");
    std::vector<Rat> coeffs;
    coeffs.reserve(cj.size());
    for (const auto& e : cj) {
        if (e.is_array()) {
            if (e.size() != 2) throw SchemaError("cyclotomic value: coefficient pair must be [num, den]");
            Int num = detail::int_from_json(e[0]), den = detail::int_from_json(e[1]);
            if (den == 0) throw SchemaError("cyclotomic value: zero denominator");
            Rat r(num);
            r /= Rat(den);
            coeffs.push_back(r);
        } else {
            coeffs.push_back(Rat(detail::int_from_json(e)));
        }
    }
    return Cyc::from_dense(n, coeffs);
}

// 64-bit fingerprint for hashing; equality decisions are always made exactly.
inline uint64_t cyc_fingerprint(const Cyc& x, long lift_to) {
    Cyc y = x.lifted(lift_to);
    const uint64_t kMod = 0x1fffffffffffffffULL; // 2^61 - 1
    uint64_t h = 1469598103934665603ULL ^ static_cast<uint64_t>(lift_to);
    for (const auto& [i, c] : y.terms()) {
        uint64_t nu = mpz_fdiv_ui(c.get_num().get_mpz_t(), kMod);
        uint64_t de = mpz_fdiv_ui(c.get_den().get_mpz_t(), kMod);
        h ^= static_cast<uint64_t>(i) + 0x9e3779b97f4a7c15ULL;
        h *= 1099511628211ULL;
        h ^= nu;
        h *= 1099511628211ULL;
        h ^= de;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace unram
