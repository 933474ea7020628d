#include "extpow/ring.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace extpow {

namespace {

// Graded-lex comparison on exponent vectors: higher total degree first, then
// lexicographic.  Returns <0, 0, >0 like strcmp with "a before b" negative.
int mono_cmp(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    long long da = 0, db = 0;
    for (auto e : a) da += e;
    for (auto e : b) db += e;
    if (da != db) return da > db ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
    }
    return 0;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % p);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t p) {
    // p prime, a != 0 mod p
    return powmod_u64(a % p, p - 2, p);
}

Int normalize_mod(const Int& v, const Int& k) {
    Int r = v % k;
    if (r < 0) r += k;
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

bool is_prime_Int(const Int& n) {
    if (n < 2) return false;
    if (n <= Int(std::numeric_limits<std::uint64_t>::max()))
        return is_prime_u64(n.convert_to<std::uint64_t>());
    throw UnsupportedRingError("primality check beyond 64-bit moduli is not supported");
}

bool PolyVal::operator==(const PolyVal& o) const {
    if (terms.size() != o.terms.size()) return false;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].exp != o.terms[i].exp || !(terms[i].coeff == o.terms[i].coeff)) return false;
    }
    return true;
}

Elem::Elem(const Ring* ring, std::variant<std::monostate, Int, Rat, ModVal, DualVal, PolyVal> v)
    : ring_(ring), v_(std::move(v)) {}

bool Elem::operator==(const Elem& o) const {
    return ring_ == o.ring_ && v_ == o.v_;
}

// ---------------------------------------------------------------------------
// Ring interning
// ---------------------------------------------------------------------------

const Ring& Ring::intern(Ring&& draft) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<Ring>>* registry =
        new std::map<std::string, std::unique_ptr<Ring>>();
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry->find(draft.token_);
    if (it != registry->end()) return *it->second;
    auto owned = std::unique_ptr<Ring>(new Ring(std::move(draft)));
    const Ring& ref = *owned;
    registry->emplace(ref.token_, std::move(owned));
    return ref;
}

const Ring& Ring::integers() {
    Ring r;
    r.kind_ = RingKind::Integers;
    r.token_ = "Z";
    return intern(std::move(r));
}

const Ring& Ring::rationals() {
    Ring r;
    r.kind_ = RingKind::Rationals;
    r.token_ = "Q";
    return intern(std::move(r));
}

const Ring& Ring::modular(const Int& modulus) {
    if (modulus < 2) throw UnsupportedRingError("modulus must be >= 2");
    Ring r;
    r.kind_ = RingKind::Modular;
    r.modulus_ = modulus;
    r.token_ = "Z/" + modulus.str();
    return intern(std::move(r));
}

const Ring& Ring::dual_numbers(std::uint64_t p) {
    if (p >= (1ull << 32)) throw UnsupportedRingError("dual-number base prime must fit 32 bits");
    if (!is_prime_u64(p)) throw UnsupportedRingError("dual-number base must be prime");
    Ring r;
    r.kind_ = RingKind::Dual;
    r.prime_ = p;
    r.token_ = "F" + std::to_string(p) + "[d]";
    return intern(std::move(r));
}

const Ring& Ring::polynomial(const Ring& base, std::vector<std::string> vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].empty() || !std::isalpha(static_cast<unsigned char>(vars[i][0])))
            throw UnsupportedRingError("variable names must start with a letter");
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j]) throw UnsupportedRingError("variable names must be distinct");
    }
    Ring r;
    r.kind_ = RingKind::Polynomial;
    r.base_ = &base;
    r.vars_ = vars;
    std::string tok = "poly(" + base.token() + "; ";
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i) tok += ",";
        tok += vars[i];
    }
    tok += ")";
    r.token_ = std::move(tok);
    return intern(std::move(r));
}

const Ring& Ring::parse(std::string_view token) {
    auto strip = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    token = strip(token);
    if (token == "Z") return integers();
    if (token == "Q") return rationals();
    if (token.rfind("Z/", 0) == 0) {
        Int k(std::string(token.substr(2)));
        return modular(k);
    }
    if (token.size() >= 2 && token[0] == 'F') {
        if (token.back() == ']') {
            auto open = token.find('[');
            if (open == std::string_view::npos || token.substr(open) != "[d]")
                throw UnsupportedRingError("bad dual-number token: " + std::string(token));
            Int p(std::string(token.substr(1, open - 1)));
            return dual_numbers(p.convert_to<std::uint64_t>());
        }
        Int p(std::string(token.substr(1)));
        if (!is_prime_Int(p)) throw UnsupportedRingError("F<p> requires prime p: " + std::string(token));
        return modular(p);
    }
    if (token.rfind("poly(", 0) == 0 && token.back() == ')') {
        std::string_view inner = token.substr(5, token.size() - 6);
        // Split at the top-level ';' (the base token may itself be poly(...)).
        std::size_t semi = std::string_view::npos;
        int depth = 0;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == '(') ++depth;
            if (inner[i] == ')') --depth;
            if (inner[i] == ';' && depth == 0) {
                semi = i;
                break;
            }
        }
        if (semi == std::string_view::npos)
            throw UnsupportedRingError("bad polynomial token: " + std::string(token));
        const Ring& base = parse(inner.substr(0, semi));
        std::string_view varlist = strip(inner.substr(semi + 1));
        std::vector<std::string> vars;
        std::size_t start = 0;
        while (start <= varlist.size()) {
            auto comma = varlist.find(',', start);
            std::string_view name = comma == std::string_view::npos
                                        ? varlist.substr(start)
                                        : varlist.substr(start, comma - start);
            name = strip(name);
            if (!name.empty()) vars.emplace_back(name);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return polynomial(base, std::move(vars));
    }
    throw UnsupportedRingError("unknown ring token: " + std::string(token));
}

// ---------------------------------------------------------------------------
// Predicates and constants
// ---------------------------------------------------------------------------

bool Ring::is_field() const {
    switch (kind_) {
        case RingKind::Rationals: return true;
        case RingKind::Modular: return is_prime_Int(modulus_);
        default: return false;
    }
}

bool Ring::is_domain() const {
    switch (kind_) {
        case RingKind::Integers:
        case RingKind::Rationals: return true;
        case RingKind::Modular: return is_prime_Int(modulus_);
        case RingKind::Dual: return false;
        case RingKind::Polynomial: return base_->is_domain();
    }
    return false;
}

Int Ring::characteristic() const {
    switch (kind_) {
        case RingKind::Integers:
        case RingKind::Rationals: return 0;
        case RingKind::Modular: return modulus_;
        case RingKind::Dual: return Int(prime_);
        case RingKind::Polynomial: return base_->characteristic();
    }
    return 0;
}

Elem Ring::zero() const {
    switch (kind_) {
        case RingKind::Integers: return Elem(this, Int(0));
        case RingKind::Rationals: return Elem(this, Rat(0));
        case RingKind::Modular: return Elem(this, ModVal{Int(0)});
        case RingKind::Dual: return Elem(this, DualVal{0, 0});
        case RingKind::Polynomial: return Elem(this, PolyVal{});
    }
    return Elem();
}

Elem Ring::one() const { return from_int(1); }

Elem Ring::from_Int(const Int& v) const {
    switch (kind_) {
        case RingKind::Integers: return Elem(this, v);
        case RingKind::Rationals: return Elem(this, Rat(v));
        case RingKind::Modular: return Elem(this, ModVal{normalize_mod(v, modulus_)});
        case RingKind::Dual: {
            Int r = normalize_mod(v, Int(prime_));
            return Elem(this, DualVal{r.convert_to<std::uint64_t>(), 0});
        }
        case RingKind::Polynomial: {
            Elem c = base_->from_Int(v);
            if (base_->is_zero(c)) return zero();
            PolyVal p;
            p.terms.push_back(PolyTerm{std::vector<std::uint32_t>(vars_.size(), 0), c});
            return Elem(this, std::move(p));
        }
    }
    return Elem();
}

Elem Ring::from_int(long long v) const { return from_Int(Int(v)); }

Elem Ring::var(std::size_t i) const {
    if (kind_ != RingKind::Polynomial) throw UnsupportedRingError("var() on non-polynomial ring");
    if (i >= vars_.size()) throw UnsupportedRingError("variable index out of range");
    PolyVal p;
    std::vector<std::uint32_t> exp(vars_.size(), 0);
    exp[i] = 1;
    p.terms.push_back(PolyTerm{std::move(exp), base_->one()});
    return Elem(this, std::move(p));
}

Elem Ring::lift(const Elem& a) const {
    if (a.ring_ptr() == this) return a;
    if (kind_ != RingKind::Polynomial || a.ring_ptr() != base_)
        throw UnsupportedRingError("cannot lift element of " + a.ring().token() + " into " + token_);
    if (base_->is_zero(a)) return zero();
    PolyVal p;
    p.terms.push_back(PolyTerm{std::vector<std::uint32_t>(vars_.size(), 0), a});
    return Elem(this, std::move(p));
}

Elem Ring::dual_from_parts(std::uint64_t a, std::uint64_t b) const {
    if (kind_ != RingKind::Dual) throw UnsupportedRingError("dual_from_parts on non-dual ring");
    return Elem(this, DualVal{a % prime_, b % prime_});
}

void Ring::check_same(const Elem& a, const Elem& b) const {
    if (a.ring_ptr() != this || b.ring_ptr() != this)
        throw RingError("operands belong to different rings");
}

// ---------------------------------------------------------------------------
// Arithmetic
// ---------------------------------------------------------------------------

namespace {

// Canonicalize a term list: sort graded-lex, combine equal monomials, drop
// zero coefficients.
PolyVal normalize_terms(const Ring& base, std::vector<PolyTerm> terms) {
    std::sort(terms.begin(), terms.end(), [](const PolyTerm& x, const PolyTerm& y) {
        return mono_cmp(x.exp, y.exp) < 0;
    });
    PolyVal out;
    out.terms.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.terms.empty() && out.terms.back().exp == t.exp) {
            out.terms.back().coeff = base.add(out.terms.back().coeff, t.coeff);
        } else {
            out.terms.push_back(std::move(t));
        }
    }
    std::erase_if(out.terms, [&](const PolyTerm& t) { return base.is_zero(t.coeff); });
    return out;
}

}  // namespace

Elem Ring::add(const Elem& a, const Elem& b) const {
    check_same(a, b);
    switch (kind_) {
        case RingKind::Integers: return Elem(this, Int(a.as_int() + b.as_int()));
        case RingKind::Rationals: return Elem(this, Rat(a.as_rat() + b.as_rat()));
        case RingKind::Modular: return Elem(this, ModVal{normalize_mod(a.as_mod().r + b.as_mod().r, modulus_)});
        case RingKind::Dual: {
            const auto& x = a.as_dual();
            const auto& y = b.as_dual();
            return Elem(this, DualVal{(x.a + y.a) % prime_, (x.b + y.b) % prime_});
        }
        case RingKind::Polynomial: {
            // Sorted merge of the two term lists.
            const auto& x = a.as_poly().terms;
            const auto& y = b.as_poly().terms;
            PolyVal out;
            out.terms.reserve(x.size() + y.size());
            std::size_t i = 0, j = 0;
            while (i < x.size() || j < y.size()) {
                if (j == y.size()) { out.terms.push_back(x[i++]); continue; }
                if (i == x.size()) { out.terms.push_back(y[j++]); continue; }
                int c = mono_cmp(x[i].exp, y[j].exp);
                if (c < 0) out.terms.push_back(x[i++]);
                else if (c > 0) out.terms.push_back(y[j++]);
                else {
                    Elem s = base_->add(x[i].coeff, y[j].coeff);
                    if (!base_->is_zero(s)) out.terms.push_back(PolyTerm{x[i].exp, std::move(s)});
                    ++i; ++j;
                }
            }
            return Elem(this, std::move(out));
        }
    }
    return Elem();
}

Elem Ring::neg(const Elem& a) const {
    switch (kind_) {
        case RingKind::Integers: return Elem(this, Int(-a.as_int()));
        case RingKind::Rationals: return Elem(this, Rat(-a.as_rat()));
        case RingKind::Modular: {
            const Int& r = a.as_mod().r;
            return Elem(this, ModVal{r == 0 ? Int(0) : Int(modulus_ - r)});
        }
        case RingKind::Dual: {
            const auto& x = a.as_dual();
            return Elem(this, DualVal{x.a ? prime_ - x.a : 0, x.b ? prime_ - x.b : 0});
        }
        case RingKind::Polynomial: {
            PolyVal out = a.as_poly();
            for (auto& t : out.terms) t.coeff = base_->neg(t.coeff);
            return Elem(this, std::move(out));
        }
    }
    return Elem();
}

Elem Ring::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

Elem Ring::mul(const Elem& a, const Elem& b) const {
    check_same(a, b);
    switch (kind_) {
        case RingKind::Integers: return Elem(this, Int(a.as_int() * b.as_int()));
        case RingKind::Rationals: return Elem(this, Rat(a.as_rat() * b.as_rat()));
        case RingKind::Modular: return Elem(this, ModVal{normalize_mod(a.as_mod().r * b.as_mod().r, modulus_)});
        case RingKind::Dual: {
            const auto& x = a.as_dual();
            const auto& y = b.as_dual();
            // (a1 + b1 d)(a2 + b2 d) = a1 a2 + (a1 b2 + b1 a2) d
            std::uint64_t aa = mulmod_u64(x.a, y.a, prime_);
            std::uint64_t bb = (mulmod_u64(x.a, y.b, prime_) + mulmod_u64(x.b, y.a, prime_)) % prime_;
            return Elem(this, DualVal{aa, bb});
        }
        case RingKind::Polynomial: {
            const auto& x = a.as_poly().terms;
            const auto& y = b.as_poly().terms;
            std::vector<PolyTerm> prod;
            prod.reserve(x.size() * y.size());
            for (const auto& tx : x) {
                for (const auto& ty : y) {
                    PolyTerm t;
                    t.exp.resize(vars_.size());
                    for (std::size_t v = 0; v < vars_.size(); ++v) t.exp[v] = tx.exp[v] + ty.exp[v];
                    t.coeff = base_->mul(tx.coeff, ty.coeff);
                    prod.push_back(std::move(t));
                }
            }
            return Elem(this, normalize_terms(*base_, std::move(prod)));
        }
    }
    return Elem();
}

bool Ring::is_zero(const Elem& a) const {
    switch (kind_) {
        case RingKind::Integers: return a.as_int() == 0;
        case RingKind::Rationals: return a.as_rat() == 0;
        case RingKind::Modular: return a.as_mod().r == 0;
        case RingKind::Dual: return a.as_dual().a == 0 && a.as_dual().b == 0;
        case RingKind::Polynomial: return a.as_poly().terms.empty();
    }
    return false;
}

bool Ring::is_one(const Elem& a) const { return a == one(); }

namespace {

bool is_nilpotent_impl(const Ring& ring, const Elem& a) {
    if (ring.is_zero(a)) return true;
    switch (ring.kind()) {
        case RingKind::Integers:
        case RingKind::Rationals: return false;
        case RingKind::Dual: return a.as_dual().a == 0;
        case RingKind::Modular: {
            // Repeated squaring reaches zero iff the residue is nilpotent.
            Elem x = a;
            for (int i = 0; i < 64; ++i) {
                x = ring.mul(x, x);
                if (ring.is_zero(x)) return true;
            }
            return false;
        }
        case RingKind::Polynomial: {
            for (const auto& t : a.as_poly().terms)
                if (!is_nilpotent_impl(ring.base(), t.coeff)) return false;
            return true;
        }
    }
    return false;
}

}  // namespace

bool Ring::is_unit(const Elem& a) const {
    switch (kind_) {
        case RingKind::Integers: return a.as_int() == 1 || a.as_int() == -1;
        case RingKind::Rationals: return a.as_rat() != 0;
        case RingKind::Modular: return boost::multiprecision::gcd(a.as_mod().r, modulus_) == 1;
        case RingKind::Dual: return a.as_dual().a != 0;
        case RingKind::Polynomial: {
            // Unit constant term; all higher terms nilpotent (exact over any
            // commutative base; reduces to "constant unit" over a domain).
            const auto& terms = a.as_poly().terms;
            if (terms.empty()) return false;
            bool const_unit = false;
            for (const auto& t : terms) {
                bool constant = std::all_of(t.exp.begin(), t.exp.end(), [](std::uint32_t e) { return e == 0; });
                if (constant) {
                    const_unit = base_->is_unit(t.coeff);
                } else if (!is_nilpotent_impl(*base_, t.coeff)) {
                    return false;
                }
            }
            return const_unit;
        }
    }
    return false;
}

Elem Ring::inv(const Elem& a) const {
    if (!is_unit(a)) throw NonInvertibleError(print(a));
    switch (kind_) {
        case RingKind::Integers: return a;  // 1 or -1
        case RingKind::Rationals: return Elem(this, Rat(Rat(1) / a.as_rat()));
        case RingKind::Modular: {
            // Extended gcd against the modulus.
            Int r0 = modulus_, r1 = a.as_mod().r, s0 = 0, s1 = 1;
            while (r1 != 0) {
                Int q = r0 / r1;
                Int r2 = r0 - q * r1;
                Int s2 = s0 - q * s1;
                r0 = r1; r1 = r2;
                s0 = s1; s1 = s2;
            }
            return Elem(this, ModVal{normalize_mod(s0, modulus_)});
        }
        case RingKind::Dual: {
            const auto& x = a.as_dual();
            std::uint64_t ia = inv_mod_u64(x.a, prime_);
            // (a + b d)^-1 = a^-1 - a^-2 b d
            std::uint64_t nb = mulmod_u64(mulmod_u64(ia, ia, prime_), x.b ? prime_ - x.b : 0, prime_);
            return Elem(this, DualVal{ia, nb});
        }
        case RingKind::Polynomial: {
            // Invert c0 (1 + n) with n nilpotent via the finite geometric series.
            std::vector<std::uint32_t> zero_exp(vars_.size(), 0);
            Elem c0 = poly_coefficient(Elem(this, a.v_), zero_exp);
            Elem c0inv = lift(base_->inv(c0));
            Elem u = mul(a, c0inv);            // 1 + n
            Elem n = sub(u, one());
            Elem acc = one();
            Elem term = one();
            while (!is_zero(n)) {
                term = mul(term, neg(n));
                if (is_zero(term)) break;
                acc = add(acc, term);
                if (poly_total_degree(term) > 512) throw NonInvertibleError(print(a));
            }
            // acc = (1+n)^-1 when n is nilpotent
            Elem res = mul(acc, c0inv);
            if (!is_one(mul(res, a))) throw NonInvertibleError(print(a));
            return res;
        }
    }
    throw NonInvertibleError(print(a));
}

Elem Ring::pow(const Elem& a, std::uint64_t e) const {
    Elem r = one();
    Elem b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

Elem Ring::exact_div(const Elem& a, const Elem& b) const {
    if (is_zero(b)) throw RingError("exact division by zero");
    switch (kind_) {
        case RingKind::Integers: {
            Int q, r;
            boost::multiprecision::divide_qr(a.as_int(), b.as_int(), q, r);
            if (r != 0) throw RingError("inexact integer division");
            return Elem(this, q);
        }
        case RingKind::Rationals: return Elem(this, Rat(a.as_rat() / b.as_rat()));
        case RingKind::Modular: {
            if (!is_field()) throw RingError("exact division in Z/k requires prime k");
            return mul(a, inv(b));
        }
        case RingKind::Dual: throw RingError("dual numbers are not a domain");
        case RingKind::Polynomial: {
            // Leading-term division; exact or throws.
            if (is_zero(a)) return zero();
            Elem rem = a;
            std::vector<PolyTerm> quot;
            const PolyTerm& lb = b.as_poly().terms.front();
            while (!is_zero(rem)) {
                const PolyTerm& lr = rem.as_poly().terms.front();
                PolyTerm t;
                t.exp.resize(vars_.size());
                for (std::size_t v = 0; v < vars_.size(); ++v) {
                    if (lr.exp[v] < lb.exp[v]) throw RingError("inexact polynomial division");
                    t.exp[v] = lr.exp[v] - lb.exp[v];
                }
                t.coeff = base_->exact_div(lr.coeff, lb.coeff);
                PolyVal tp;
                tp.terms.push_back(t);
                rem = sub(rem, mul(Elem(this, std::move(tp)), b));
                quot.push_back(std::move(t));
            }
            return Elem(this, normalize_terms(*base_, std::move(quot)));
        }
    }
    throw RingError("exact_div unsupported");
}

// ---------------------------------------------------------------------------
// Polynomial helpers
// ---------------------------------------------------------------------------

const std::vector<PolyTerm>& poly_terms(const Elem& poly) {
    return poly.as_poly().terms;
}

Elem poly_from_terms(const Ring& ring, std::vector<PolyTerm> terms) {
    if (ring.kind() != RingKind::Polynomial) throw UnsupportedRingError("poly_from_terms on non-polynomial ring");
    return Elem(&ring, normalize_terms(ring.base(), std::move(terms)));
}

long poly_total_degree(const Elem& poly) {
    const auto& terms = poly.as_poly().terms;
    if (terms.empty()) return -1;
    long best = 0;
    for (const auto& t : terms) {
        long d = 0;
        for (auto e : t.exp) d += e;
        best = std::max(best, d);
    }
    return best;
}

Elem poly_coefficient(const Elem& poly, const std::vector<std::uint32_t>& exp) {
    const Ring& base = poly.ring().base();
    for (const auto& t : poly.as_poly().terms)
        if (t.exp == exp) return t.coeff;
    return base.zero();
}

Elem poly_derivative(const Elem& poly, std::size_t i) {
    const Ring& ring = poly.ring();
    const Ring& base = ring.base();
    std::vector<PolyTerm> out;
    for (const auto& t : poly.as_poly().terms) {
        if (t.exp[i] == 0) continue;
        PolyTerm d;
        d.exp = t.exp;
        d.exp[i] -= 1;
        d.coeff = base.mul(t.coeff, base.from_int(t.exp[i]));
        out.push_back(std::move(d));
    }
    return poly_from_terms(ring, std::move(out));
}

Elem substitute_linear_forms(const Elem& poly, const std::vector<std::vector<Elem>>& rows) {
    const Ring& ring = poly.ring();
    if (ring.kind() != RingKind::Polynomial) throw UnsupportedRingError("substitution needs a polynomial ring");
    const std::size_t nv = ring.nvars();
    if (rows.size() != nv) throw RingError("substitution row count does not match variable count");

    // Materialize each replacement linear form lazily.
    std::vector<Elem> linear(nv);
    std::vector<bool> built(nv, false);
    auto form_for = [&](std::size_t i) -> const Elem& {
        if (!built[i]) {
            if (rows[i].size() != nv) throw RingError("substitution row length does not match variable count");
            std::vector<PolyTerm> terms;
            for (std::size_t j = 0; j < nv; ++j) {
                if (ring.base().is_zero(rows[i][j])) continue;
                PolyTerm t;
                t.exp.assign(nv, 0);
                t.exp[j] = 1;
                t.coeff = rows[i][j];
                terms.push_back(std::move(t));
            }
            linear[i] = poly_from_terms(ring, std::move(terms));
            built[i] = true;
        }
        return linear[i];
    };

    Elem acc = ring.zero();
    for (const auto& t : poly.as_poly().terms) {
        Elem term = ring.lift(t.coeff);
        for (std::size_t v = 0; v < nv; ++v) {
            for (std::uint32_t e = 0; e < t.exp[v]; ++e) term = ring.mul(term, form_for(v));
        }
        acc = ring.add(acc, term);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

bool needs_parens(const std::string& s) {
    if (s.empty()) return true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '+' || c == '*' || c == '/' || c == '^' || (c == '-' && i > 0)) return true;
    }
    return false;
}

}  // namespace

std::string Ring::print(const Elem& a) const {
    switch (kind_) {
        case RingKind::Integers: return a.as_int().str();
        case RingKind::Rationals: {
            const Rat& r = a.as_rat();
            Int num = boost::multiprecision::numerator(r);
            Int den = boost::multiprecision::denominator(r);
            if (den == 1) return num.str();
            return num.str() + "/" + den.str();
        }
        case RingKind::Modular: return a.as_mod().r.str();
        case RingKind::Dual: {
            const auto& x = a.as_dual();
            if (x.b == 0) return std::to_string(x.a);
            std::string d = (x.b == 1 ? "d" : std::to_string(x.b) + "*d");
            if (x.a == 0) return d;
            return std::to_string(x.a) + "+" + d;
        }
        case RingKind::Polynomial: {
            const auto& terms = a.as_poly().terms;
            if (terms.empty()) return "0";
            std::string out;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const auto& t = terms[i];
                std::string coeff = base_->print(t.coeff);
                bool negative = !coeff.empty() && coeff[0] == '-' && !needs_parens(coeff.substr(1));
                std::string mag = negative ? coeff.substr(1) : coeff;
                std::string mono;
                for (std::size_t v = 0; v < vars_.size(); ++v) {
                    if (t.exp[v] == 0) continue;
                    if (!mono.empty()) mono += "*";
                    mono += vars_[v];
                    if (t.exp[v] > 1) mono += "^" + std::to_string(t.exp[v]);
                }
                std::string body;
                if (mono.empty()) {
                    body = needs_parens(mag) ? "(" + mag + ")" : mag;
                } else if (mag == "1") {
                    body = mono;
                } else {
                    body = (needs_parens(mag) ? "(" + mag + ")" : mag) + "*" + mono;
                }
                if (i == 0) {
                    out += negative ? "-" + body : body;
                } else {
                    out += negative ? " - " + body : " + " + body;
                }
            }
            return out;
        }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Element parsing (inverse of print for every ring kind)
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
    std::string_view s;
    std::size_t pos = 0;
    void skip_ws() { while (pos < s.size() && s[pos] == ' ') ++pos; }
    bool done() { skip_ws(); return pos >= s.size(); }
    char peek() { skip_ws(); return pos < s.size() ? s[pos] : '\0'; }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    std::string take_uint() {
        skip_ws();
        std::string out;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) out += s[pos++];
        if (out.empty()) throw RingError("expected digits in element text: " + std::string(s));
        return out;
    }
    std::string take_name() {
        skip_ws();
        std::string out;
        if (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) {
            out += s[pos++];
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) out += s[pos++];
        }
        return out;
    }
};

Elem parse_poly_expr(const Ring& ring, Cursor& cur);

Elem parse_poly_factor(const Ring& ring, Cursor& cur) {
    const Ring& base = ring.base();
    Elem atom = ring.zero();
    if (cur.eat('(')) {
        // Parenthesized base-ring constant (or nested expression).
        std::size_t depth = 1;
        std::size_t start = cur.pos;
        while (cur.pos < cur.s.size() && depth > 0) {
            if (cur.s[cur.pos] == '(') ++depth;
            if (cur.s[cur.pos] == ')') --depth;
            ++cur.pos;
        }
        if (depth != 0) throw RingError("unbalanced parentheses: " + std::string(cur.s));
        std::string inner(cur.s.substr(start, cur.pos - 1 - start));
        atom = ring.lift(base.parse_elem(inner));
    } else if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        std::string digits = cur.take_uint();
        // Rational constant "3/4" allowed when the base understands it.
        if (cur.peek() == '/' && base.kind() == RingKind::Rationals) {
            cur.eat('/');
            std::string den = cur.take_uint();
            atom = ring.lift(base.parse_elem(digits + "/" + den));
        } else {
            atom = ring.from_Int(Int(digits));
        }
    } else {
        std::string name = cur.take_name();
        if (name.empty()) throw RingError("bad polynomial text: " + std::string(cur.s));
        const auto& vars = ring.vars();
        auto it = std::find(vars.begin(), vars.end(), name);
        if (it == vars.end()) throw RingError("unknown variable '" + name + "' in " + ring.token());
        atom = ring.var(static_cast<std::size_t>(it - vars.begin()));
    }
    if (cur.eat('^')) {
        std::string e = cur.take_uint();
        atom = ring.pow(atom, Int(e).convert_to<std::uint64_t>());
    }
    return atom;
}

Elem parse_poly_term(const Ring& ring, Cursor& cur) {
    Elem t = parse_poly_factor(ring, cur);
    while (cur.eat('*')) t = ring.mul(t, parse_poly_factor(ring, cur));
    return t;
}

Elem parse_poly_expr(const Ring& ring, Cursor& cur) {
    bool neg = false;
    if (cur.eat('-')) neg = true;
    else cur.eat('+');
    Elem acc = parse_poly_term(ring, cur);
    if (neg) acc = ring.neg(acc);
    while (true) {
        char c = cur.peek();
        if (c == '+' || c == '-') {
            cur.eat(c);
            Elem t = parse_poly_term(ring, cur);
            acc = c == '-' ? ring.sub(acc, t) : ring.add(acc, t);
        } else {
            break;
        }
    }
    return acc;
}

}  // namespace

Elem Ring::parse_elem(std::string_view text) const {
    Cursor cur{text};
    switch (kind_) {
        case RingKind::Integers: {
            bool neg = cur.eat('-');
            Int v(cur.take_uint());
            if (!cur.done()) throw RingError("trailing text in integer: " + std::string(text));
            return Elem(this, neg ? Int(-v) : v);
        }
        case RingKind::Rationals: {
            bool neg = cur.eat('-');
            Int num(cur.take_uint());
            Int den = 1;
            if (cur.eat('/')) den = Int(cur.take_uint());
            if (!cur.done()) throw RingError("trailing text in rational: " + std::string(text));
            Rat r(num, den);
            return Elem(this, neg ? Rat(-r) : r);
        }
        case RingKind::Modular: {
            bool neg = cur.eat('-');
            Int v(cur.take_uint());
            if (!cur.done()) throw RingError("trailing text in residue: " + std::string(text));
            return from_Int(neg ? Int(-v) : v);
        }
        case RingKind::Dual: {
            std::uint64_t a = 0, b = 0;
            bool first = true;
            while (!cur.done()) {
                bool neg = cur.eat('-');
                if (!neg && !first) {
                    if (!cur.eat('+')) throw RingError("bad dual-number text: " + std::string(text));
                }
                first = false;
                std::uint64_t mag = 1;
                bool have_mag = false;
                if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
                    mag = Int(cur.take_uint()).convert_to<std::uint64_t>() % prime_;
                    have_mag = true;
                }
                bool is_d = false;
                if (cur.peek() == '*' || cur.peek() == 'd') {
                    cur.eat('*');
                    std::string name = cur.take_name();
                    if (name != "d") throw RingError("bad dual-number text: " + std::string(text));
                    is_d = true;
                } else if (!have_mag) {
                    throw RingError("bad dual-number text: " + std::string(text));
                }
                std::uint64_t val = neg ? (prime_ - mag % prime_) % prime_ : mag % prime_;
                if (is_d) b = (b + val) % prime_;
                else a = (a + val) % prime_;
            }
            return Elem(this, DualVal{a, b});
        }
        case RingKind::Polynomial: {
            Elem v = parse_poly_expr(*this, cur);
            if (!cur.done()) throw RingError("trailing text in polynomial: " + std::string(text));
            return v;
        }
    }
    throw RingError("parse_elem unsupported");
}

}  // namespace extpow
