#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace extpow {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

class Ring;
class Elem;

struct RingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when inverting a non-unit; carries the printed element.
struct NonInvertibleError : RingError {
    explicit NonInvertibleError(std::string elem)
        : RingError("non-invertible element: " + elem), element(std::move(elem)) {}
    std::string element;
};

struct UnsupportedRingError : RingError {
    using RingError::RingError;
};

enum class RingKind { Integers, Rationals, Modular, Dual, Polynomial };

// Payload alternatives.  All values are kept in canonical form: fractions
// reduced (cpp_rational does this), residues in [0, modulus), dual parts
// reduced mod p, polynomial terms sorted with zero coefficients dropped.
struct ModVal {
    Int r;
    bool operator==(const ModVal&) const = default;
};

struct DualVal {
    std::uint64_t a = 0;  // constant part
    std::uint64_t b = 0;  // delta part
    bool operator==(const DualVal&) const = default;
};

struct PolyTerm;

struct PolyVal {
    // Terms sorted descending in graded-lex order on exponent vectors,
    // coefficients nonzero.
    std::vector<PolyTerm> terms;
    bool operator==(const PolyVal&) const;
};

class Elem {
public:
    Elem() = default;
    Elem(const Ring* ring, std::variant<std::monostate, Int, Rat, ModVal, DualVal, PolyVal> v);

    const Ring& ring() const { return *ring_; }
    const Ring* ring_ptr() const { return ring_; }

    bool operator==(const Elem& o) const;
    bool operator!=(const Elem& o) const { return !(*this == o); }

    const Int& as_int() const { return std::get<Int>(v_); }
    const Rat& as_rat() const { return std::get<Rat>(v_); }
    const ModVal& as_mod() const { return std::get<ModVal>(v_); }
    const DualVal& as_dual() const { return std::get<DualVal>(v_); }
    const PolyVal& as_poly() const { return std::get<PolyVal>(v_); }

private:
    const Ring* ring_ = nullptr;

public:
    std::variant<std::monostate, Int, Rat, ModVal, DualVal, PolyVal> v_;
};

struct PolyTerm {
    std::vector<std::uint32_t> exp;  // one exponent per ring variable
    Elem coeff;                      // element of the base ring, nonzero
};

// A commutative ring chosen at runtime.  Instances are interned: descriptors
// with the same token share one immutable object whose address is stable for
// the lifetime of the process, so elements may hold plain pointers.
class Ring {
public:
    static const Ring& integers();
    static const Ring& rationals();
    static const Ring& modular(const Int& modulus);          // Z/k, k >= 2
    static const Ring& dual_numbers(std::uint64_t p);        // F_p[d], d^2 = 0, p prime
    static const Ring& polynomial(const Ring& base, std::vector<std::string> vars);

    // Text tokens: Z | Q | Z/6 | F5 (alias of Z/5, prime only) | F5[d] |
    // poly(<base>; v1,v2,...)
    static const Ring& parse(std::string_view token);
    const std::string& token() const { return token_; }

    RingKind kind() const { return kind_; }
    const Int& modulus() const { return modulus_; }          // Modular
    std::uint64_t prime() const { return prime_; }           // Dual
    const Ring& base() const { return *base_; }              // Polynomial
    const std::vector<std::string>& vars() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }

    bool is_field() const;   // Q, or Z/p with p prime
    bool is_domain() const;  // Z, Q, Z/p prime, polynomials over a domain
    // Characteristic as an Int (0 for Z, Q and polynomial rings over them).
    Int characteristic() const;

    Elem zero() const;
    Elem one() const;
    Elem from_int(long long v) const;
    Elem from_Int(const Int& v) const;
    Elem var(std::size_t i) const;  // Polynomial rings: the i-th variable

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem inv(const Elem& a) const;  // throws NonInvertibleError
    Elem pow(const Elem& a, std::uint64_t e) const;

    bool is_zero(const Elem& a) const;
    bool is_one(const Elem& a) const;
    bool is_unit(const Elem& a) const;

    // Exact division in a domain; throws RingError when b does not divide a.
    Elem exact_div(const Elem& a, const Elem& b) const;

    std::string print(const Elem& a) const;
    Elem parse_elem(std::string_view text) const;

    // Lift an element of the base ring into this polynomial ring as a
    // constant; identity on non-polynomial rings when a already lives here.
    Elem lift(const Elem& a) const;

    // Dual-number helpers: a + b*d from base residues.
    Elem dual_from_parts(std::uint64_t a, std::uint64_t b) const;

    Ring(const Ring&) = delete;
    Ring& operator=(const Ring&) = delete;

private:
    Ring() = default;
    Ring(Ring&&) = default;
    static const Ring& intern(Ring&& draft);
    void check_same(const Elem& a, const Elem& b) const;

    RingKind kind_ = RingKind::Integers;
    Int modulus_;
    std::uint64_t prime_ = 0;
    const Ring* base_ = nullptr;
    std::vector<std::string> vars_;
    std::string token_;
};

// Element-level operators for ergonomic call sites; both operands must share
// one ring.
inline Elem operator+(const Elem& a, const Elem& b) { return a.ring().add(a, b); }
inline Elem operator-(const Elem& a, const Elem& b) { return a.ring().sub(a, b); }
inline Elem operator*(const Elem& a, const Elem& b) { return a.ring().mul(a, b); }
inline Elem operator-(const Elem& a) { return a.ring().neg(a); }

bool is_prime_u64(std::uint64_t n);
bool is_prime_Int(const Int& n);

// Multivariate polynomial utilities used by the substitution machinery.
// `rows[i]` holds the coefficients (in the base ring) of the linear form that
// replaces variable i; it must have one entry per ring variable.
Elem substitute_linear_forms(const Elem& poly, const std::vector<std::vector<Elem>>& rows);

// Total degree of a polynomial element (0 for constants, -1 for zero).
long poly_total_degree(const Elem& poly);

// Coefficient of the given exponent vector (zero element when absent).
Elem poly_coefficient(const Elem& poly, const std::vector<std::uint32_t>& exp);

// All (exponent, coefficient) pairs of a polynomial element.
const std::vector<PolyTerm>& poly_terms(const Elem& poly);

// Build a polynomial from terms (need not be sorted; duplicates combine).
Elem poly_from_terms(const Ring& ring, std::vector<PolyTerm> terms);

// Partial derivative with respect to variable i.
Elem poly_derivative(const Elem& poly, std::size_t i);

}  // namespace extpow
