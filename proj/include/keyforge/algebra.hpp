#ifndef KEYFORGE_ALGEBRA_HPP
#define KEYFORGE_ALGEBRA_HPP

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "keyforge/finite_field.hpp"
#include "keyforge/ordgroup.hpp"
#include "keyforge/rational.hpp"

namespace keyforge {

struct Field;
using FieldPtr = std::shared_ptr<const Field>;

// Reduced fraction of dense t-polynomials over QQ (den monic, nonzero).
struct QRatFunc {
    std::vector<Rat> num, den;
};

// Reduced fraction of dense t-polynomials over a finite field.
struct FRatFunc {
    RFPtr k;
    std::vector<RElem> num, den;
};

// Element of the session base field.
class Elem {
public:
    Elem() = default;
    Elem(FieldPtr F, std::variant<Rat, RElem, QRatFunc, FRatFunc> v);

    const FieldPtr& field() const { return F_; }
    bool valid() const { return F_ != nullptr; }
    bool is_zero() const;
    bool is_one() const;

    Elem operator+(const Elem& o) const;
    Elem operator-(const Elem& o) const;
    Elem operator*(const Elem& o) const;
    Elem operator/(const Elem& o) const;
    Elem operator-() const;
    bool operator==(const Elem& o) const;
    bool operator!=(const Elem& o) const { return !(*this == o); }
    Elem inverse() const;
    Elem pow(long e) const;

    const Rat& as_rat() const;
    const RElem& as_ff() const;
    const QRatFunc& as_qrf() const;
    const FRatFunc& as_frf() const;

    std::string to_string() const; // grammar-compatible where possible

private:
    FieldPtr F_;
    std::variant<Rat, RElem, QRatFunc, FRatFunc> v_;
};

// Base coefficient field of a session: QQ, F_q, QQ(t) or F_q(t).
struct Field : std::enable_shared_from_this<Field> {
    enum class Kind { Rationals, Finite, RatFuncQ, RatFuncF };

    Kind kind = Kind::Rationals;
    RFPtr fq;       // Finite: the field itself; RatFuncF: the coefficient field
    char var = 't'; // rational-function variable symbol

    static FieldPtr rationals();
    // modulus over F_p, low first; {c0,...,1} monic, verified irreducible.
    // A modulus of degree 1 gives F_p itself.
    static FieldPtr finite(long p, const std::vector<long>& modulus);
    static FieldPtr finite_prime(long p);
    static FieldPtr rational_functions_q(char var = 't');
    static FieldPtr rational_functions_f(RFPtr coeff, char var = 't');

    long characteristic() const;
    bool same(const Field& o) const;

    Elem zero() const;
    Elem one() const;
    Elem from_int(long n) const;
    Elem from_bigint(const Int& n) const;
    Elem from_rat(const Rat& r) const; // Rationals / RatFuncQ only
    Elem from_ff(const RElem& a) const;
    Elem t() const; // the variable, RatFunc kinds only
    std::string describe() const;
};

// Dense univariate polynomial over the base field, in the indeterminate x.
class Poly {
public:
    Poly() = default;
    explicit Poly(FieldPtr F) : F_(std::move(F)) {}
    Poly(FieldPtr F, std::vector<Elem> coeffs);
    static Poly x(const FieldPtr& F);
    static Poly constant(const Elem& c);
    static Poly from_ints(const FieldPtr& F, const std::vector<long>& coeffs);

    bool valid() const { return F_ != nullptr; }
    const FieldPtr& field() const { return F_; }
    int deg() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    bool is_monic() const;
    const Elem& leading() const;
    Elem at(int i) const;
    const std::vector<Elem>& coeffs() const { return c_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly scaled(const Elem& s) const;
    Poly pow(long e) const;
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    FieldPtr F_;
    std::vector<Elem> c_;
};

// Division with remainder: f = q*g + r, deg r < deg g. g must be nonzero.
void divrem(const Poly& f, const Poly& g, Poly& q, Poly& r);

// Canonical Q-expansion f = sum digits[s] * Q^s with deg(digits[s]) < deg Q.
struct QExpansion {
    Poly base;
    std::vector<Poly> digits;
    Poly reconstruct() const;
};
QExpansion q_expansion(const Poly& f, const Poly& Q);

// b-th Hasse derivative (Taylor coefficient operator); b >= 0, 0 = identity.
// Binomial coefficients are formed by the Pascal recurrence inside the field.
Poly hasse_derivative(const Poly& f, long b);

// Least b >= 1 with hasse_derivative(f,b) != 0; a p-power in characteristic p.
long multiplicity(const Poly& f);

struct ExtGcd {
    Poly g, s, t; // g monic, g = s*a + t*b
};
ExtGcd ext_gcd(const Poly& a, const Poly& b);

// Valuation on the base field with its embedding into the ambient group.
struct BaseValuation {
    enum class Kind { PAdic, TAdic, Trivial };

    Kind kind = Kind::Trivial;
    long p = 0;
    FieldPtr field;
    GroupDescriptor group;
    int coord = 1; // 1-based embedding coordinate of v(K*)

    static BaseValuation padic(FieldPtr f, long p, GroupDescriptor g, int coord = 1);
    static BaseValuation tadic(FieldPtr f, GroupDescriptor g, int coord = 1);
    static BaseValuation trivial(FieldPtr f, GroupDescriptor g);

    ExtValue value(const Elem& a) const; // inf iff a == 0
    long value_int(const Elem& a) const; // integer valuation of a nonzero element
    bool residue_finite() const;
    RFPtr residue_field() const;
    RElem residue_of_unit(const Elem& a) const; // requires value(a) == 0
    bool has_uniformizer() const { return kind != Kind::Trivial; }
    Elem uniformizer() const;
    bool same(const BaseValuation& o) const;
    std::string describe() const;
};

inline ExtValue base_value(const BaseValuation& v, const Elem& a) { return v.value(a); }

} // namespace keyforge

#endif
