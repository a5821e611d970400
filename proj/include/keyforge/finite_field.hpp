#ifndef KEYFORGE_FINITE_FIELD_HPP
#define KEYFORGE_FINITE_FIELD_HPP

#include <memory>
#include <string>
#include <vector>

#include "keyforge/rational.hpp"

namespace keyforge {

class RFCtx;
using RFPtr = std::shared_ptr<const RFCtx>;

// Element of a finite field represented as a tower of extensions over F_p.
// Prime-field elements hold a residue; extension elements hold coefficient
// vectors (low degree first, trimmed) over the base of their context.
class RElem {
public:
    RElem() = default;
    RElem(RFPtr k, long prime_residue);                 // prime-field element
    RElem(RFPtr k, std::vector<RElem> ext_coeffs);      // extension element

    const RFPtr& field() const { return k_; }
    bool valid() const { return k_ != nullptr; }
    bool is_zero() const;
    bool is_one() const;

    RElem operator+(const RElem& o) const;
    RElem operator-(const RElem& o) const;
    RElem operator*(const RElem& o) const;
    RElem operator-() const;
    bool operator==(const RElem& o) const;
    bool operator!=(const RElem& o) const { return !(*this == o); }
    RElem inverse() const;
    RElem pow(const Int& e) const;

    long prime_residue() const { return v_; }
    const std::vector<RElem>& ext_coeffs() const { return c_; }

    std::string to_string() const;

private:
    friend class RFCtx;
    RFPtr k_;
    long v_ = 0;
    std::vector<RElem> c_;
};

// Finite-field context: either the prime field F_p or an extension of a
// smaller context by a monic irreducible polynomial.
class RFCtx : public std::enable_shared_from_this<RFCtx> {
public:
    static RFPtr prime_field(long p);
    // modulus: monic over `base`, degree >= 1, low first.
    // When check is set, irreducibility over `base` is verified.
    static RFPtr extension(RFPtr base, const std::vector<RElem>& modulus, bool check = true);

    long characteristic() const { return p_; }
    bool is_prime() const { return base_ == nullptr; }
    const RFPtr& base() const { return base_; }
    int ext_degree() const { return ext_deg_; }
    int degree_over_prime() const;
    Int size() const;
    const std::vector<RElem>& modulus() const { return mod_; }

    RElem zero() const;
    RElem one() const;
    RElem from_int(const Int& n) const;
    RElem from_int(long n) const { return from_int(Int(n)); }
    RElem generator() const; // class of y in an extension

    std::string describe() const; // "F_4 = F_2[g]/(...)" style

private:
    RFCtx() = default;
    long p_ = 0;
    RFPtr base_;
    std::vector<RElem> mod_;
    int ext_deg_ = 1;
};

// Walks `target`'s base chain to lift a into it (identity when contexts match).
RElem embed_into(const RElem& a, const RFPtr& target);
bool same_ctx(const RFPtr& a, const RFPtr& b);

// Dense univariate polynomials over a finite-field context, for residual
// polynomials and extension moduli. Coefficients low first, trimmed.
struct RPoly {
    RFPtr k;
    std::vector<RElem> c;

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    RElem at(int i) const;
    std::string to_string(const std::string& var = "y") const;
    bool operator==(const RPoly& o) const;
    bool operator!=(const RPoly& o) const { return !(*this == o); }
};

RPoly rp_make(RFPtr k, std::vector<RElem> coeffs);
RPoly rp_zero(RFPtr k);
RPoly rp_one(RFPtr k);
RPoly rp_y(RFPtr k);
RPoly rp_add(const RPoly& a, const RPoly& b);
RPoly rp_sub(const RPoly& a, const RPoly& b);
RPoly rp_mul(const RPoly& a, const RPoly& b);
RPoly rp_scale(const RPoly& a, const RElem& s);
// Division with remainder; the divisor's leading coefficient must be invertible.
void rp_divrem(const RPoly& a, const RPoly& b, RPoly& q, RPoly& r);
RPoly rp_mod(const RPoly& a, const RPoly& b);
RPoly rp_gcd(RPoly a, RPoly b); // monic
RPoly rp_powmod(const RPoly& base, const Int& e, const RPoly& mod);
RElem rp_eval(const RPoly& f, const RElem& x);
RPoly rp_pow(const RPoly& base, long e);
bool rp_irreducible(const RPoly& f);

// All elements of a small field (throws when the field is larger than cap).
std::vector<RElem> all_elements(const RFPtr& k, long cap = 4096);

} // namespace keyforge

#endif
