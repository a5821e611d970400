#ifndef KEYFORGE_RATIONAL_HPP
#define KEYFORGE_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "keyforge/errors.hpp"

namespace keyforge {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat_of(long n) { return Rat(n); }

inline Rat rat_of(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// p-adic valuation of a nonzero rational.
inline long padic_val(const Rat& r, long p) {
    if (r == 0) throw DomainError("padic_val of zero");
    mpz_class num = r.get_num(), den = r.get_den(), tmp;
    mpz_class P(p);
    long vn = static_cast<long>(mpz_remove(tmp.get_mpz_t(), num.get_mpz_t(), P.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(tmp.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t()));
    return vn - vd;
}

} // namespace keyforge

#endif
