#include "keyforge/algebra.hpp"

#include <algorithm>
#include <cassert>

#include "keyforge/errors.hpp"

namespace keyforge {

// ------------------------------------------------------- t-poly helpers ----
// Shared dense-polynomial routines for the two rational-function coefficient
// types. A prototype coefficient supplies field context for zero/one.

namespace {

inline bool cz(const Rat& a) { return a == 0; }
inline bool cz(const RElem& a) { return a.is_zero(); }
inline Rat czero(const Rat&) { return Rat(0); }
inline RElem czero(const RElem& proto) { return proto.field()->zero(); }
inline Rat cone(const Rat&) { return Rat(1); }
inline RElem cone(const RElem& proto) { return proto.field()->one(); }
inline Rat cinv(const Rat& a) {
    if (a == 0) throw DomainError("inverse of zero");
    Rat r = Rat(1) / a;
    r.canonicalize();
    return r;
}
inline RElem cinv(const RElem& a) { return a.inverse(); }
inline bool ceq(const Rat& a, const Rat& b) { return a == b; }
inline bool ceq(const RElem& a, const RElem& b) { return a == b; }

template <class C>
void tv_trim(std::vector<C>& v) {
    while (!v.empty() && cz(v.back())) v.pop_back();
}

template <class C>
int tv_deg(const std::vector<C>& v) {
    return static_cast<int>(v.size()) - 1;
}

template <class C>
std::vector<C> tv_add(const std::vector<C>& a, const std::vector<C>& b, const C& proto) {
    std::vector<C> out(std::max(a.size(), b.size()), czero(proto));
    for (size_t i = 0; i < a.size(); ++i) out[i] = out[i] + a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] = out[i] + b[i];
    tv_trim(out);
    return out;
}

template <class C>
std::vector<C> tv_neg(const std::vector<C>& a) {
    std::vector<C> out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(-x);
    return out;
}

template <class C>
std::vector<C> tv_sub(const std::vector<C>& a, const std::vector<C>& b, const C& proto) {
    return tv_add(a, tv_neg(b), proto);
}

template <class C>
std::vector<C> tv_mul(const std::vector<C>& a, const std::vector<C>& b, const C& proto) {
    if (a.empty() || b.empty()) return {};
    std::vector<C> out(a.size() + b.size() - 1, czero(proto));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = out[i + j] + a[i] * b[j];
    tv_trim(out);
    return out;
}

template <class C>
void tv_divrem(const std::vector<C>& a, const std::vector<C>& b, std::vector<C>& q,
               std::vector<C>& r, const C& proto) {
    if (b.empty()) throw DomainError("division by the zero polynomial");
    C lead_inv = cinv(b.back());
    r = a;
    q.clear();
    int db = tv_deg(b);
    if (tv_deg(a) >= db) q.assign(a.size() - b.size() + 1, czero(proto));
    for (int i = tv_deg(r); i >= db; --i) {
        if (cz(r[i])) continue;
        C f = r[i] * lead_inv;
        q[i - db] = f;
        for (int j = 0; j <= db; ++j) r[i - db + j] = r[i - db + j] - f * b[j];
    }
    tv_trim(r);
    tv_trim(q);
}

template <class C>
std::vector<C> tv_gcd(std::vector<C> a, std::vector<C> b, const C& proto) {
    while (!b.empty()) {
        std::vector<C> q, r;
        tv_divrem(a, b, q, r, proto);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        C inv = cinv(a.back());
        for (auto& x : a) x = x * inv;
    }
    return a;
}

template <class C>
bool tv_eq(const std::vector<C>& a, const std::vector<C>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!ceq(a[i], b[i])) return false;
    return true;
}

template <class C>
long tv_ord(const std::vector<C>& a) {
    for (size_t i = 0; i < a.size(); ++i)
        if (!cz(a[i])) return static_cast<long>(i);
    throw DomainError("order of the zero polynomial");
}

// Normalize a fraction: reduce by the gcd and make the denominator monic.
template <class C>
void frac_reduce(std::vector<C>& num, std::vector<C>& den, const C& proto) {
    tv_trim(num);
    tv_trim(den);
    if (den.empty()) throw DomainError("zero denominator");
    if (num.empty()) {
        den = {cone(proto)};
        return;
    }
    std::vector<C> g = tv_gcd(num, den, proto);
    if (tv_deg(g) > 0) {
        std::vector<C> q, r;
        tv_divrem(num, g, q, r, proto);
        num = q;
        tv_divrem(den, g, q, r, proto);
        den = q;
    }
    C inv = cinv(den.back());
    for (auto& x : den) x = x * inv;
    for (auto& x : num) x = x * inv;
}

std::string rat_cs(const Rat& r) { return rat_str(r); }
std::string ff_cs(const RElem& r) { return r.to_string(); }

template <class C, class F>
std::string tv_to_string(const std::vector<C>& a, char var, F cs) {
    if (a.empty()) return "0";
    std::string s;
    for (int i = tv_deg(a); i >= 0; --i) {
        if (cz(a[i])) continue;
        std::string coef = cs(a[i]);
        std::string term;
        if (i == 0) {
            term = coef;
        } else {
            if (coef == "1")
                term = "";
            else if (coef == "-1")
                term = "-";
            else
                term = coef + "*";
            term += std::string(1, var);
            if (i > 1) term += "^" + std::to_string(i);
        }
        if (s.empty()) {
            s = term;
        } else if (!term.empty() && term[0] == '-') {
            s += " - " + term.substr(1);
        } else {
            s += " + " + term;
        }
    }
    return s.empty() ? "0" : s;
}

} // namespace

// --------------------------------------------------------------- Elem ------

Elem::Elem(FieldPtr F, std::variant<Rat, RElem, QRatFunc, FRatFunc> v)
    : F_(std::move(F)), v_(std::move(v)) {}

namespace {
void require_field(const Elem& a, const Elem& b) {
    if (!a.valid() || !b.valid()) throw DomainError("uninitialized field element");
    if (!a.field()->same(*b.field())) throw DescriptorError("elements from different fields");
}
} // namespace

bool Elem::is_zero() const {
    switch (F_->kind) {
        case Field::Kind::Rationals: return std::get<Rat>(v_) == 0;
        case Field::Kind::Finite: return std::get<RElem>(v_).is_zero();
        case Field::Kind::RatFuncQ: return std::get<QRatFunc>(v_).num.empty();
        default: return std::get<FRatFunc>(v_).num.empty();
    }
}

bool Elem::is_one() const { return *this == F_->one(); }

Elem Elem::operator+(const Elem& o) const {
    require_field(*this, o);
    switch (F_->kind) {
        case Field::Kind::Rationals: {
            Rat r = std::get<Rat>(v_) + std::get<Rat>(o.v_);
            r.canonicalize();
            return Elem(F_, r);
        }
        case Field::Kind::Finite:
            return Elem(F_, std::get<RElem>(v_) + std::get<RElem>(o.v_));
        case Field::Kind::RatFuncQ: {
            const auto& a = std::get<QRatFunc>(v_);
            const auto& b = std::get<QRatFunc>(o.v_);
            Rat proto(0);
            QRatFunc out;
            out.num = tv_add(tv_mul(a.num, b.den, proto), tv_mul(b.num, a.den, proto), proto);
            out.den = tv_mul(a.den, b.den, proto);
            frac_reduce(out.num, out.den, proto);
            return Elem(F_, std::move(out));
        }
        default: {
            const auto& a = std::get<FRatFunc>(v_);
            const auto& b = std::get<FRatFunc>(o.v_);
            RElem proto = a.k->zero();
            FRatFunc out;
            out.k = a.k;
            out.num = tv_add(tv_mul(a.num, b.den, proto), tv_mul(b.num, a.den, proto), proto);
            out.den = tv_mul(a.den, b.den, proto);
            frac_reduce(out.num, out.den, proto);
            return Elem(F_, std::move(out));
        }
    }
}

Elem Elem::operator-() const {
    switch (F_->kind) {
        case Field::Kind::Rationals: return Elem(F_, Rat(-std::get<Rat>(v_)));
        case Field::Kind::Finite: return Elem(F_, -std::get<RElem>(v_));
        case Field::Kind::RatFuncQ: {
            QRatFunc out = std::get<QRatFunc>(v_);
            out.num = tv_neg(out.num);
            return Elem(F_, std::move(out));
        }
        default: {
            FRatFunc out = std::get<FRatFunc>(v_);
            out.num = tv_neg(out.num);
            return Elem(F_, std::move(out));
        }
    }
}

Elem Elem::operator-(const Elem& o) const { return *this + (-o); }

Elem Elem::operator*(const Elem& o) const {
    require_field(*this, o);
    switch (F_->kind) {
        case Field::Kind::Rationals: {
            Rat r = std::get<Rat>(v_) * std::get<Rat>(o.v_);
            r.canonicalize();
            return Elem(F_, r);
        }
        case Field::Kind::Finite:
            return Elem(F_, std::get<RElem>(v_) * std::get<RElem>(o.v_));
        case Field::Kind::RatFuncQ: {
            const auto& a = std::get<QRatFunc>(v_);
            const auto& b = std::get<QRatFunc>(o.v_);
            Rat proto(0);
            QRatFunc out;
            out.num = tv_mul(a.num, b.num, proto);
            out.den = tv_mul(a.den, b.den, proto);
            frac_reduce(out.num, out.den, proto);
            return Elem(F_, std::move(out));
        }
        default: {
            const auto& a = std::get<FRatFunc>(v_);
            const auto& b = std::get<FRatFunc>(o.v_);
            RElem proto = a.k->zero();
            FRatFunc out;
            out.k = a.k;
            out.num = tv_mul(a.num, b.num, proto);
            out.den = tv_mul(a.den, b.den, proto);
            frac_reduce(out.num, out.den, proto);
            return Elem(F_, std::move(out));
        }
    }
}

Elem Elem::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero");
    switch (F_->kind) {
        case Field::Kind::Rationals: {
            Rat r = Rat(1) / std::get<Rat>(v_);
            r.canonicalize();
            return Elem(F_, r);
        }
        case Field::Kind::Finite: return Elem(F_, std::get<RElem>(v_).inverse());
        case Field::Kind::RatFuncQ: {
            const auto& a = std::get<QRatFunc>(v_);
            QRatFunc out{a.den, a.num};
            Rat proto(0);
            frac_reduce(out.num, out.den, proto);
            return Elem(F_, std::move(out));
        }
        default: {
            const auto& a = std::get<FRatFunc>(v_);
            FRatFunc out{a.k, a.den, a.num};
            RElem proto = a.k->zero();
            frac_reduce(out.num, out.den, proto);
            return Elem(F_, std::move(out));
        }
    }
}

Elem Elem::operator/(const Elem& o) const { return *this * o.inverse(); }

Elem Elem::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Elem result = F_->one();
    Elem b = *this;
    while (e > 0) {
        if (e & 1) result = result * b;
        b = b * b;
        e >>= 1;
    }
    return result;
}

bool Elem::operator==(const Elem& o) const {
    require_field(*this, o);
    switch (F_->kind) {
        case Field::Kind::Rationals: return std::get<Rat>(v_) == std::get<Rat>(o.v_);
        case Field::Kind::Finite: return std::get<RElem>(v_) == std::get<RElem>(o.v_);
        case Field::Kind::RatFuncQ: {
            const auto& a = std::get<QRatFunc>(v_);
            const auto& b = std::get<QRatFunc>(o.v_);
            return tv_eq(a.num, b.num) && tv_eq(a.den, b.den);
        }
        default: {
            const auto& a = std::get<FRatFunc>(v_);
            const auto& b = std::get<FRatFunc>(o.v_);
            return tv_eq(a.num, b.num) && tv_eq(a.den, b.den);
        }
    }
}

const Rat& Elem::as_rat() const { return std::get<Rat>(v_); }
const RElem& Elem::as_ff() const { return std::get<RElem>(v_); }
const QRatFunc& Elem::as_qrf() const { return std::get<QRatFunc>(v_); }
const FRatFunc& Elem::as_frf() const { return std::get<FRatFunc>(v_); }

std::string Elem::to_string() const {
    switch (F_->kind) {
        case Field::Kind::Rationals: return rat_str(std::get<Rat>(v_));
        case Field::Kind::Finite: return std::get<RElem>(v_).to_string();
        case Field::Kind::RatFuncQ: {
            const auto& a = std::get<QRatFunc>(v_);
            std::string n = tv_to_string(a.num, F_->var, rat_cs);
            if (tv_deg(a.den) == 0 && a.den[0] == 1) return n;
            std::string d = tv_to_string(a.den, F_->var, rat_cs);
            return "(" + n + ")/(" + d + ")";
        }
        default: {
            const auto& a = std::get<FRatFunc>(v_);
            std::string n = tv_to_string(a.num, F_->var, ff_cs);
            if (tv_deg(a.den) == 0 && a.den[0].is_one()) return n;
            std::string d = tv_to_string(a.den, F_->var, ff_cs);
            return "(" + n + ")/(" + d + ")";
        }
    }
}

// --------------------------------------------------------------- Field -----

FieldPtr Field::rationals() {
    auto f = std::make_shared<Field>();
    f->kind = Kind::Rationals;
    return f;
}

FieldPtr Field::finite_prime(long p) {
    auto f = std::make_shared<Field>();
    f->kind = Kind::Finite;
    f->fq = RFCtx::prime_field(p);
    return f;
}

FieldPtr Field::finite(long p, const std::vector<long>& modulus) {
    RFPtr prime = RFCtx::prime_field(p);
    std::vector<long> m = modulus;
    while (!m.empty() && m.back() % p == 0) m.pop_back();
    if (m.size() <= 2) return finite_prime(p); // degree-1 modulus: F_p itself
    std::vector<RElem> mm;
    mm.reserve(m.size());
    for (long c : m) mm.push_back(RElem(prime, c));
    auto f = std::make_shared<Field>();
    f->kind = Kind::Finite;
    f->fq = RFCtx::extension(prime, mm, /*check=*/true);
    return f;
}

FieldPtr Field::rational_functions_q(char var) {
    auto f = std::make_shared<Field>();
    f->kind = Kind::RatFuncQ;
    f->var = var;
    return f;
}

FieldPtr Field::rational_functions_f(RFPtr coeff, char var) {
    auto f = std::make_shared<Field>();
    f->kind = Kind::RatFuncF;
    f->fq = std::move(coeff);
    f->var = var;
    return f;
}

long Field::characteristic() const {
    switch (kind) {
        case Kind::Rationals:
        case Kind::RatFuncQ: return 0;
        default: return fq->characteristic();
    }
}

bool Field::same(const Field& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Rationals: return true;
        case Kind::RatFuncQ: return var == o.var;
        case Kind::Finite: return same_ctx(fq, o.fq) || fq->size() == o.fq->size();
        default: return var == o.var && (same_ctx(fq, o.fq) || fq->size() == o.fq->size());
    }
}

Elem Field::zero() const { return from_int(0); }
Elem Field::one() const { return from_int(1); }

Elem Field::from_int(long n) const {
    auto self = shared_from_this();
    switch (kind) {
        case Kind::Rationals: return Elem(self, Rat(n));
        case Kind::Finite: return Elem(self, fq->from_int(n));
        case Kind::RatFuncQ: {
            QRatFunc v;
            if (n != 0) v.num = {Rat(n)};
            v.den = {Rat(1)};
            return Elem(self, std::move(v));
        }
        default: {
            FRatFunc v;
            v.k = fq;
            RElem c = fq->from_int(n);
            if (!c.is_zero()) v.num = {c};
            v.den = {fq->one()};
            return Elem(self, std::move(v));
        }
    }
}

Elem Field::from_bigint(const Int& n) const {
    auto self = shared_from_this();
    switch (kind) {
        case Kind::Rationals: return Elem(self, Rat(n));
        case Kind::Finite: return Elem(self, fq->from_int(n));
        case Kind::RatFuncQ: {
            QRatFunc v;
            if (n != 0) v.num = {Rat(n)};
            v.den = {Rat(1)};
            return Elem(self, std::move(v));
        }
        default: return from_ff(fq->from_int(n));
    }
}

Elem Field::from_rat(const Rat& r) const {
    auto self = shared_from_this();
    switch (kind) {
        case Kind::Rationals: return Elem(self, r);
        case Kind::RatFuncQ: {
            QRatFunc v;
            if (r != 0) v.num = {r};
            v.den = {Rat(1)};
            return Elem(self, std::move(v));
        }
        default: throw DomainError("rational literal in a positive-characteristic field");
    }
}

Elem Field::from_ff(const RElem& a) const {
    auto self = shared_from_this();
    if (kind == Kind::Finite) {
        if (!same_ctx(a.field(), fq)) throw DescriptorError("element from a different finite field");
        return Elem(self, a);
    }
    if (kind == Kind::RatFuncF) {
        if (!same_ctx(a.field(), fq)) throw DescriptorError("element from a different finite field");
        FRatFunc v;
        v.k = fq;
        if (!a.is_zero()) v.num = {a};
        v.den = {fq->one()};
        return Elem(self, std::move(v));
    }
    throw DomainError("finite-field element in a characteristic-zero field");
}

Elem Field::t() const {
    auto self = shared_from_this();
    if (kind == Kind::RatFuncQ) {
        QRatFunc v;
        v.num = {Rat(0), Rat(1)};
        v.den = {Rat(1)};
        return Elem(self, std::move(v));
    }
    if (kind == Kind::RatFuncF) {
        FRatFunc v;
        v.k = fq;
        v.num = {fq->zero(), fq->one()};
        v.den = {fq->one()};
        return Elem(self, std::move(v));
    }
    throw DomainError("variable t only exists in rational-function fields");
}

std::string Field::describe() const {
    switch (kind) {
        case Kind::Rationals: return "Q";
        case Kind::Finite: return fq->describe();
        case Kind::RatFuncQ: return std::string("Q(") + var + ")";
        default: return fq->describe() + "(" + var + ")";
    }
}

// --------------------------------------------------------------- Poly ------

Poly::Poly(FieldPtr F, std::vector<Elem> coeffs) : F_(std::move(F)), c_(std::move(coeffs)) {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::x(const FieldPtr& F) { return Poly(F, {F->zero(), F->one()}); }

Poly Poly::constant(const Elem& c) { return Poly(c.field(), {c}); }

Poly Poly::from_ints(const FieldPtr& F, const std::vector<long>& coeffs) {
    std::vector<Elem> c;
    c.reserve(coeffs.size());
    for (long v : coeffs) c.push_back(F->from_int(v));
    return Poly(F, std::move(c));
}

bool Poly::is_monic() const { return !c_.empty() && c_.back().is_one(); }

const Elem& Poly::leading() const {
    if (c_.empty()) throw DomainError("leading coefficient of zero");
    return c_.back();
}

Elem Poly::at(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return F_->zero();
    return c_[i];
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Elem> out(std::max(c_.size(), o.c_.size()), F_->zero());
    for (size_t i = 0; i < c_.size(); ++i) out[i] = out[i] + c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) out[i] = out[i] + o.c_[i];
    return Poly(F_, std::move(out));
}

Poly Poly::operator-() const {
    std::vector<Elem> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(-x);
    return Poly(F_, std::move(out));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(F_);
    std::vector<Elem> out(c_.size() + o.c_.size() - 1, F_->zero());
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j)
            out[i + j] = out[i + j] + c_[i] * o.c_[j];
    return Poly(F_, std::move(out));
}

Poly Poly::scaled(const Elem& s) const {
    std::vector<Elem> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(x * s);
    return Poly(F_, std::move(out));
}

Poly Poly::pow(long e) const {
    if (e < 0) throw DomainError("negative polynomial power");
    Poly result = Poly::constant(F_->one());
    Poly b = *this;
    while (e > 0) {
        if (e & 1) result = result * b;
        b = b * b;
        e >>= 1;
    }
    return result;
}

bool Poly::operator==(const Poly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
        if (!(c_[i] == o.c_[i])) return false;
    return true;
}

std::string Poly::to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (int i = deg(); i >= 0; --i) {
        if (c_[i].is_zero()) continue;
        std::string coef = c_[i].to_string();
        bool needs_parens =
            coef.find(" + ") != std::string::npos || coef.find(" - ") != std::string::npos;
        std::string term;
        if (i == 0) {
            term = needs_parens ? "(" + coef + ")" : coef;
        } else {
            if (coef == "1") {
                term = "";
            } else if (coef == "-1") {
                term = "-";
            } else {
                term = (needs_parens ? "(" + coef + ")" : coef) + "*";
            }
            term += "x";
            if (i > 1) term += "^" + std::to_string(i);
        }
        if (s.empty()) {
            s = term;
        } else if (!term.empty() && term[0] == '-') {
            s += " - " + term.substr(1);
        } else {
            s += " + " + term;
        }
    }
    return s.empty() ? "0" : s;
}

void divrem(const Poly& f, const Poly& g, Poly& q, Poly& r) {
    if (g.is_zero()) throw DomainError("polynomial division by zero");
    const auto& F = f.field();
    Elem lead_inv = g.leading().inverse();
    std::vector<Elem> rem(f.coeffs());
    std::vector<Elem> quo;
    int dg = g.deg();
    if (f.deg() >= dg) quo.assign(static_cast<size_t>(f.deg() - dg + 1), F->zero());
    for (int i = static_cast<int>(rem.size()) - 1; i >= dg; --i) {
        if (rem[i].is_zero()) continue;
        Elem fac = rem[i] * lead_inv;
        quo[i - dg] = fac;
        for (int j = 0; j <= dg; ++j) rem[i - dg + j] = rem[i - dg + j] - fac * g.at(j);
    }
    q = Poly(F, std::move(quo));
    r = Poly(F, std::move(rem));
}

Poly QExpansion::reconstruct() const {
    Poly acc(base.field());
    for (int s = static_cast<int>(digits.size()) - 1; s >= 0; --s)
        acc = acc * base + digits[s];
    return acc;
}

QExpansion q_expansion(const Poly& f, const Poly& Q) {
    if (Q.deg() < 1) throw DomainError("expansion base must have degree >= 1");
    if (!Q.is_monic()) throw DomainError("expansion base must be monic");
    QExpansion out;
    out.base = Q;
    Poly cur = f;
    if (cur.is_zero()) {
        out.digits.push_back(cur);
        return out;
    }
    while (!cur.is_zero()) {
        Poly q, r;
        divrem(cur, Q, q, r);
        out.digits.push_back(r);
        cur = q;
    }
    return out;
}

Poly hasse_derivative(const Poly& f, long b) {
    if (b < 0) throw DomainError("negative Hasse index");
    if (b == 0) return f;
    const auto& F = f.field();
    int d = f.deg();
    if (d < b) return Poly(F);
    // Pascal column C(n, j) for j <= b, built inside the coefficient field.
    std::vector<Elem> row(static_cast<size_t>(b) + 1, F->zero()); // row n: C(n, j)
    row[0] = F->one();
    std::vector<Elem> out(static_cast<size_t>(d - b) + 1, F->zero());
    for (long n = 1; n <= d; ++n) {
        for (long j = std::min(n, b); j >= 1; --j) row[j] = row[j] + row[j - 1];
        if (n >= b) out[n - b] = row[b] * f.at(static_cast<int>(n));
    }
    return Poly(F, std::move(out));
}

long multiplicity(const Poly& f) {
    if (f.deg() < 1) throw DomainError("multiplicity of a constant");
    long p = f.field()->characteristic();
    if (p == 0) return 1;
    long m = -1; // min over v_p of nonzero exponents >= 1
    for (int i = 1; i <= f.deg(); ++i) {
        if (f.at(i).is_zero()) continue;
        long v = 0, n = i;
        while (n % p == 0) {
            ++v;
            n /= p;
        }
        m = (m < 0) ? v : std::min(m, v);
    }
    long out = 1;
    for (long i = 0; i < m; ++i) out *= p;
    return out;
}

ExtGcd ext_gcd(const Poly& a, const Poly& b) {
    const auto& F = a.field();
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::constant(F->one()), s1 = Poly(F);
    Poly t0 = Poly(F), t1 = Poly::constant(F->one());
    while (!r1.is_zero()) {
        Poly q, r;
        divrem(r0, r1, q, r);
        Poly s = s0 - q * s1;
        Poly t = t0 - q * t1;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if (r0.is_zero()) return {r0, s0, t0};
    Elem inv = r0.leading().inverse();
    return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

// --------------------------------------------------------- BaseValuation ---

BaseValuation BaseValuation::padic(FieldPtr f, long p, GroupDescriptor g, int coord) {
    if (f->kind != Field::Kind::Rationals) throw DomainError("p-adic valuation needs base field Q");
    if (p < 2) throw DomainError("p-adic valuation needs a prime");
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw DomainError("p-adic valuation needs a prime");
    if (coord < 1 || coord > g.rank) throw DescriptorError("embedding coordinate out of range");
    BaseValuation v;
    v.kind = Kind::PAdic;
    v.p = p;
    v.field = std::move(f);
    v.group = g;
    v.coord = coord;
    return v;
}

BaseValuation BaseValuation::tadic(FieldPtr f, GroupDescriptor g, int coord) {
    if (f->kind != Field::Kind::RatFuncQ && f->kind != Field::Kind::RatFuncF)
        throw DomainError("t-adic valuation needs a rational-function field");
    if (coord < 1 || coord > g.rank) throw DescriptorError("embedding coordinate out of range");
    BaseValuation v;
    v.kind = Kind::TAdic;
    v.field = std::move(f);
    v.group = g;
    v.coord = coord;
    return v;
}

BaseValuation BaseValuation::trivial(FieldPtr f, GroupDescriptor g) {
    BaseValuation v;
    v.kind = Kind::Trivial;
    v.field = std::move(f);
    v.group = g;
    return v;
}

long BaseValuation::value_int(const Elem& a) const {
    if (a.is_zero()) throw DomainError("value_int of zero");
    switch (kind) {
        case Kind::PAdic: return padic_val(a.as_rat(), p);
        case Kind::TAdic:
            if (field->kind == Field::Kind::RatFuncQ) {
                const auto& v = a.as_qrf();
                return tv_ord(v.num) - tv_ord(v.den);
            } else {
                const auto& v = a.as_frf();
                return tv_ord(v.num) - tv_ord(v.den);
            }
        default: return 0;
    }
}

ExtValue BaseValuation::value(const Elem& a) const {
    if (a.is_zero()) return ExtValue::infinity(group.rank);
    return ExtValue::at_coord(group.rank, coord, Rat(value_int(a)));
}

bool BaseValuation::residue_finite() const {
    switch (kind) {
        case Kind::PAdic: return true;
        case Kind::TAdic: return field->kind == Field::Kind::RatFuncF;
        default: return field->kind == Field::Kind::Finite;
    }
}

RFPtr BaseValuation::residue_field() const {
    switch (kind) {
        case Kind::PAdic: return RFCtx::prime_field(p);
        case Kind::TAdic:
            if (field->kind != Field::Kind::RatFuncF)
                throw ResidualUnavailable("residue field of t-adic over Q(t) is infinite");
            return field->fq;
        default:
            if (field->kind != Field::Kind::Finite)
                throw ResidualUnavailable("residue field of the trivial valuation is the base field");
            return field->fq;
    }
}

RElem BaseValuation::residue_of_unit(const Elem& a) const {
    if (a.is_zero() || value_int(a) != 0) throw NotDegreeZero("residue of a non-unit");
    switch (kind) {
        case Kind::PAdic: {
            RFPtr k = residue_field();
            const Rat& r = a.as_rat();
            RElem num = k->from_int(Int(r.get_num()));
            RElem den = k->from_int(Int(r.get_den()));
            return num * den.inverse();
        }
        case Kind::TAdic: {
            RFPtr k = residue_field();
            const auto& v = a.as_frf();
            // reduced fraction with equal orders: both orders are zero
            return v.num[0] * v.den[0].inverse();
        }
        default: {
            if (field->kind != Field::Kind::Finite)
                throw ResidualUnavailable("residues unavailable over this base");
            return a.as_ff();
        }
    }
}

Elem BaseValuation::uniformizer() const {
    switch (kind) {
        case Kind::PAdic: return field->from_int(p);
        case Kind::TAdic: return field->t();
        default: throw DomainError("the trivial valuation has no uniformizer");
    }
}

bool BaseValuation::same(const BaseValuation& o) const {
    return kind == o.kind && p == o.p && group == o.group && coord == o.coord &&
           field->same(*o.field);
}

std::string BaseValuation::describe() const {
    switch (kind) {
        case Kind::PAdic: return std::to_string(p) + "-adic on Q";
        case Kind::TAdic: return "t-adic on " + field->describe();
        default: return "trivial on " + field->describe();
    }
}

} // namespace keyforge
