#include "keyforge/finite_field.hpp"

#include <algorithm>
#include <cassert>

#include "keyforge/errors.hpp"

namespace keyforge {

namespace {

long mod_norm(long v, long p) {
    v %= p;
    if (v < 0) v += p;
    return v;
}

long mul_mod(long a, long b, long p) {
    return static_cast<long>((static_cast<__int128>(a) * b) % p);
}

long inv_mod(long a, long p) {
    long t = 0, nt = 1, r = p, nr = mod_norm(a, p);
    if (nr == 0) throw DomainError("inverse of zero in F_p");
    while (nr != 0) {
        long q = r / nr;
        long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw DomainError("not invertible mod p (p not prime?)");
    return mod_norm(t, p);
}

void trim(std::vector<RElem>& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

void require_same(const RElem& a, const RElem& b) {
    if (!a.valid() || !b.valid()) throw DomainError("uninitialized finite-field element");
    if (!same_ctx(a.field(), b.field()))
        throw DescriptorError("finite-field elements from different contexts");
}

} // namespace

bool same_ctx(const RFPtr& a, const RFPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->is_prime() && b->is_prime()) return a->characteristic() == b->characteristic();
    return false;
}

RElem::RElem(RFPtr k, long prime_residue) : k_(std::move(k)) {
    if (!k_ || !k_->is_prime()) throw DomainError("prime-residue constructor needs a prime field");
    v_ = mod_norm(prime_residue, k_->characteristic());
}

RElem::RElem(RFPtr k, std::vector<RElem> ext_coeffs) : k_(std::move(k)), c_(std::move(ext_coeffs)) {
    if (!k_ || k_->is_prime()) throw DomainError("coefficient constructor needs an extension field");
    trim(c_);
    if (static_cast<int>(c_.size()) > k_->ext_degree())
        throw DomainError("extension element with too many coefficients");
}

bool RElem::is_zero() const {
    if (!k_) throw DomainError("uninitialized finite-field element");
    return k_->is_prime() ? v_ == 0 : c_.empty();
}

bool RElem::is_one() const {
    if (k_->is_prime()) return v_ == 1 % k_->characteristic();
    return c_.size() == 1 && c_[0].is_one();
}

RElem RElem::operator+(const RElem& o) const {
    require_same(*this, o);
    if (k_->is_prime()) return RElem(k_, mod_norm(v_ + o.v_, k_->characteristic()));
    std::vector<RElem> out(std::max(c_.size(), o.c_.size()), k_->base()->zero());
    for (size_t i = 0; i < c_.size(); ++i) out[i] = out[i] + c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) out[i] = out[i] + o.c_[i];
    return RElem(k_, std::move(out));
}

RElem RElem::operator-() const {
    if (k_->is_prime()) return RElem(k_, mod_norm(-v_, k_->characteristic()));
    std::vector<RElem> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(-x);
    return RElem(k_, std::move(out));
}

RElem RElem::operator-(const RElem& o) const { return *this + (-o); }

RElem RElem::operator*(const RElem& o) const {
    require_same(*this, o);
    if (k_->is_prime()) return RElem(k_, mul_mod(v_, o.v_, k_->characteristic()));
    if (is_zero() || o.is_zero()) return k_->zero();
    const auto& base = k_->base();
    std::vector<RElem> prod(c_.size() + o.c_.size() - 1, base->zero());
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j)
            prod[i + j] = prod[i + j] + c_[i] * o.c_[j];
    // reduce modulo the context modulus
    const auto& m = k_->modulus();
    const int d = k_->ext_degree();
    for (int i = static_cast<int>(prod.size()) - 1; i >= d; --i) {
        if (prod[i].is_zero()) continue;
        RElem lead = prod[i];
        for (int j = 0; j < d; ++j) prod[i - d + j] = prod[i - d + j] - lead * m[j];
        prod[i] = base->zero();
    }
    prod.resize(d, base->zero());
    return RElem(k_, std::move(prod));
}

bool RElem::operator==(const RElem& o) const {
    require_same(*this, o);
    if (k_->is_prime()) return v_ == o.v_;
    return (*this - o).is_zero();
}

RElem RElem::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero in a finite field");
    if (k_->is_prime()) return RElem(k_, inv_mod(v_, k_->characteristic()));
    // Extended Euclid in base[y] against the modulus.
    RPoly a = rp_make(k_->base(), c_);
    RPoly m = rp_make(k_->base(), k_->modulus());
    RPoly r0 = m, r1 = a;
    RPoly s0 = rp_zero(k_->base()), s1 = rp_one(k_->base());
    while (!r1.is_zero()) {
        RPoly q, r;
        rp_divrem(r0, r1, q, r);
        RPoly s = rp_sub(s0, rp_mul(q, s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if (r0.deg() != 0) throw DomainError("modulus not irreducible: non-invertible element");
    RPoly inv = rp_scale(s0, r0.c[0].inverse());
    std::vector<RElem> cc = inv.c;
    return RElem(k_, std::move(cc));
}

RElem RElem::pow(const Int& e) const {
    if (e < 0) return inverse().pow(-e);
    RElem result = k_->one();
    RElem b = *this;
    Int n = e;
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) result = result * b;
        b = b * b;
        n >>= 1;
    }
    return result;
}

std::string RElem::to_string() const {
    if (!k_) return "?";
    if (k_->is_prime()) return std::to_string(v_);
    std::string s = "[";
    const int d = k_->ext_degree();
    for (int i = 0; i < d; ++i) {
        if (i) s += ",";
        s += (i < static_cast<int>(c_.size())) ? c_[i].to_string() : "0";
    }
    return s + "]";
}

RFPtr RFCtx::prime_field(long p) {
    if (p < 2) throw DomainError("characteristic must be at least 2");
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw DomainError("characteristic must be prime");
    auto ctx = std::shared_ptr<RFCtx>(new RFCtx());
    ctx->p_ = p;
    return ctx;
}

RFPtr RFCtx::extension(RFPtr base, const std::vector<RElem>& modulus, bool check) {
    if (!base) throw DomainError("extension over null context");
    std::vector<RElem> m = modulus;
    trim(m);
    if (m.size() < 2) throw DomainError("extension modulus must have degree >= 1");
    if (!m.back().is_one()) throw DomainError("extension modulus must be monic");
    for (const auto& x : m)
        if (!same_ctx(x.field(), base)) throw DescriptorError("modulus coefficients from wrong field");
    if (check && !rp_irreducible(rp_make(base, m)))
        throw DomainError("extension modulus is reducible");
    auto ctx = std::shared_ptr<RFCtx>(new RFCtx());
    ctx->p_ = base->characteristic();
    ctx->base_ = std::move(base);
    ctx->mod_ = std::move(m);
    ctx->ext_deg_ = static_cast<int>(ctx->mod_.size()) - 1;
    return ctx;
}

int RFCtx::degree_over_prime() const {
    return is_prime() ? 1 : ext_deg_ * base_->degree_over_prime();
}

Int RFCtx::size() const {
    Int s;
    mpz_ui_pow_ui(s.get_mpz_t(), static_cast<unsigned long>(p_),
                  static_cast<unsigned long>(degree_over_prime()));
    return s;
}

RElem RFCtx::zero() const {
    if (is_prime()) return RElem(shared_from_this(), 0L);
    return RElem(shared_from_this(), std::vector<RElem>{});
}

RElem RFCtx::one() const { return from_int(1); }

RElem RFCtx::from_int(const Int& n) const {
    if (is_prime()) {
        Int r = n % Int(p_);
        if (r < 0) r += Int(p_);
        return RElem(shared_from_this(), r.get_si());
    }
    RElem b = base_->from_int(n);
    if (b.is_zero()) return zero();
    return RElem(shared_from_this(), std::vector<RElem>{b});
}

RElem RFCtx::generator() const {
    if (is_prime()) throw DomainError("prime field has no extension generator");
    return RElem(shared_from_this(), std::vector<RElem>{base_->zero(), base_->one()});
}

std::string RFCtx::describe() const {
    if (is_prime()) return "F_" + std::to_string(p_);
    return base_->describe() + "[g]/(" + rp_make(base_, mod_).to_string("g") + ")";
}

RElem embed_into(const RElem& a, const RFPtr& target) {
    if (!a.valid() || !target) throw DomainError("embed_into with null argument");
    if (same_ctx(a.field(), target)) {
        if (a.field() == target) return a;
        // both prime with equal characteristic
        return target->from_int(a.prime_residue());
    }
    if (target->is_prime()) throw DescriptorError("cannot embed into a smaller field");
    RElem down = embed_into(a, target->base());
    if (down.is_zero()) return target->zero();
    return RElem(target, std::vector<RElem>{down});
}

// ---------------------------------------------------------------- RPoly ----

RElem RPoly::at(int i) const {
    if (i < 0 || i >= static_cast<int>(c.size())) return k->zero();
    return c[i];
}

bool RPoly::operator==(const RPoly& o) const {
    if (!same_ctx(k, o.k)) return false;
    if (c.size() != o.c.size()) return false;
    for (size_t i = 0; i < c.size(); ++i)
        if (!(c[i] == o.c[i])) return false;
    return true;
}

std::string RPoly::to_string(const std::string& var) const {
    if (c.empty()) return "0";
    std::string s;
    for (int i = deg(); i >= 0; --i) {
        if (c[i].is_zero()) continue;
        if (!s.empty()) s += " + ";
        std::string coef = c[i].to_string();
        if (i == 0) {
            s += coef;
        } else {
            if (!c[i].is_one()) s += coef + "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

RPoly rp_make(RFPtr k, std::vector<RElem> coeffs) {
    trim(coeffs);
    return RPoly{std::move(k), std::move(coeffs)};
}

RPoly rp_zero(RFPtr k) { return RPoly{std::move(k), {}}; }
RPoly rp_one(RFPtr k) {
    auto o = k->one();
    return RPoly{std::move(k), {o}};
}
RPoly rp_y(RFPtr k) {
    auto z = k->zero(), o = k->one();
    return RPoly{std::move(k), {z, o}};
}

RPoly rp_add(const RPoly& a, const RPoly& b) {
    std::vector<RElem> out(std::max(a.c.size(), b.c.size()), a.k->zero());
    for (size_t i = 0; i < a.c.size(); ++i) out[i] = out[i] + a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) out[i] = out[i] + b.c[i];
    trim(out);
    return RPoly{a.k, std::move(out)};
}

RPoly rp_sub(const RPoly& a, const RPoly& b) {
    std::vector<RElem> out(std::max(a.c.size(), b.c.size()), a.k->zero());
    for (size_t i = 0; i < a.c.size(); ++i) out[i] = out[i] + a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) out[i] = out[i] - b.c[i];
    trim(out);
    return RPoly{a.k, std::move(out)};
}

RPoly rp_mul(const RPoly& a, const RPoly& b) {
    if (a.is_zero() || b.is_zero()) return rp_zero(a.k);
    std::vector<RElem> out(a.c.size() + b.c.size() - 1, a.k->zero());
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            out[i + j] = out[i + j] + a.c[i] * b.c[j];
    trim(out);
    return RPoly{a.k, std::move(out)};
}

RPoly rp_scale(const RPoly& a, const RElem& s) {
    std::vector<RElem> out;
    out.reserve(a.c.size());
    for (const auto& x : a.c) out.push_back(x * s);
    trim(out);
    return RPoly{a.k, std::move(out)};
}

void rp_divrem(const RPoly& a, const RPoly& b, RPoly& q, RPoly& r) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    RElem lead_inv = b.c.back().inverse();
    std::vector<RElem> rem = a.c;
    std::vector<RElem> quo;
    int db = b.deg();
    if (a.deg() >= db) quo.assign(a.deg() - db + 1, a.k->zero());
    for (int i = static_cast<int>(rem.size()) - 1; i >= db; --i) {
        if (rem[i].is_zero()) continue;
        RElem f = rem[i] * lead_inv;
        quo[i - db] = f;
        for (int j = 0; j <= db; ++j) rem[i - db + j] = rem[i - db + j] - f * b.c[j];
    }
    trim(rem);
    trim(quo);
    q = RPoly{a.k, std::move(quo)};
    r = RPoly{a.k, std::move(rem)};
}

RPoly rp_mod(const RPoly& a, const RPoly& b) {
    RPoly q, r;
    rp_divrem(a, b, q, r);
    return r;
}

RPoly rp_gcd(RPoly a, RPoly b) {
    while (!b.is_zero()) {
        RPoly r = rp_mod(a, b);
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    return rp_scale(a, a.c.back().inverse());
}

RPoly rp_powmod(const RPoly& base, const Int& e, const RPoly& mod) {
    RPoly result = rp_one(base.k);
    RPoly b = rp_mod(base, mod);
    Int n = e;
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) result = rp_mod(rp_mul(result, b), mod);
        b = rp_mod(rp_mul(b, b), mod);
        n >>= 1;
    }
    return result;
}

RPoly rp_pow(const RPoly& base, long e) {
    RPoly result = rp_one(base.k);
    RPoly b = base;
    long n = e;
    while (n > 0) {
        if (n & 1) result = rp_mul(result, b);
        b = rp_mul(b, b);
        n >>= 1;
    }
    return result;
}

RElem rp_eval(const RPoly& f, const RElem& x) {
    RElem acc = x.field()->zero();
    for (int i = f.deg(); i >= 0; --i) acc = acc * x + f.c[i];
    return acc;
}

bool rp_irreducible(const RPoly& f) {
    int n = f.deg();
    if (n <= 0) return false;
    if (!f.c.back().is_one()) throw DomainError("irreducibility test expects a monic polynomial");
    if (n == 1) return true;
    Int q = f.k->size();
    RPoly y = rp_y(f.k);
    // y^(q^n) == y (mod f)
    Int qn;
    mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n));
    if (rp_powmod(y, qn, f) != rp_mod(y, f)) return false;
    // gcd(y^(q^(n/l)) - y, f) == 1 for every prime l | n
    int m = n;
    for (int l = 2; l * l <= m; ++l) {
        if (m % l) continue;
        while (m % l == 0) m /= l;
        Int qk;
        mpz_pow_ui(qk.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n / l));
        RPoly g = rp_gcd(rp_sub(rp_powmod(y, qk, f), y), f);
        if (g.deg() != 0) return false;
    }
    if (m > 1) {
        Int qk;
        mpz_pow_ui(qk.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n / m));
        RPoly g = rp_gcd(rp_sub(rp_powmod(y, qk, f), y), f);
        if (g.deg() != 0) return false;
    }
    return true;
}

std::vector<RElem> all_elements(const RFPtr& k, long cap) {
    Int s = k->size();
    if (s > cap) throw DomainError("field too large to enumerate");
    if (k->is_prime()) {
        std::vector<RElem> out;
        for (long v = 0; v < k->characteristic(); ++v) out.push_back(RElem(k, v));
        return out;
    }
    std::vector<RElem> base_elems = all_elements(k->base(), cap);
    std::vector<RElem> out{k->zero()};
    for (int d = 0; d < k->ext_degree(); ++d) {
        std::vector<RElem> next;
        for (const auto& prefix : out)
            for (const auto& b : base_elems) {
                std::vector<RElem> coeffs(prefix.ext_coeffs());
                coeffs.resize(d + 1, k->base()->zero());
                coeffs[d] = b;
                next.push_back(RElem(k, std::move(coeffs)));
            }
        out = std::move(next);
    }
    // dedup zero-padding duplicates by trimming semantics: construction trims,
    // so distinct coefficient vectors of equal value collapse; filter dups.
    std::vector<RElem> uniq;
    for (const auto& e : out) {
        bool seen = false;
        for (const auto& u : uniq)
            if (u == e) {
                seen = true;
                break;
            }
        if (!seen) uniq.push_back(e);
    }
    return uniq;
}

} // namespace keyforge
