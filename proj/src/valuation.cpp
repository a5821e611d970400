#include "keyforge/valuation.hpp"

#include <algorithm>
#include <cassert>

#include "keyforge/errors.hpp"
#include "keyforge/keypoly.hpp"
#include "keyforge/lattice.hpp"

namespace keyforge {

namespace {

Poly pmod(const Poly& a, const Poly& m) {
    Poly q, r;
    divrem(a, m, q, r);
    return r;
}

std::vector<std::vector<Rat>> gen_coords(const std::vector<ExtValue>& gens) {
    std::vector<std::vector<Rat>> out;
    out.reserve(gens.size());
    for (const auto& g : gens) out.push_back(g.coords());
    return out;
}

} // namespace

// ------------------------------------------------------------ structure ----

ValuationHandle ValuationHandle::degree_one(const BaseValuation& v, const Poly& phi0,
                                            const ExtValue& gamma0) {
    if (!phi0.valid() || !phi0.field()->same(*v.field))
        throw DescriptorError("root polynomial from a different field");
    if (phi0.deg() != 1 || !phi0.is_monic()) throw DomainError("root key must be monic of degree 1");
    if (!gamma0.is_infinity() && gamma0.rank() != v.group.rank)
        throw DescriptorError("root value rank mismatch");

    ValuationHandle h;
    h.base_ = v;
    Level lv;
    lv.phi = phi0;
    lv.gamma = gamma0;
    if (v.has_uniformizer()) {
        lv.small_gens.push_back(ExtValue::at_coord(v.group.rank, v.coord, Rat(1)));
        lv.small_wits.push_back(Poly::constant(v.uniformizer()));
    }
    h.levels_.push_back(std::move(lv));
    if (!gamma0.is_infinity()) {
        Level& l0 = h.levels_[0];
        auto ord = lattice_order(gen_coords(l0.small_gens), gamma0.coords());
        if (ord) {
            l0.e = ord->order;
            l0.u = h.realize_small_value(l0, gamma0, ord->order, ord->coeffs);
            if (v.residue_finite()) l0.kappa = v.residue_field();
        }
    }
    return h;
}

ValuationHandle make_degree_one(const BaseValuation& v, const Poly& phi0, const ExtValue& gamma0) {
    return ValuationHandle::degree_one(v, phi0, gamma0);
}

int ValuationHandle::degree() const { return levels_.back().phi.deg(); }

const Poly& ValuationHandle::key_poly() const { return levels_.back().phi; }

const ExtValue& ValuationHandle::key_gamma() const { return levels_.back().gamma; }

bool ValuationHandle::finite_values() const { return !levels_.back().gamma.is_infinity(); }

bool ValuationHandle::has_infinite_support() const { return !finite_values(); }

ValuationHandle ValuationHandle::prefix(int steps_kept) const {
    if (steps_kept < 0 || steps_kept > depth()) throw DomainError("prefix depth out of range");
    ValuationHandle h;
    h.base_ = base_;
    h.steps_.assign(steps_.begin(), steps_.begin() + steps_kept);
    h.levels_.assign(levels_.begin(), levels_.begin() + steps_kept + 1);
    return h;
}

bool ValuationHandle::extends(const ValuationHandle& mu) const {
    if (!base_.same(mu.base_)) return false;
    if (mu.depth() > depth()) return false;
    if (!(root_phi() == mu.root_phi()) || root_gamma() != mu.root_gamma()) return false;
    for (int i = 0; i < mu.depth(); ++i)
        if (!(steps_[i].phi == mu.steps_[i].phi) || steps_[i].gamma != mu.steps_[i].gamma)
            return false;
    return true;
}

bool ValuationHandle::same_chain(const ValuationHandle& o) const {
    return depth() == o.depth() && extends(o);
}

ValuationHandle ValuationHandle::with_step_unchecked(const Poly& phi, const ExtValue& gamma,
                                                     int mlv_case,
                                                     const std::vector<RElem>& residual) const {
    ValuationHandle out = *this;
    AugmentationStep st;
    st.phi = phi;
    st.gamma = gamma;
    st.mlv_case = mlv_case;
    st.residual = residual;
    out.steps_.push_back(std::move(st));

    const Level& prev = levels_.back();
    Level lv;
    lv.phi = phi;
    lv.gamma = gamma;
    if (phi.deg() > prev.phi.deg()) {
        // Values of smaller-degree polynomials now realize the whole previous
        // group: previous small generators plus the previous key value.
        lv.small_gens = prev.small_gens;
        lv.small_wits = prev.small_wits;
        lv.small_gens.push_back(prev.gamma);
        lv.small_wits.push_back(prev.phi);
    } else {
        // Equal-degree step: polynomials of degree < deg(phi) keep their
        // values, so the small group is unchanged.
        lv.small_gens = prev.small_gens;
        lv.small_wits = prev.small_wits;
    }
    out.levels_.push_back(std::move(lv));
    out.build_level_tail(out.levels_.back(), static_cast<int>(out.levels_.size()) - 1, mlv_case,
                         residual);
    return out;
}

void ValuationHandle::build_level_tail(Level& lv, int level_index, int mlv_case,
                                       const std::vector<RElem>& residual) {
    if (lv.gamma.is_infinity()) return; // support step: no value-group or residue data
    auto ord = lattice_order(gen_coords(lv.small_gens), lv.gamma.coords());
    if (ord) {
        lv.e = ord->order;
        lv.u = realize_small_value(lv, lv.gamma, ord->order, ord->coeffs);
    }
    const Level& prev = levels_[static_cast<size_t>(level_index) - 1];
    if (!prev.kappa || !lv.e) return;
    if (mlv_case == 1) {
        lv.kappa = prev.kappa;
        lv.xi_image = prev.kappa->zero();
        lv.xi_defined = true;
        lv.xi_zero = true;
        return;
    }
    if (mlv_case == 2 && !residual.empty()) {
        RPoly r = rp_make(prev.kappa, residual);
        if (r.deg() == 1) {
            lv.kappa = prev.kappa;
            lv.xi_image = -r.c[0]; // root of the monic linear residual
        } else {
            lv.kappa = RFCtx::extension(prev.kappa, residual, /*check=*/false);
            lv.xi_image = lv.kappa->generator();
        }
        lv.xi_defined = true;
    }
}

Poly ValuationHandle::realize_small_value(const Level& lv, const ExtValue& target, long order,
                                          const std::vector<Int>& coeffs) const {
    const FieldPtr& F = base_.field;
    Elem scalar = F->one();
    Poly numer = Poly::constant(F->one());
    Poly denom = Poly::constant(F->one());
    const bool reduce = lv.phi.deg() >= 1;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        if (!coeffs[i].fits_slong_p()) throw DomainError("normalizer exponent overflow");
        long c = coeffs[i].get_si();
        const Poly& wit = lv.small_wits[i];
        if (wit.deg() == 0) {
            scalar = scalar * wit.at(0).pow(c);
        } else if (c > 0) {
            for (long j = 0; j < c; ++j) {
                numer = numer * wit;
                if (reduce && numer.deg() >= lv.phi.deg()) numer = pmod(numer, lv.phi);
            }
        } else {
            for (long j = 0; j < -c; ++j) {
                denom = denom * wit;
                if (reduce && denom.deg() >= lv.phi.deg()) denom = pmod(denom, lv.phi);
            }
        }
    }
    Poly u = numer;
    if (denom.deg() > 0 || !denom.at(0).is_one()) {
        // Invert the denominator modulo phi: its initial term is a unit.
        ExtGcd bez = ext_gcd(denom, lv.phi);
        if (bez.g.deg() != 0) throw DomainError("normalizer inversion failed");
        Poly inv = bez.s.scaled(bez.g.at(0).inverse());
        u = u * inv;
        if (reduce && u.deg() >= lv.phi.deg()) u = pmod(u, lv.phi);
    }
    u = u.scaled(scalar);
    ExtValue got = eval_level(static_cast<int>(levels_.size()) - 1, u);
    if (got != target.scaled(Rat(order))) throw Error("internal: normalizer value mismatch");
    return u;
}

// ------------------------------------------------------------ evaluation ---

ExtValue ValuationHandle::eval_level(int level, const Poly& f) const {
    const int r = base_.group.rank;
    if (f.is_zero()) return ExtValue::infinity(r);
    const Level& lv = levels_[static_cast<size_t>(level)];
    QExpansion exp = q_expansion(f, lv.phi);
    ExtValue best = ExtValue::infinity(r);
    for (size_t s = 0; s < exp.digits.size(); ++s) {
        const Poly& digit = exp.digits[s];
        if (digit.is_zero()) continue;
        ExtValue dval = (level == 0) ? base_.value(digit.at(0)) : eval_level(level - 1, digit);
        ExtValue term;
        if (s == 0) {
            term = dval;
        } else if (lv.gamma.is_infinity()) {
            continue; // s*inf dominates
        } else {
            term = dval + lv.gamma.scaled(Rat(static_cast<long>(s)));
        }
        if (term < best) best = term;
    }
    return best;
}

ExtValue ValuationHandle::evaluate(const Poly& f) const {
    if (!f.valid() || !f.field()->same(*base_.field))
        throw DescriptorError("polynomial from a different field");
    return eval_level(static_cast<int>(levels_.size()) - 1, f);
}

std::pair<ExtValue, std::set<long>> ValuationHandle::truncate_eval(const Poly& Q,
                                                                   const Poly& f) const {
    if (Q.deg() < 1) throw DomainError("truncation base must have degree >= 1");
    if (!Q.is_monic()) throw DomainError("truncation base must be monic");
    const int r = base_.group.rank;
    QExpansion exp = q_expansion(f, Q);
    ExtValue vq = evaluate(Q);
    ExtValue best = ExtValue::infinity(r);
    std::set<long> argmin;
    bool best_inf = true;
    for (size_t s = 0; s < exp.digits.size(); ++s) {
        if (exp.digits[s].is_zero()) continue;
        ExtValue term;
        if (s == 0) {
            term = evaluate(exp.digits[s]);
        } else if (vq.is_infinity()) {
            term = ExtValue::infinity(r);
        } else {
            term = evaluate(exp.digits[s]) + vq.scaled(Rat(static_cast<long>(s)));
        }
        if (term.is_infinity()) continue;
        if (best_inf || term < best) {
            best = term;
            argmin.clear();
            argmin.insert(static_cast<long>(s));
            best_inf = false;
        } else if (term == best) {
            argmin.insert(static_cast<long>(s));
        }
    }
    if (best_inf) {
        // nu_Q(f) = infinity: every nonzero digit ties at the top.
        for (size_t s = 0; s < exp.digits.size(); ++s)
            if (!exp.digits[s].is_zero()) argmin.insert(static_cast<long>(s));
        if (argmin.empty()) argmin.insert(0); // f = 0
        return {ExtValue::infinity(r), argmin};
    }
    return {best, argmin};
}

bool ValuationHandle::equivalent_in(const Poly& f, const Poly& g) const {
    if (f.is_zero() || g.is_zero()) throw DomainError("equivalent_in with a zero argument");
    if (f == g) return true;
    ExtValue vf = evaluate(f), vg = evaluate(g);
    if (vf != vg) return false;
    if (vf.is_infinity()) return false; // distinct support elements never share an initial term
    return evaluate(f - g) > vf;
}

// ------------------------------------------------------------ value groups -

ValuationHandle::ValueGroupData ValuationHandle::value_group_data() const {
    if (!finite_values()) throw DomainError("value group undefined with infinite support");
    const Level& top = levels_.back();
    ValueGroupData out;
    out.gens_small = top.small_gens;
    out.gens_full = top.small_gens;
    out.gens_full.push_back(top.gamma);
    if (!top.e)
        throw DomainError("incommensurable chain: the value-group index is infinite");
    out.e_rel = *top.e;
    return out;
}

bool ValuationHandle::commensurable_top() const {
    return finite_values() && levels_.back().e.has_value();
}

long ValuationHandle::e_rel_top() const {
    if (!commensurable_top()) throw ResidualUnavailable("incommensurable top level");
    return *levels_.back().e;
}

bool ValuationHandle::residual_available() const {
    const Level& top = levels_.back();
    return finite_values() && top.e.has_value() && top.u.has_value() && top.kappa != nullptr;
}

const Poly& ValuationHandle::normalizer_top() const {
    if (!levels_.back().u) throw ResidualUnavailable("no normalizer at the top level");
    return *levels_.back().u;
}

RFPtr ValuationHandle::kappa_top() const {
    if (!levels_.back().kappa) throw ResidualUnavailable("residue field unavailable");
    return levels_.back().kappa;
}

// --------------------------------------------------------- residue towers --

ValuationHandle::RatioData ValuationHandle::ratio_data(int level, const Poly& G,
                                                       const Poly& H) const {
    const Level& lv = levels_[static_cast<size_t>(level)];
    if (!lv.e || !lv.u || !lv.kappa)
        throw ResidualUnavailable("residue machinery unavailable at level " +
                                  std::to_string(level));
    if (G.is_zero() || H.is_zero()) throw NotDegreeZero("ratio with a zero argument");
    const long e = *lv.e;

    auto expand = [&](const Poly& f, QExpansion& exp, ExtValue& val, std::set<long>& S) {
        exp = q_expansion(f, lv.phi);
        bool first = true;
        for (size_t s = 0; s < exp.digits.size(); ++s) {
            if (exp.digits[s].is_zero()) continue;
            ExtValue dval =
                (level == 0) ? base_.value(exp.digits[s].at(0)) : eval_level(level - 1, exp.digits[s]);
            ExtValue term =
                (s == 0) ? dval : dval + lv.gamma.scaled(Rat(static_cast<long>(s)));
            if (first || term < val) {
                val = term;
                S.clear();
                S.insert(static_cast<long>(s));
                first = false;
            } else if (term == val) {
                S.insert(static_cast<long>(s));
            }
        }
    };

    QExpansion eg, eh;
    ExtValue vg, vh;
    std::set<long> sg, sh;
    expand(G, eg, vg, sg);
    expand(H, eh, vh, sh);
    if (vg != vh) throw NotDegreeZero("initial-term ratio of unequal values");

    const long s0g = *sg.begin(), smg = *sg.rbegin();
    const long s0h = *sh.begin(), smh = *sh.rbegin();
    for (long s : sg)
        if ((s - s0g) % e != 0) throw Error("internal: support indices not congruent mod e");
    for (long s : sh)
        if ((s - s0h) % e != 0) throw Error("internal: support indices not congruent mod e");
    if ((s0g - s0h) % e != 0) throw Error("internal: support offsets not congruent mod e");

    const long dg = (smg - s0g) / e;
    const long dh = (smh - s0h) / e;
    RatioData out;
    out.k = (s0g - s0h) / e;

    const Poly& Ag = eg.digits[static_cast<size_t>(smg)];
    const Poly& Ah = eh.digits[static_cast<size_t>(smh)];

    auto zeta = [&](const Poly& num, const Poly& den) -> RElem {
        if (level == 0) {
            Elem ratio = num.at(0) / den.at(0);
            return base_.residue_of_unit(ratio);
        }
        return small_ratio(level, num, den);
    };

    auto digit_vector = [&](const QExpansion& exp, const std::set<long>& S, long s0, long d,
                            const Poly& A) {
        std::vector<RElem> zg(static_cast<size_t>(d) + 1, lv.kappa->zero());
        for (long j = 0; j <= d; ++j) {
            long s = s0 + j * e;
            if (!S.count(s)) continue;
            Poly den = A * (*lv.u).pow(d - j);
            zg[static_cast<size_t>(j)] = zeta(exp.digits[static_cast<size_t>(s)], den);
        }
        return zg;
    };

    out.rg = digit_vector(eg, sg, s0g, dg, Ag);
    out.rh = digit_vector(eh, sh, s0h, dh, Ah);

    long upow = out.k + dg - dh;
    Poly cn = Ag * (*lv.u).pow(std::max(0L, upow));
    Poly cd = Ah * (*lv.u).pow(std::max(0L, -upow));
    out.C = zeta(cn, cd);
    return out;
}

RElem ValuationHandle::eval_ratio_at(int level, const RatioData& d) const {
    const Level& lv = levels_[static_cast<size_t>(level)];
    if (!lv.kappa || !lv.xi_defined)
        throw ResidualUnavailable("no residue collapse data at level " + std::to_string(level));
    const RFPtr& k = lv.kappa;
    RElem xbar = lv.xi_image;
    if (d.k != 0 && xbar.is_zero()) throw NotAUnit("xi power collapses to zero");
    auto lift = [&](const std::vector<RElem>& v) {
        RPoly p = rp_zero(k);
        for (const auto& c : v) p.c.push_back(embed_into(c, k));
        while (!p.c.empty() && p.c.back().is_zero()) p.c.pop_back();
        return p;
    };
    RElem num = rp_eval(lift(d.rg), xbar);
    RElem den = rp_eval(lift(d.rh), xbar);
    if (num.is_zero() || den.is_zero()) throw NotAUnit("residual polynomial vanishes at xi");
    RElem out = embed_into(d.C, k) * num * den.inverse();
    if (d.k != 0) out = out * xbar.pow(Int(d.k));
    return out;
}

RElem ValuationHandle::small_ratio(int level, const Poly& G, const Poly& H) const {
    if (level == 0) {
        RatioData d = ratio_data(0, G, H);
        if (d.k != 0) throw NotAUnit("initial-term ratio involves the root key");
        if (!(rp_make(levels_[0].kappa, d.rg) == rp_make(levels_[0].kappa, d.rh)))
            throw NotAUnit("initial-term ratio is transcendental over the residue field");
        return d.C;
    }
    return eval_ratio_at(level, ratio_data(level - 1, G, H));
}

RElem ValuationHandle::unit_ratio(const Poly& g, const Poly& h) const {
    if (g.is_zero() || h.is_zero()) throw DomainError("unit ratio with zero argument");
    ExtValue vg = evaluate(g), vh = evaluate(h);
    if (vg.is_infinity() || vh.is_infinity() || vg != vh)
        throw NotDegreeZero("residue requires equal finite values");
    const int top = static_cast<int>(levels_.size()) - 1;
    RatioData d = ratio_data(top, g, h);
    if (d.k != 0) throw NotAUnit("initial-term ratio involves the key polynomial");
    if (!(rp_make(levels_.back().kappa, d.rg) == rp_make(levels_.back().kappa, d.rh)))
        throw NotAUnit("initial-term ratio is transcendental over the residue field");
    return d.C;
}

std::vector<RElem> ValuationHandle::residual_coeffs(const Poly& phi, const Poly& u_rep,
                                                    const Poly& f) const {
    if (!finite_values()) throw DomainError("residual operator undefined with infinite support");
    if (!residual_available()) throw ResidualUnavailable("residual machinery unavailable");
    if (!phi.is_monic() || phi.deg() != degree())
        throw KeyRequired("residual operator needs a minimal-degree key polynomial");
    if (f.is_zero()) throw DomainError("residual polynomial of zero");
    const long e = e_rel_top();
    if (u_rep.is_zero() || u_rep.deg() >= phi.deg())
        throw BadNormalizer("normalizer must be nonzero of degree < deg(phi)");
    ExtValue vphi = evaluate(phi);
    if (vphi.is_infinity()) throw BadNormalizer("key polynomial lies in the support");
    if (evaluate(u_rep) != vphi.scaled(Rat(e)))
        throw BadNormalizer("normalizer value differs from e_rel * nu(phi)");

    auto [val, S] = truncate_eval(phi, f);
    if (val.is_infinity()) throw DomainError("residual polynomial undefined on the support");
    QExpansion exp = q_expansion(f, phi);
    const long s0 = *S.begin(), sm = *S.rbegin();
    for (long s : S)
        if ((s - s0) % e != 0)
            throw Error("internal: truncation support not congruent mod e_rel");
    const long d = (sm - s0) / e;
    const Poly& A = exp.digits[static_cast<size_t>(sm)];
    const int top = static_cast<int>(levels_.size()) - 1;

    std::vector<RElem> out(static_cast<size_t>(d) + 1, kappa_top()->zero());
    for (long j = 0; j <= d; ++j) {
        long s = s0 + j * e;
        if (!S.count(s)) continue;
        Poly den = A * u_rep.pow(d - j);
        out[static_cast<size_t>(j)] = small_ratio(top, exp.digits[static_cast<size_t>(s)], den);
    }
    if (!out.back().is_one()) throw Error("internal: residual polynomial not monic");
    if (out.front().is_zero()) throw Error("internal: residual polynomial divisible by y");
    return out;
}

std::string ValuationHandle::describe() const {
    std::string s = "[" + base_.describe() + "; " + root_phi().to_string() + " -> " +
                    root_gamma().to_string();
    for (const auto& st : steps_)
        s += "; " + st.phi.to_string() + " -> " + st.gamma.to_string();
    return s + "]";
}

// ------------------------------------------------------------- augment -----

ValuationHandle augment(const ValuationHandle& nu, const Poly& phi, const ExtValue& gamma) {
    if (!phi.valid() || !phi.field()->same(*nu.field()))
        throw DescriptorError("key polynomial from a different field");
    if (!phi.is_monic() || phi.deg() < 1) throw KeyRequired("augmentation key must be monic");
    if (!nu.finite_values())
        throw KeyRequired("a valuation with nonzero support admits no key polynomials");
    if (!gamma.is_infinity() && gamma.rank() != nu.group().rank)
        throw DescriptorError("augmentation value rank mismatch");

    MlvKeyResult key = is_mlv_key(nu, phi);
    if (!key.yes) throw KeyRequired("polynomial is not an MLV key for the valuation");
    ExtValue vphi = nu.evaluate(phi);
    if (!(gamma > vphi))
        throw MonotonicityViolation("augmentation value must exceed nu(phi) = " + vphi.to_string());
    return nu.with_step_unchecked(phi, gamma, key.case_id, key.residual);
}

std::pair<Poly, int> phi_class(const ValuationHandle& mu, const ValuationHandle& nu) {
    if (!nu.extends(mu)) throw NotComparable("chains are not nested");
    if (nu.depth() == mu.depth()) throw NotComparable("valuations coincide");
    const Poly& rep = nu.step(mu.depth()).phi;
    return {rep, rep.deg()};
}

} // namespace keyforge
