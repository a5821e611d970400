#include "keyforge/limitchain.hpp"

#include <algorithm>

namespace keyforge {

namespace {

long vp_int(const Int& n, long p) {
    if (n == 0) throw DomainError("p-adic valuation of zero");
    Int tmp, P(p);
    return static_cast<long>(mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), P.get_mpz_t()));
}

} // namespace

LimitChain::LimitChain(ChainSpec spec) : spec_(std::move(spec)) {
    if (spec_.stable_degree < 1) throw DomainError("stable degree must be positive");
    if (const auto* h = std::get_if<ChainSpec::HenselSqrt>(&spec_.rule)) {
        if (spec_.base.field()->kind != Field::Kind::Rationals ||
            spec_.base.base().kind != BaseValuation::Kind::PAdic ||
            spec_.base.base().p != h->p)
            throw DomainError("hensel-sqrt rule needs a p-adic base over Q with matching p");
        if (spec_.stable_degree != 1) throw DomainError("hensel-sqrt rule has stable degree 1");
        if (h->d % h->p == 0 || h->seed % h->p == 0)
            throw DomainError("hensel-sqrt rule needs d and the seed prime to p");
        long e1 = vp_int(h->seed * h->seed - h->d, h->p);
        long need = (h->p == 2) ? 3 : 1;
        if (e1 < need) throw DomainError("hensel-sqrt seed does not start a strictly refining lift");
        if (std::holds_alternative<ChainSpec::TailNone>(spec_.tail))
            spec_.tail = ChainSpec::TailUnbounded{};
    } else if (std::get_if<ChainSpec::Geometric>(&spec_.rule) != nullptr) {
        if (spec_.base.base().kind != BaseValuation::Kind::TAdic ||
            spec_.base.field()->kind != Field::Kind::RatFuncF)
            throw DomainError("geometric rule needs a t-adic base over F_q(t)");
        if (spec_.stable_degree != 1) throw DomainError("geometric rule has stable degree 1");
        if (std::holds_alternative<ChainSpec::TailNone>(spec_.tail))
            spec_.tail = ChainSpec::TailUnbounded{};
    } else {
        const auto& ex = std::get<ChainSpec::Explicit>(spec_.rule);
        for (const auto& [chi, beta] : ex.steps)
            if (chi.deg() != spec_.stable_degree)
                throw DomainError("explicit chain step with the wrong degree");
    }
    cache_.push_back(spec_.base);
}

int LimitChain::max_depth() const {
    if (const auto* ex = std::get_if<ChainSpec::Explicit>(&spec_.rule))
        return static_cast<int>(ex->steps.size());
    return 64;
}

std::pair<Poly, ExtValue> LimitChain::produce_locked(int i) const {
    const FieldPtr& F = spec_.base.field();
    const GroupDescriptor& g = spec_.base.group();
    const int coord = spec_.base.base().coord;

    if (const auto* ex = std::get_if<ChainSpec::Explicit>(&spec_.rule)) {
        if (i > static_cast<int>(ex->steps.size()))
            throw BudgetExceeded("explicit chain exhausted at index " + std::to_string(i));
        return ex->steps[static_cast<size_t>(i) - 1];
    }
    if (const auto* h = std::get_if<ChainSpec::HenselSqrt>(&spec_.rule)) {
        while (static_cast<int>(hensel_a_.size()) < i) {
            if (hensel_a_.empty()) {
                hensel_a_.push_back(h->seed);
            } else {
                const Int& a = hensel_a_.back();
                long e = vp_int(a * a - h->d, h->p);
                long enext = 2 * e - 2 * (h->p == 2 ? 1 : 0);
                Int mod;
                mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(h->p),
                              static_cast<unsigned long>(enext));
                // Newton step (a^2 + d) / (2a); at p = 2 the numerator is even
                // and the residual factor a is a unit.
                Int num = a * a + h->d;
                Int den = 2 * a;
                if (h->p == 2) {
                    if (mpz_odd_p(num.get_mpz_t()))
                        throw DomainError("hensel-sqrt lift lost 2-divisibility");
                    num /= 2;
                    den = a;
                }
                Int inv;
                if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
                    throw DomainError("hensel-sqrt denominator is not invertible");
                Int next = (num * inv) % mod;
                if (next < 0) next += mod;
                hensel_a_.push_back(next);
            }
        }
        const Int& ai = hensel_a_[static_cast<size_t>(i) - 1];
        long beta = vp_int(ai * ai - h->d, h->p) - (h->p == 2 ? 1 : 0);
        Poly chi = Poly(F, {F->from_rat(Rat(-ai)), F->one()});
        return {chi, ExtValue::at_coord(g.rank, coord, Rat(beta))};
    }
    // Geometric: chi_i = x - (t + ... + t^i), beta_i = i + 1.
    Elem s = F->zero();
    Elem t = F->t();
    Elem tp = F->one();
    for (int j = 1; j <= i; ++j) {
        tp = tp * t;
        s = s + tp;
    }
    Poly chi = Poly(F, {-s, F->one()});
    return {chi, ExtValue::at_coord(g.rank, coord, Rat(i + 1))};
}

std::pair<Poly, ExtValue> LimitChain::element(int i) const {
    if (i < 1) throw DomainError("chain elements are indexed from 1");
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<int>(elems_.size()) < i) elems_.push_back(produce_locked(static_cast<int>(elems_.size()) + 1));
    return elems_[static_cast<size_t>(i) - 1];
}

ValuationHandle LimitChain::materialize(int i) const {
    if (i < 0) throw DomainError("negative chain index");
    if (i > max_depth()) throw BudgetExceeded("chain rule exhausted at index " + std::to_string(i));
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (i < static_cast<int>(cache_.size())) return cache_[static_cast<size_t>(i)];
    }
    for (int j = 0; j <= i; ++j) {
        std::lock_guard<std::mutex> lock(mu_);
        if (j < static_cast<int>(cache_.size())) continue;
        while (static_cast<int>(elems_.size()) < j)
            elems_.push_back(produce_locked(static_cast<int>(elems_.size()) + 1));
        const auto& [chi, beta] = elems_[static_cast<size_t>(j) - 1];
        if (chi.deg() != spec_.stable_degree)
            throw DomainError("chain step degree differs from the stable degree");
        const ValuationHandle& prev = cache_.back();
        if (j >= 2) {
            const Poly& prev_chi = elems_[static_cast<size_t>(j) - 2].first;
            if (chi == prev_chi || prev.equivalent_in(chi, prev_chi))
                throw DomainError("chain step chi_" + std::to_string(j) +
                                  " is equivalent to its predecessor");
        }
        cache_.push_back(augment(prev, chi, beta));
    }
    std::lock_guard<std::mutex> lock(mu_);
    return cache_[static_cast<size_t>(i)];
}

std::string StabilityReport::describe() const {
    if (stable) return "stable value " + value.to_string() + " at index " + std::to_string(at_index);
    return "not stabilized within budget " + std::to_string(budget);
}

StabilityReport stable_value(const LimitChain& chain, const Poly& f, int budget) {
    if (budget < 2) throw DomainError("stability probing needs budget >= 2");
    StabilityReport rep;
    rep.budget = budget;
    if (f.deg() < chain.stable_degree()) {
        rep.stable = true;
        rep.value = chain.materialize(0).evaluate(f);
        rep.at_index = 0;
        return rep;
    }
    ExtValue prev = chain.materialize(0).evaluate(f);
    for (int i = 1; i <= budget; ++i) {
        ExtValue cur = chain.materialize(i).evaluate(f);
        if (cur == prev) {
            rep.stable = true;
            rep.value = cur;
            rep.at_index = i;
            return rep;
        }
        prev = cur;
    }
    return rep;
}

LimitValuation::LimitValuation(const LimitChain& chain, Poly phi, ExtValue gamma, int budget)
    : chain_(&chain), phi_(std::move(phi)), gamma_(std::move(gamma)), budget_(budget) {
    if (phi_.deg() < 1 || !phi_.is_monic())
        throw DomainError("limit augmentation needs a monic key of positive degree");
}

ExtValue LimitValuation::evaluate(const Poly& f) const {
    const int r = chain_->group().rank;
    if (f.is_zero()) return ExtValue::infinity(r);
    QExpansion exp = q_expansion(f, phi_);
    ExtValue best = ExtValue::infinity(r);
    for (size_t s = 0; s < exp.digits.size(); ++s) {
        if (exp.digits[s].is_zero()) continue;
        StabilityReport digit = stable_value(*chain_, exp.digits[s], budget_);
        if (!digit.stable)
            throw BudgetExceeded("expansion digit did not stabilize within budget");
        ExtValue term;
        if (s == 0)
            term = digit.value;
        else if (gamma_.is_infinity())
            continue;
        else
            term = digit.value + gamma_.scaled(Rat(static_cast<long>(s)));
        if (term < best) best = term;
    }
    return best;
}

namespace {

// Strictly increasing values across all probed pairs; a repeated value would
// certify stability by the transitivity of chain truncations.
bool verify_nonstable(const LimitChain& chain, const Poly& f, int budget) {
    ExtValue prev = chain.materialize(0).evaluate(f);
    for (int i = 1; i <= budget; ++i) {
        ExtValue cur = chain.materialize(i).evaluate(f);
        if (!(prev < cur)) return false;
        prev = cur;
    }
    return true;
}

} // namespace

NonstableSearch find_nonstable_degree(const LimitChain& chain, int budget, int degree_bound) {
    NonstableSearch out;
    const int m = chain.stable_degree();
    budget = std::min(budget, chain.max_depth());
    if (budget < 2) {
        out.status = NonstableSearch::Status::AllStableWithin;
        out.detail = "chain data too short to witness instability";
        return out;
    }
    if (chain.spec().declared_witness) {
        const Poly& phi = *chain.spec().declared_witness;
        if (!verify_nonstable(chain, phi, budget))
            throw DomainError("declared witness stabilizes within budget");
        for (long b = 1; b <= phi.deg(); ++b) {
            Poly df = hasse_derivative(phi, b);
            if (df.is_zero()) continue;
            if (!stable_value(chain, df, budget).stable)
                throw BudgetExceeded("Hasse derivative of the witness did not stabilize");
        }
        out.status = NonstableSearch::Status::DeclaredVerified;
        out.m_inf = phi.deg();
        out.witness = phi;
        out.exact = true;
        out.essential = phi.deg() > m;
        out.detail = out.essential ? "essential (m_inf > m)" : "inessential (m_inf = m)";
        return out;
    }
    // Undeclared: budgeted grid search for the smallest-degree witness.
    ValuationHandle deep = chain.materialize(std::min(budget, chain.max_depth()));
    std::vector<Elem> pool = small_coefficient_pool(deep);
    const FieldPtr& F = chain.field();
    long candidates = 0;
    for (int d = 1; d <= degree_bound; ++d) {
        std::vector<size_t> idx(static_cast<size_t>(d), 0);
        while (true) {
            std::vector<Elem> coeffs;
            for (int i = 0; i < d; ++i) coeffs.push_back(pool[idx[static_cast<size_t>(i)]]);
            coeffs.push_back(F->one());
            Poly f(F, std::move(coeffs));
            if (++candidates > 2000) break;
            if (!stable_value(chain, f, budget).stable) {
                out.status = NonstableSearch::Status::CandidateFound;
                out.m_inf = d;
                out.witness = f;
                out.exact = false;
                out.essential = d > m;
                out.detail = "smallest non-stabilizing candidate found; m_inf is an upper bound";
                return out;
            }
            int pos = 0;
            while (pos < d) {
                if (++idx[static_cast<size_t>(pos)] < pool.size()) break;
                idx[static_cast<size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == d) break;
        }
        if (candidates > 2000) break;
    }
    out.status = NonstableSearch::Status::AllStableWithin;
    out.detail = "all sampled polynomials stabilized within budget";
    return out;
}

ChainInvariants chain_invariants(const LimitChain& chain, const Poly& phi, int budget) {
    const int m = chain.stable_degree();
    if (phi.deg() <= m)
        throw NotALimitCandidate("witness degree does not exceed the stable degree");
    if (!phi.is_monic()) throw DomainError("limit witness must be monic");
    int depth = std::min(budget, chain.max_depth());
    if (depth < 3) throw DomainError("invariant extraction needs depth >= 3");
    if (!verify_nonstable(chain, phi, depth)) throw NotALimitCandidate("witness is stable");

    ChainInvariants inv;
    inv.m_inf = phi.deg();

    std::vector<QExpansion> exps;
    for (int i = 1; i <= depth; ++i) {
        ValuationHandle rho = chain.materialize(i);
        auto [chi, beta] = chain.element(i);
        inv.beta.push_back(beta);
        auto [val, S] = rho.truncate_eval(chi, phi);
        (void)val;
        inv.t_sequence.push_back(*S.rbegin());
        exps.push_back(q_expansion(phi, chi));
    }
    for (size_t i = 0; i + 1 < inv.t_sequence.size(); ++i)
        if (inv.t_sequence[i] < inv.t_sequence[i + 1])
            throw Error("internal: t-sequence increased along the chain");
    inv.t_inf = inv.t_sequence.back();
    if (inv.t_inf < 1) throw Error("internal: nonpositive numerical character");
    int i0 = depth;
    while (i0 > 1 && inv.t_sequence[static_cast<size_t>(i0) - 2] == inv.t_inf) --i0;
    inv.i0 = i0;
    if (depth - i0 < 1) throw BudgetExceeded("t-sequence stabilization needs more depth");

    // alpha_inf: stable value of the coefficient a_{t,i}; also check that the
    // initial terms of consecutive coefficients agree.
    const Poly& a_t_i0 = exps[static_cast<size_t>(i0) - 1].digits[static_cast<size_t>(inv.t_inf)];
    const Poly& a_t_i1 = exps[static_cast<size_t>(i0)].digits[static_cast<size_t>(inv.t_inf)];
    ValuationHandle rho_i1 = chain.materialize(i0 + 1);
    if (!rho_i1.equivalent_in(a_t_i0, a_t_i1))
        throw BudgetExceeded("stable-coefficient equivalence not yet reached at i0");
    inv.alpha_inf = rho_i1.evaluate(a_t_i0);

    // b_inf via epsilon under a limit augmentation above every rho_i. Values
    // of chi_i stabilize at depth i+1, so the view needs one extra element;
    // explicit chains that cannot supply it lose their deepest epsilon.
    const int lim_budget = std::min(depth + 1, chain.max_depth());
    const int eps_depth = (lim_budget >= depth + 1) ? depth : depth - 1;
    LimitValuation lim(chain, phi, ExtValue::infinity(chain.group().rank), lim_budget);
    for (int i = 1; i <= eps_depth; ++i) {
        auto [chi, beta] = chain.element(i);
        (void)beta;
        EpsilonReport er = epsilon(lim, chi);
        inv.i_sets.push_back(er.i_set);
        inv.epsilon_sequence.push_back(er.epsilon);
    }
    if (inv.i_sets.empty()) throw BudgetExceeded("no epsilon data within budget");
    const std::set<long>& last = inv.i_sets.back();
    if (last.size() != 1) throw BudgetExceeded("I(chi_i) did not stabilize to a singleton");
    inv.b_inf = *last.begin();
    int j0 = eps_depth;
    while (j0 > 1) {
        const std::set<long>& s = inv.i_sets[static_cast<size_t>(j0) - 2];
        if (s.size() == 1 && *s.begin() == inv.b_inf)
            --j0;
        else
            break;
    }
    inv.j0 = j0;
    if (eps_depth - j0 < 1) throw BudgetExceeded("I(chi_i) stabilization needs more depth");

    // delta_inf = rho_inf(d_{b_inf} chi_j), constant for j >= j0.
    {
        auto [chi_j, bj] = chain.element(j0);
        (void)bj;
        StabilityReport d0 = stable_value(chain, hasse_derivative(chi_j, inv.b_inf), depth);
        if (!d0.stable) throw BudgetExceeded("delta_inf digit did not stabilize");
        inv.delta_inf = d0.value;
        auto [chi_j1, bj1] = chain.element(j0 + 1);
        (void)bj1;
        StabilityReport d1 = stable_value(chain, hasse_derivative(chi_j1, inv.b_inf), depth);
        if (!d1.stable || d1.value != inv.delta_inf)
            throw BudgetExceeded("delta_inf not constant across consecutive indices");
    }

    // Classification of (beta_i - beta_{i0}) with the rule's tail descriptor.
    SequenceDescriptor sd;
    sd.group = chain.group();
    const ExtValue& base_beta = inv.beta[static_cast<size_t>(i0) - 1];
    for (int i = i0 + 1; i <= depth; ++i)
        sd.prefix.push_back(inv.beta[static_cast<size_t>(i) - 1] - base_beta);
    const auto& tail = chain.spec().tail;
    try {
        if (std::holds_alternative<ChainSpec::TailNone>(tail)) {
            throw NotClassifiable("no tail descriptor declared for the chain");
        } else if (std::holds_alternative<ChainSpec::TailUnbounded>(tail)) {
            sd.tail = SequenceDescriptor::AssertedSupremum{std::nullopt};
        } else if (const auto* ts = std::get_if<ChainSpec::TailSup>(&tail)) {
            sd.tail = SequenceDescriptor::AssertedSupremum{ts->sup - base_beta};
        } else {
            const auto& ta = std::get<ChainSpec::TailAffine>(tail);
            SequenceDescriptor::AffineTail at;
            at.slope = ta.slope;
            // beta_{i0+n} - beta_{i0} = (base + i0*slope - beta_{i0}) + n*slope
            at.base = ta.base + ta.slope.scaled(Rat(i0)) - base_beta;
            sd.tail = at;
        }
        inv.classification = classify_sequence(sd);
        inv.classified = true;
    } catch (const Error& e) {
        inv.classified = false;
        inv.classify_error = e.what();
    }
    return inv;
}

namespace {

using Status = TheoremCheck::Status;

void push(TheoremReport& rep, const std::string& name, Status st, const std::string& detail = "") {
    rep.lines.push_back({name, st, detail});
}

} // namespace

TheoremReport check_limit_theorems(const LimitChain& chain, const Poly& phi, int budget) {
    TheoremReport rep;
    ChainInvariants inv = chain_invariants(chain, phi, budget);
    const int depth = static_cast<int>(inv.beta.size());
    const int m = chain.stable_degree();
    const long t = inv.t_inf, b = inv.b_inf;

    // t-sequence positivity and monotonicity.
    {
        bool ok = true;
        for (size_t i = 0; i < inv.t_sequence.size(); ++i) {
            if (inv.t_sequence[i] < 1) ok = false;
            if (i + 1 < inv.t_sequence.size() && inv.t_sequence[i] < inv.t_sequence[i + 1])
                ok = false;
        }
        push(rep, "t-sequence positive and non-increasing", ok ? Status::Pass : Status::Fail);
    }

    // S_{rho_i,chi_i}(phi) = {0, t_inf} for i >= i0.
    {
        bool ok = true;
        for (int i = inv.i0; i <= depth; ++i) {
            auto [chi, beta] = chain.element(i);
            (void)beta;
            auto [val, S] = chain.materialize(i).truncate_eval(chi, phi);
            (void)val;
            if (S != std::set<long>({0, t})) ok = false;
        }
        push(rep, "support set: S(phi) = {0, t_inf} beyond i0", ok ? Status::Pass : Status::Fail);
    }

    // power form: phi ~_{rho_i} a_{t,j} chi_j^t for i0 < i < j.
    {
        bool ok = true, ran = false;
        for (int i = inv.i0 + 1; i < depth && i <= inv.i0 + 2; ++i)
            for (int j = i + 1; j <= depth; ++j) {
                auto [chi_j, bj] = chain.element(j);
                (void)bj;
                Poly a_tj = q_expansion(phi, chi_j).digits[static_cast<size_t>(t)];
                Poly rhs = a_tj * chi_j.pow(t);
                if (!chain.materialize(i).equivalent_in(phi, rhs)) ok = false;
                ran = true;
            }
        push(rep, "power form: phi ~ a_t * chi_j^t", !ran ? Status::Skip : ok ? Status::Pass : Status::Fail);
    }

    // Residual normalization R_i(chi_i) = 1, R_i(chi_{i+1}) = y+1, and
    // R_i(phi) = (y+1)^{t_inf}, with u_i = chi_{i+1} - chi_i.
    {
        bool ok = true, ran = false;
        std::string detail;
        try {
            for (int i = std::max(1, inv.i0); i < std::min(depth, std::max(1, inv.i0) + 2); ++i) {
                ValuationHandle rho = chain.materialize(i);
                if (!rho.residual_available()) continue;
                auto [chi_i, bi] = chain.element(i);
                auto [chi_i1, bi1] = chain.element(i + 1);
                (void)bi;
                (void)bi1;
                Poly u = chi_i1 - chi_i;
                RFPtr kap = rho.kappa_top();
                auto r_self = rho.residual_coeffs(chi_i, u, chi_i);
                auto r_next = rho.residual_coeffs(chi_i, u, chi_i1);
                auto r_phi = rho.residual_coeffs(chi_i, u, phi);
                RPoly one = rp_one(kap);
                RPoly yplus1 = rp_make(kap, {kap->one(), kap->one()});
                if (!(rp_make(kap, r_self) == one)) ok = false;
                if (!(rp_make(kap, r_next) == yplus1)) ok = false;
                if (!(rp_make(kap, r_phi) == rp_pow(yplus1, t))) ok = false;
                ran = true;
            }
        } catch (const ResidualUnavailable& e) {
            ran = false;
            detail = e.what();
        }
        push(rep, "residual: R_i(chi_i)=1, R_i(chi_{i+1})=y+1, R_i(phi)=(y+1)^t",
             !ran ? Status::Skip : ok ? Status::Pass : Status::Fail, detail);
    }

    // bt >= mult(phi) always.
    long ml = multiplicity(phi);
    push(rep, "lower bound: t_inf*b_inf >= mult(phi)", t * b >= ml ? Status::Pass : Status::Fail,
         std::to_string(t) + "*" + std::to_string(b) + " vs " + std::to_string(ml));

    // Classification-dependent identities.
    if (!inv.classified) {
        push(rep, "classification", Status::Skip, inv.classify_error);
        push(rep, "unbounded: t_inf*b_inf = mult(phi)", Status::Skip, "chain not classified");
        push(rep, "vertically bounded: m_inf = m*t_inf and alpha_inf = 0", Status::Skip,
             "chain not classified");
    } else {
        push(rep, "classification", Status::Pass,
             to_string(inv.classification.cls) + ", H_S = coordinate " +
                 std::to_string(inv.classification.hs_index));
        switch (inv.classification.cls) {
            case Boundedness::UB: {
                push(rep, "unbounded: t_inf*b_inf = mult(phi)",
                     t * b == ml ? Status::Pass : Status::Fail,
                     std::to_string(t) + "*" + std::to_string(b) + " = " + std::to_string(ml));
                if (chain.field()->characteristic() == 0)
                    push(rep, "characteristic zero: t_inf = b_inf = 1",
                         (t == 1 && b == 1) ? Status::Pass : Status::Fail);
                else
                    push(rep, "characteristic zero: t_inf = b_inf = 1", Status::Skip, "char K > 0");
                push(rep, "vertically bounded: m_inf = m*t_inf and alpha_inf = 0", Status::Skip,
                     "chain is not vertically bounded");
                break;
            }
            case Boundedness::VB: {
                bool ok = inv.m_inf == m * t && inv.alpha_inf.is_zero();
                push(rep, "vertically bounded: m_inf = m*t_inf and alpha_inf = 0",
                     ok ? Status::Pass : Status::Fail);
                push(rep, "unbounded: t_inf*b_inf = mult(phi)", Status::Skip,
                     "beta sequence is bounded");
                break;
            }
            default: { // HB: both behaviours occur, so report without asserting
                push(rep, "horizontally bounded: t_inf*b_inf vs mult(phi) (reported only)", Status::Skip,
                     std::to_string(t * b) + " vs " + std::to_string(ml));
                break;
            }
        }
    }

    // Eq. di: epsilon_{j+1} - epsilon_j = (beta_{j+1} - beta_j)/b_inf, j >= j0.
    {
        bool ok = true, ran = false;
        for (int j = inv.j0; j < static_cast<int>(inv.epsilon_sequence.size()); ++j) {
            ExtValue lhs = inv.epsilon_sequence[static_cast<size_t>(j)] -
                           inv.epsilon_sequence[static_cast<size_t>(j) - 1];
            ExtValue rhs = (inv.beta[static_cast<size_t>(j)] - inv.beta[static_cast<size_t>(j) - 1])
                               .scaled(Rat(1, b));
            if (lhs != rhs) ok = false;
            ran = true;
        }
        push(rep, "epsilon increments track beta increments / b_inf",
             !ran ? Status::Skip : ok ? Status::Pass : Status::Fail);
    }

    // Limit-key chain conditions, checked at finite depth.
    push(rep, "constant chain degree", Status::Pass, "deg chi_i = " + std::to_string(m));
    push(rep, "beta_i strictly increasing with no asserted maximum", Status::Pass,
         "verified to depth " + std::to_string(depth));
    {
        bool ok = true;
        ExtValue prev = chain.materialize(inv.i0).evaluate(phi);
        for (int i = inv.i0 + 1; i <= depth; ++i) {
            ExtValue cur = chain.materialize(i).evaluate(phi);
            if (!(prev < cur)) ok = false;
            prev = cur;
        }
        push(rep, "truncations undervalue phi", ok ? Status::Pass : Status::Fail);
    }
    push(rep, "witness degree minimal among non-stable polynomials",
         chain.spec().declared_witness ? Status::Pass : Status::Skip,
         chain.spec().declared_witness ? "declared witness" : "no declared witness");

    // Two limit witnesses are eventually equivalent.
    if (chain.spec().second_witness) {
        const Poly& psi = *chain.spec().second_witness;
        bool ok = verify_nonstable(chain, psi, depth) && psi.deg() == inv.m_inf;
        if (ok)
            for (int i = inv.i0 + 1; i <= depth; ++i)
                if (!chain.materialize(i).equivalent_in(phi, psi)) ok = false;
        push(rep, "witness uniqueness: declared witnesses are eventually equivalent",
             ok ? Status::Pass : Status::Fail);
    } else {
        push(rep, "witness uniqueness: declared witnesses are eventually equivalent", Status::Skip,
             "no second witness bundled");
    }

    return rep;
}

} // namespace keyforge
