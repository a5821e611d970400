#include "keyforge/cli.hpp"

#include <algorithm>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "keyforge/keypoly.hpp"
#include "keyforge/limitchain.hpp"
#include "keyforge/parse.hpp"
#include "keyforge/session.hpp"

namespace keyforge {

using nlohmann::json;

namespace {

std::string set_str(const std::set<long>& s) {
    std::string out = "{";
    bool first = true;
    for (long b : s) {
        if (!first) out += ", ";
        out += std::to_string(b);
        first = false;
    }
    return out + "}";
}

json value_table_json(const EpsilonReport& rep) {
    json t = json::object();
    for (const auto& [b, row] : rep.table) {
        json r;
        r["derivative_value"] = row.derivative_value.to_string();
        if (row.quotient) r["quotient"] = row.quotient->to_string();
        t[std::to_string(b)] = r;
    }
    return t;
}

const char* status_str(TheoremCheck::Status s) {
    switch (s) {
        case TheoremCheck::Status::Pass: return "PASS";
        case TheoremCheck::Status::Fail: return "FAIL";
        default: return "SKIP";
    }
}

int require_chain(const SessionConfig& s, std::ostream& err) {
    if (!s.chain) {
        err << "error: this command needs a limit_chain section in the config\n";
        return 2;
    }
    return 0;
}

Poly chain_witness(const SessionConfig& s, const std::string& witness_str) {
    if (!witness_str.empty()) return parse_poly(s.field, witness_str);
    if (s.chain->spec().declared_witness) return *s.chain->spec().declared_witness;
    throw DomainError("no witness given and none declared in the config");
}

// ------------------------------------------------------------- selftest ----

struct Suite {
    std::string name;
    bool ok = true;
    std::string detail;
};

Poly random_poly(const FieldPtr& F, int maxdeg, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> ddist(0, maxdeg);
    std::uniform_int_distribution<long> cdist(-9, 9);
    int d = ddist(rng);
    std::vector<Elem> coeffs;
    for (int i = 0; i <= d; ++i) {
        Elem c = F->from_int(cdist(rng));
        if (F->kind == Field::Kind::RatFuncQ || F->kind == Field::Kind::RatFuncF) {
            std::uniform_int_distribution<int> tdist(0, 2);
            Elem t = F->t();
            c = c + F->from_int(cdist(rng)) * t.pow(tdist(rng));
        }
        coeffs.push_back(c);
    }
    return Poly(F, std::move(coeffs));
}

Suite suite_classification_table() {
    Suite s{"rank-2 classification table"};
    GroupDescriptor g{2};
    auto mk = [](const Rat& a, const Rat& b) { return ExtValue::of({a, b}); };
    try {
        // (0, 1 - 1/n): prefix with asserted supremum (0,1) -> VB
        SequenceDescriptor row1;
        row1.group = g;
        row1.prefix = {mk(0, rat_of(1, 2)), mk(0, rat_of(2, 3)), mk(0, rat_of(3, 4))};
        row1.tail = SequenceDescriptor::AssertedSupremum{mk(0, 1)};
        auto c1 = classify_sequence(row1);
        s.ok &= c1.cls == Boundedness::VB && c1.hs_index == 2;
        // (1, n) -> VB with H_S the whole group
        SequenceDescriptor row2;
        row2.group = g;
        row2.tail = SequenceDescriptor::AffineTail{mk(1, 0), mk(0, 1)};
        auto c2 = classify_sequence(row2);
        s.ok &= c2.cls == Boundedness::VB && c2.hs_index == 1;
        // (0, n) -> HB
        SequenceDescriptor row3;
        row3.group = g;
        row3.tail = SequenceDescriptor::AffineTail{mk(0, 0), mk(0, 1)};
        auto c3 = classify_sequence(row3);
        s.ok &= c3.cls == Boundedness::HB && c3.hs_index == 2;
        // (n, 0) -> UB
        SequenceDescriptor row4;
        row4.group = g;
        row4.tail = SequenceDescriptor::AffineTail{mk(0, 0), mk(1, 0)};
        auto c4 = classify_sequence(row4);
        s.ok &= c4.cls == Boundedness::UB && c4.hs_index == 1;
    } catch (const Error& e) {
        s.ok = false;
        s.detail = e.what();
    }
    return s;
}

Suite suite_valuation_axioms(unsigned long seed) {
    Suite s{"valuation axioms on bundled fixtures"};
    try {
        std::mt19937_64 rng(seed);
        std::vector<ValuationHandle> fixtures;
        {
            auto F = Field::rationals();
            auto v2 = BaseValuation::padic(F, 2, GroupDescriptor{1});
            auto mu = make_degree_one(v2, Poly::x(F), ExtValue::rank1(rat_of(1, 2)));
            fixtures.push_back(augment(mu, Poly::from_ints(F, {2, 0, 1}), ExtValue::rank1(rat_of(3, 2))));
        }
        {
            auto F = Field::rational_functions_f(RFCtx::prime_field(3));
            auto vt = BaseValuation::tadic(F, GroupDescriptor{1});
            auto mu = make_degree_one(vt, Poly::x(F), ExtValue::rank1(rat_of(1, 2)));
            Poly phi(F, {F->from_int(-1) * F->t(), F->zero(), F->one()}); // x^2 - t
            fixtures.push_back(augment(mu, phi, ExtValue::rank1(rat_of(3, 2))));
        }
        for (const auto& nu : fixtures) {
            const FieldPtr& F = nu.field();
            for (int i = 0; i < 100 && s.ok; ++i) {
                Poly f = random_poly(F, 5, rng);
                Poly g = random_poly(F, 5, rng);
                if (f.is_zero() || g.is_zero()) continue;
                if (nu.evaluate(f * g) != nu.evaluate(f) + nu.evaluate(g)) {
                    s.ok = false;
                    s.detail = "multiplicativity failed for " + f.to_string() + " , " + g.to_string();
                }
                ExtValue lhs = nu.evaluate(f + g);
                ExtValue rhs = std::min(nu.evaluate(f), nu.evaluate(g));
                if (lhs < rhs) {
                    s.ok = false;
                    s.detail = "ultrametric inequality failed";
                }
            }
        }
    } catch (const Error& e) {
        s.ok = false;
        s.detail = e.what();
    }
    return s;
}

Suite suite_epsilon_law(unsigned long seed) {
    Suite s{"epsilon(fg) = max(epsilon f, epsilon g)"};
    try {
        std::mt19937_64 rng(seed + 1);
        auto F = Field::rationals();
        auto v2 = BaseValuation::padic(F, 2, GroupDescriptor{1});
        auto mu = make_degree_one(v2, Poly::x(F), ExtValue::rank1(rat_of(1, 2)));
        auto nu = augment(mu, Poly::from_ints(F, {2, 0, 1}), ExtValue::rank1(rat_of(3, 2)));
        for (int i = 0; i < 60 && s.ok; ++i) {
            Poly f = random_poly(F, 4, rng);
            Poly g = random_poly(F, 4, rng);
            if (f.deg() < 1 || g.deg() < 1) continue;
            ExtValue lhs = epsilon(nu, f * g).epsilon;
            ExtValue rhs = std::max(epsilon(nu, f).epsilon, epsilon(nu, g).epsilon);
            if (lhs != rhs) {
                s.ok = false;
                s.detail = "failed for " + f.to_string() + " , " + g.to_string();
            }
        }
    } catch (const Error& e) {
        s.ok = false;
        s.detail = e.what();
    }
    return s;
}

Suite suite_residual_anchors() {
    Suite s{"residual anchors R_i(chi_i)=1, R_i(chi_{i+1})=y+1"};
    try {
        for (long p : {2L, 3L}) {
            auto F = Field::rationals();
            auto vp = BaseValuation::padic(F, p, GroupDescriptor{1});
            ChainSpec spec;
            spec.base = make_degree_one(vp, Poly::x(F), ExtValue::rank1(Rat(0)));
            spec.rule = ChainSpec::HenselSqrt{p, Int(p == 2 ? 17 : 7), Int(p == 2 ? 1 : 1)};
            LimitChain chain(std::move(spec));
            for (int i = 1; i <= 3 && s.ok; ++i) {
                ValuationHandle rho = chain.materialize(i);
                Poly chi = chain.element(i).first;
                Poly chi1 = chain.element(i + 1).first;
                Poly u = chi1 - chi;
                RFPtr kap = rho.kappa_top();
                if (!(rp_make(kap, rho.residual_coeffs(chi, u, chi)) == rp_one(kap))) s.ok = false;
                if (!(rp_make(kap, rho.residual_coeffs(chi, u, chi1)) ==
                      rp_make(kap, {kap->one(), kap->one()})))
                    s.ok = false;
            }
        }
    } catch (const Error& e) {
        s.ok = false;
        s.detail = e.what();
    }
    return s;
}

Suite suite_parse_roundtrip() {
    Suite s{"parser round-trips"};
    try {
        auto Fq = Field::rationals();
        auto F3t = Field::rational_functions_f(RFCtx::prime_field(3));
        struct Case {
            FieldPtr F;
            std::string text;
        };
        std::vector<Case> cases = {
            {Fq, "x^3 - 2*x + 1"},
            {Fq, "(1/2)*x^2 + 7"},
            {Fq, "x^2 + 2"},
            {Fq, "-x^4 + 3*x - 1/3"},
            {F3t, "x^2 - t"},
            {F3t, "x - t/(1 - t)"},
            {F3t, "(t^2 + 1)*x + t"},
        };
        for (const auto& c : cases) {
            Poly p = parse_poly(c.F, c.text);
            Poly q = parse_poly(c.F, p.to_string());
            if (!(p == q)) {
                s.ok = false;
                s.detail = "round-trip failed for '" + c.text + "' -> '" + p.to_string() + "'";
            }
        }
        GroupDescriptor g2{2};
        for (const std::string v : {"(1/2,-3)", "(0,1)", "inf"}) {
            ExtValue e = parse_value(g2, v);
            if (parse_value(g2, e.to_string()) != e) s.ok = false;
        }
    } catch (const Error& e) {
        s.ok = false;
        s.detail = e.what();
    }
    return s;
}

} // namespace

int selftest(unsigned long seed, std::ostream& out) {
    std::vector<Suite> suites;
    suites.push_back(suite_classification_table());
    suites.push_back(suite_valuation_axioms(seed));
    suites.push_back(suite_epsilon_law(seed));
    suites.push_back(suite_residual_anchors());
    suites.push_back(suite_parse_roundtrip());
    int failures = 0;
    for (const auto& s : suites) {
        out << (s.ok ? "[ok]   " : "[FAIL] ") << s.name;
        if (!s.ok && !s.detail.empty()) out << "  (" << s.detail << ")";
        out << "\n";
        if (!s.ok) ++failures;
    }
    return failures;
}

// ------------------------------------------------------------- commands ----

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"keyforge: exact valuations on K[x] from MacLane augmentation chains"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit a single JSON document");

    std::string config_path, f_str, q_str, phi_str, u_str, witness_str;
    long budget = 2000;
    int chain_budget = 6;
    unsigned long seed = 12345;

    auto add_config = [&config_path](CLI::App* cmd) {
        cmd->add_option("config", config_path, "session config (JSON)")->required();
    };

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate nu(f)");
    eval_cmd->add_option("-f,--poly", f_str, "polynomial")->required();
    add_config(eval_cmd);

    CLI::App* expand_cmd = app.add_subcommand("expand", "canonical Q-expansion of f");
    expand_cmd->add_option("-f,--poly", f_str, "polynomial")->required();
    expand_cmd->add_option("-q,--base", q_str, "expansion base Q")->required();
    add_config(expand_cmd);

    CLI::App* eps_cmd = app.add_subcommand("epsilon", "epsilon(f) and I(f)");
    eps_cmd->add_option("-f,--poly", f_str, "polynomial")->required();
    add_config(eps_cmd);

    CLI::App* iskey_cmd = app.add_subcommand("iskey", "abstract-key certificate for Q");
    iskey_cmd->add_option("-q,--poly", q_str, "candidate key polynomial")->required();
    iskey_cmd->add_option("--budget", budget, "falsifier budget");
    add_config(iskey_cmd);

    CLI::App* res_cmd = app.add_subcommand("residual", "residual polynomial R(f)");
    res_cmd->add_option("-f,--poly", f_str, "polynomial")->required();
    res_cmd->add_option("--phi", phi_str, "minimal-degree key (defaults to the chain key)");
    res_cmd->add_option("--u", u_str, "normalizer (defaults to the stored one)");
    add_config(res_cmd);

    CLI::App* chain_cmd = app.add_subcommand("chain", "continuous-chain operations");
    chain_cmd->require_subcommand(1);
    CLI::App* inv_cmd = chain_cmd->add_subcommand("invariants", "limit invariants of the chain");
    inv_cmd->add_option("--witness", witness_str, "limit key witness (defaults to declared)");
    inv_cmd->add_option("--budget", chain_budget, "materialization depth");
    add_config(inv_cmd);
    CLI::App* cls_cmd = chain_cmd->add_subcommand("classify", "VB/HB/UB class of the chain");
    cls_cmd->add_option("--budget", chain_budget, "materialization depth");
    add_config(cls_cmd);
    CLI::App* chk_cmd = chain_cmd->add_subcommand("check", "limit-theorem identities");
    chk_cmd->add_option("--witness", witness_str, "limit key witness (defaults to declared)");
    chk_cmd->add_option("--budget", chain_budget, "materialization depth");
    add_config(chk_cmd);

    CLI::App* self_cmd = app.add_subcommand("selftest", "run the bundled property suites");
    self_cmd->add_option("--seed", seed, "random seed");

    std::vector<const char*> argv;
    argv.push_back("keyforge");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (self_cmd->parsed()) {
            int failures = selftest(seed, out);
            return failures == 0 ? 0 : 1;
        }
        SessionConfig s = load_session_file(config_path);
        json doc;
        doc["command"] = app.get_subcommands().front()->get_name();

        if (eval_cmd->parsed()) {
            Poly f = parse_poly(s.field, f_str);
            ExtValue v = s.nu.evaluate(f);
            if (as_json) {
                doc["f"] = f.to_string();
                doc["value"] = v.to_string();
                out << doc.dump(2) << "\n";
            } else {
                out << "nu(" << f.to_string() << ") = " << v.to_string() << "\n";
            }
            return 0;
        }
        if (expand_cmd->parsed()) {
            Poly f = parse_poly(s.field, f_str);
            Poly Q = parse_poly(s.field, q_str);
            QExpansion exp = q_expansion(f, Q);
            if (as_json) {
                doc["f"] = f.to_string();
                doc["q"] = Q.to_string();
                json digits = json::array();
                for (const auto& d : exp.digits) digits.push_back(d.to_string());
                doc["digits"] = digits;
                out << doc.dump(2) << "\n";
            } else {
                for (size_t i = 0; i < exp.digits.size(); ++i)
                    out << "a_" << i << " = " << exp.digits[i].to_string() << "\n";
            }
            return 0;
        }
        if (eps_cmd->parsed()) {
            Poly f = parse_poly(s.field, f_str);
            EpsilonReport rep = epsilon(s.nu, f);
            if (as_json) {
                doc["f"] = f.to_string();
                doc["epsilon"] = rep.epsilon.to_string();
                json iset = json::array();
                for (long b : rep.i_set) iset.push_back(b);
                doc["i_set"] = iset;
                doc["table"] = value_table_json(rep);
                out << doc.dump(2) << "\n";
            } else {
                out << "epsilon = " << rep.epsilon.to_string() << ", I = " << set_str(rep.i_set)
                    << "\n";
            }
            return 0;
        }
        if (iskey_cmd->parsed()) {
            Poly Q = parse_poly(s.field, q_str);
            KeyCertificate cert = is_abstract_key(s.nu, Q, budget);
            std::string verdict = cert.yes() ? "Yes" : cert.no() ? "No" : "Undetermined";
            if (as_json) {
                doc["q"] = Q.to_string();
                doc["verdict"] = verdict;
                doc["route"] = cert.route_name();
                doc["maximal"] = cert.maximal;
                if (cert.counterexample) doc["counterexample"] = cert.counterexample->to_string();
                if (!cert.detail.empty()) doc["detail"] = cert.detail;
                doc["budget_used"] = cert.budget_used;
                out << doc.dump(2) << "\n";
            } else {
                out << verdict << " via " << cert.route_name();
                if (cert.maximal) out << " (maximal)";
                if (cert.counterexample)
                    out << "; counterexample " << cert.counterexample->to_string();
                if (!cert.detail.empty()) out << "; " << cert.detail;
                out << "\n";
            }
            return cert.no() ? 1 : 0;
        }
        if (res_cmd->parsed()) {
            Poly f = parse_poly(s.field, f_str);
            Poly phi = phi_str.empty() ? s.nu.key_poly() : parse_poly(s.field, phi_str);
            Poly u = u_str.empty() ? s.nu.normalizer_top() : parse_poly(s.field, u_str);
            ResidualPoly R = residual_polynomial(s.nu, phi, u, f);
            if (as_json) {
                doc["f"] = f.to_string();
                doc["phi"] = phi.to_string();
                doc["u"] = u.to_string();
                doc["residual"] = R.to_string();
                doc["kappa"] = R.kappa->describe();
                out << doc.dump(2) << "\n";
            } else {
                out << "R(" << f.to_string() << ") = " << R.to_string() << " over "
                    << R.kappa->describe() << "\n";
            }
            return 0;
        }
        if (inv_cmd->parsed()) {
            if (int rc = require_chain(s, err)) return rc;
            Poly phi = chain_witness(s, witness_str);
            ChainInvariants inv = chain_invariants(*s.chain, phi, chain_budget);
            if (as_json) {
                doc["witness"] = phi.to_string();
                doc["t_inf"] = inv.t_inf;
                doc["alpha_inf"] = inv.alpha_inf.to_string();
                doc["b_inf"] = inv.b_inf;
                doc["delta_inf"] = inv.delta_inf.to_string();
                doc["m_inf"] = inv.m_inf;
                doc["i0"] = inv.i0;
                json ts = json::array();
                for (long t : inv.t_sequence) ts.push_back(t);
                doc["t_sequence"] = ts;
                json bs = json::array();
                for (const auto& b : inv.beta) bs.push_back(b.to_string());
                doc["beta"] = bs;
                json es = json::array();
                for (const auto& e : inv.epsilon_sequence) es.push_back(e.to_string());
                doc["epsilon_sequence"] = es;
                doc["classification"] =
                    inv.classified ? to_string(inv.classification.cls) : "unclassified";
                if (inv.classified) doc["hs_index"] = inv.classification.hs_index;
                out << doc.dump(2) << "\n";
            } else {
                out << "m_inf = " << inv.m_inf << ", t_inf = " << inv.t_inf
                    << ", alpha_inf = " << inv.alpha_inf.to_string() << ", b_inf = " << inv.b_inf
                    << ", delta_inf = " << inv.delta_inf.to_string() << "\n";
                out << "t_sequence =";
                for (long t : inv.t_sequence) out << " " << t;
                out << "\nbeta =";
                for (const auto& b : inv.beta) out << " " << b.to_string();
                out << "\n";
                if (inv.classified)
                    out << to_string(inv.classification.cls) << ", H_S = coordinate "
                        << inv.classification.hs_index << "\n";
                else
                    out << "classification refused: " << inv.classify_error << "\n";
            }
            return 0;
        }
        if (cls_cmd->parsed()) {
            if (int rc = require_chain(s, err)) return rc;
            SeqClassification cls;
            if (s.chain->spec().declared_witness) {
                ChainInvariants inv =
                    chain_invariants(*s.chain, *s.chain->spec().declared_witness, chain_budget);
                if (!inv.classified) throw NotClassifiable(inv.classify_error);
                cls = inv.classification;
            } else {
                // classify the raw beta differences from the first element
                SequenceDescriptor sd;
                sd.group = s.group;
                int depth = std::min(chain_budget, s.chain->max_depth());
                ExtValue b1 = s.chain->element(1).second;
                for (int i = 2; i <= depth; ++i) sd.prefix.push_back(s.chain->element(i).second - b1);
                const auto& tail = s.chain->spec().tail;
                if (std::holds_alternative<ChainSpec::TailUnbounded>(tail))
                    sd.tail = SequenceDescriptor::AssertedSupremum{std::nullopt};
                else if (const auto* ts = std::get_if<ChainSpec::TailSup>(&tail))
                    sd.tail = SequenceDescriptor::AssertedSupremum{ts->sup - b1};
                else if (const auto* ta = std::get_if<ChainSpec::TailAffine>(&tail))
                    sd.tail = SequenceDescriptor::AffineTail{ta->base + ta->slope - b1, ta->slope};
                cls = classify_sequence(sd);
            }
            if (as_json) {
                doc["class"] = to_string(cls.cls);
                doc["hs_index"] = cls.hs_index;
                doc["witness"] = cls.witness;
                out << doc.dump(2) << "\n";
            } else {
                out << to_string(cls.cls) << ", H_S = coordinate " << cls.hs_index << "\n";
            }
            return 0;
        }
        if (chk_cmd->parsed()) {
            if (int rc = require_chain(s, err)) return rc;
            Poly phi = chain_witness(s, witness_str);
            TheoremReport rep = check_limit_theorems(*s.chain, phi, chain_budget);
            if (as_json) {
                json lines = json::array();
                for (const auto& l : rep.lines) {
                    json jl;
                    jl["name"] = l.name;
                    jl["status"] = status_str(l.status);
                    if (!l.detail.empty()) jl["detail"] = l.detail;
                    lines.push_back(jl);
                }
                doc["checks"] = lines;
                doc["all_passed"] = rep.all_passed();
                out << doc.dump(2) << "\n";
            } else {
                for (const auto& l : rep.lines) {
                    out << "[" << status_str(l.status) << "] " << l.name;
                    if (!l.detail.empty()) out << "  (" << l.detail << ")";
                    out << "\n";
                }
            }
            return rep.all_passed() ? 0 : 1;
        }
        err << "usage error: no subcommand selected\n";
        return 2;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace keyforge
