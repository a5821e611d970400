#include "keyforge/session.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "keyforge/parse.hpp"

namespace keyforge {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw DomainError("config: " + msg); }

FieldPtr load_field(const json& j) {
    if (!j.is_object() || !j.contains("kind")) bad("base_field needs a kind");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "rationals") return Field::rationals();
    if (kind == "finite") {
        long p = j.at("p").get<long>();
        std::vector<long> modulus;
        if (j.contains("modulus")) modulus = j.at("modulus").get<std::vector<long>>();
        if (modulus.empty()) return Field::finite_prime(p);
        return Field::finite(p, modulus);
    }
    if (kind == "rational-functions" || kind == "rational_functions") {
        char var = 't';
        if (j.contains("variable")) {
            std::string v = j.at("variable").get<std::string>();
            if (v.size() != 1 || v == "x") bad("variable must be a single symbol other than x");
            var = v[0];
        }
        if (!j.contains("coefficient")) bad("rational-functions needs a coefficient field");
        const json& cj = j.at("coefficient");
        std::string ckind = cj.at("kind").get<std::string>();
        if (ckind == "rationals") return Field::rational_functions_q(var);
        if (ckind == "finite") {
            long p = cj.at("p").get<long>();
            std::vector<long> modulus;
            if (cj.contains("modulus")) modulus = cj.at("modulus").get<std::vector<long>>();
            FieldPtr inner = modulus.empty() ? Field::finite_prime(p) : Field::finite(p, modulus);
            return Field::rational_functions_f(inner->fq, var);
        }
        bad("coefficient field must be rationals or finite");
    }
    bad("unknown base_field kind '" + kind + "'");
}

BaseValuation load_valuation(const json& j, const FieldPtr& F, const GroupDescriptor& g) {
    if (!j.is_object() || !j.contains("kind")) bad("base_valuation needs a kind");
    std::string kind = j.at("kind").get<std::string>();
    int coord = j.value("embedding_coordinate", 1);
    if (kind == "p-adic" || kind == "p_adic") {
        long p = j.at("p").get<long>();
        return BaseValuation::padic(F, p, g, coord);
    }
    if (kind == "t-adic" || kind == "t_adic") return BaseValuation::tadic(F, g, coord);
    if (kind == "trivial") return BaseValuation::trivial(F, g);
    bad("unknown base_valuation kind '" + kind + "'");
}

std::shared_ptr<LimitChain> load_chain(const json& j, const SessionConfig& s) {
    ChainSpec spec;
    spec.base = s.nu;
    spec.stable_degree = j.value("stable_degree", 1);
    std::string rule = j.at("rule").get<std::string>();
    if (rule == "hensel-sqrt") {
        ChainSpec::HenselSqrt h;
        h.p = j.at("p").get<long>();
        h.d = Int(j.at("d").get<std::string>());
        h.seed = Int(j.value("seed", std::string("1")));
        spec.rule = h;
    } else if (rule == "geometric") {
        spec.rule = ChainSpec::Geometric{};
    } else if (rule == "explicit") {
        ChainSpec::Explicit ex;
        for (const auto& st : j.at("steps")) {
            Poly chi = parse_poly(s.field, st.at("chi").get<std::string>());
            ExtValue beta = parse_value(s.group, st.at("beta").get<std::string>());
            ex.steps.emplace_back(std::move(chi), std::move(beta));
        }
        if (!ex.steps.empty()) spec.stable_degree = ex.steps.front().first.deg();
        spec.rule = std::move(ex);
    } else {
        bad("unknown limit_chain rule '" + rule + "'");
    }
    if (j.contains("declared_witness"))
        spec.declared_witness = parse_poly(s.field, j.at("declared_witness").get<std::string>());
    if (j.contains("second_witness"))
        spec.second_witness = parse_poly(s.field, j.at("second_witness").get<std::string>());
    if (j.contains("tail")) {
        const json& tj = j.at("tail");
        std::string tk = tj.at("kind").get<std::string>();
        if (tk == "unbounded") {
            spec.tail = ChainSpec::TailUnbounded{};
        } else if (tk == "supremum") {
            spec.tail = ChainSpec::TailSup{parse_value(s.group, tj.at("value").get<std::string>())};
        } else if (tk == "affine") {
            ChainSpec::TailAffine ta;
            ta.base = parse_value(s.group, tj.at("base").get<std::string>());
            ta.slope = parse_value(s.group, tj.at("slope").get<std::string>());
            spec.tail = ta;
        } else if (tk == "none") {
            spec.tail = ChainSpec::TailNone{};
        } else {
            bad("unknown tail kind '" + tk + "'");
        }
    }
    return std::make_shared<LimitChain>(std::move(spec));
}

} // namespace

SessionConfig load_session(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("top level must be an object");
    if (j.value("version", 0) != 1) bad("unsupported config version (expected 1)");

    SessionConfig s;
    s.field = load_field(j.at("base_field"));
    s.group.rank = j.value("ambient_rank", 1);
    if (s.group.rank < 1) bad("ambient_rank must be >= 1");
    s.base = load_valuation(j.at("base_valuation"), s.field, s.group);

    if (!j.contains("chain") || !j.at("chain").is_array() || j.at("chain").empty())
        bad("chain must be a nonempty list of {phi, gamma} entries");
    bool first = true;
    for (const auto& entry : j.at("chain")) {
        Poly phi = parse_poly(s.field, entry.at("phi").get<std::string>());
        ExtValue gamma = parse_value(s.group, entry.at("gamma").get<std::string>());
        if (first) {
            s.nu = make_degree_one(s.base, phi, gamma);
            first = false;
        } else {
            s.nu = augment(s.nu, phi, gamma);
        }
    }
    if (j.contains("limit_chain")) s.chain = load_chain(j.at("limit_chain"), s);
    return s;
}

SessionConfig load_session_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_session(ss.str());
}

} // namespace keyforge
