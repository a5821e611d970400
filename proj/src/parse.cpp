#include "keyforge/parse.hpp"

#include <cctype>

namespace keyforge {

namespace {

class PolyParser {
public:
    PolyParser(FieldPtr F, const std::string& text) : F_(std::move(F)), s_(text) {}

    Poly parse() {
        Poly p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        int line = 1, col = 1;
        for (size_t i = 0; i < pos_ && i < s_.size(); ++i) {
            if (s_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Poly expr() {
        Poly acc = term();
        while (true) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    Poly term() {
        Poly acc = factor();
        while (true) {
            if (eat('*')) {
                acc = acc * factor();
            } else if (eat('/')) {
                Poly d = factor();
                if (d.deg() > 0) fail("division by a polynomial in x");
                if (d.is_zero()) fail("division by zero");
                acc = acc.scaled(d.at(0).inverse());
            } else {
                return acc;
            }
        }
    }

    Poly factor() {
        bool neg = false;
        while (true) {
            if (eat('-'))
                neg = !neg;
            else if (eat('+'))
                ;
            else
                break;
        }
        Poly a = atom();
        skip_ws();
        if (eat('^')) {
            long e = parse_uint();
            a = a.pow(e);
        }
        return neg ? -a : a;
    }

    long parse_uint() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            fail("expected an exponent");
        long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > 1000000) fail("exponent too large");
            ++pos_;
        }
        return v;
    }

    Poly atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (c == 'x') {
            ++pos_;
            return Poly::x(F_);
        }
        if (c == F_->var &&
            (F_->kind == Field::Kind::RatFuncQ || F_->kind == Field::Kind::RatFuncF)) {
            ++pos_;
            return Poly::constant(F_->t());
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int n(0);
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                n = n * 10 + (s_[pos_] - '0');
                ++pos_;
            }
            return Poly::constant(F_->from_bigint(n));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unknown symbol '") + c + "'");
        fail("unexpected character");
    }

    FieldPtr F_;
    const std::string& s_;
    size_t pos_ = 0;
};

Rat parse_rat_str(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw ParseError("empty rational", 1, 1);
    mpq_class q;
    if (q.set_str(t, 10) != 0) throw ParseError("malformed rational '" + text + "'", 1, 1);
    q.canonicalize();
    return q;
}

} // namespace

Poly parse_poly(const FieldPtr& F, const std::string& text) {
    return PolyParser(F, text).parse();
}

ExtValue parse_value(const GroupDescriptor& g, const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t == "inf" || t == "infinity" || t == "oo") return ExtValue::infinity(g.rank);
    std::vector<Rat> coords;
    if (!t.empty() && t.front() == '(') {
        if (t.back() != ')') throw ParseError("expected ')'", 1, static_cast<int>(t.size()));
        std::string body = t.substr(1, t.size() - 2);
        size_t start = 0;
        while (start <= body.size()) {
            size_t comma = body.find(',', start);
            std::string piece =
                comma == std::string::npos ? body.substr(start) : body.substr(start, comma - start);
            coords.push_back(parse_rat_str(piece));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } else {
        if (g.rank != 1)
            throw ParseError("rank-" + std::to_string(g.rank) + " values need a (..,..) tuple", 1, 1);
        coords.push_back(parse_rat_str(t));
    }
    if (static_cast<int>(coords.size()) != g.rank)
        throw ParseError("value has rank " + std::to_string(coords.size()) + ", expected " +
                             std::to_string(g.rank),
                         1, 1);
    return ExtValue::of(std::move(coords));
}

} // namespace keyforge
