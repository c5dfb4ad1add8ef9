#include "sempub/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace sempub {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_bare_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Event event() {
        skip_ws();
        expect('{');
        Event e;
        std::set<Term> seen;
        skip_ws();
        if (peek() == '}') fail("empty event");
        while (true) {
            const std::size_t at = pos_;
            Pair p = pair();
            if (!seen.insert(p.attribute).second) {
                throw ParseError(at, "duplicate attribute '" + p.attribute + "'");
            }
            e.pairs.push_back(std::move(p));
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect('}');
            break;
        }
        finish();
        return e;
    }

    std::vector<Predicate> conjunction(const char* what) {
        skip_ws();
        if (at_end()) fail(std::string("empty ") + what);
        std::vector<Predicate> preds;
        preds.push_back(predicate());
        while (true) {
            skip_ws();
            if (at_end()) break;
            const std::size_t at = pos_;
            std::string word;
            while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) word += text_[pos_++];
            if (lowercase(word) != "and") throw ParseError(at, "expected 'AND'");
            preds.push_back(predicate());
        }
        return preds;
    }

    Predicate single_predicate() {
        Predicate p = predicate();
        finish();
        return p;
    }

private:
    Pair pair() {
        skip_ws();
        expect('(');
        Term attr = attribute();
        skip_ws();
        expect(',');
        Value v = value();
        skip_ws();
        expect(')');
        return Pair{std::move(attr), std::move(v)};
    }

    Predicate predicate() {
        skip_ws();
        expect('(');
        Predicate p;
        p.attribute = attribute();
        skip_ws();
        const std::size_t op_at = pos_;
        p.op = rel_op();
        p.value = value();
        skip_ws();
        expect(')');
        try {
            validate(p);
        } catch (const std::invalid_argument& e) {
            throw ParseError(op_at, e.what());
        }
        return p;
    }

    Term attribute() {
        skip_ws();
        const std::size_t at = pos_;
        std::string name;
        if (peek() == '"') {
            name = quoted();
        } else if (is_bare_start(peek())) {
            while (!at_end() && is_bare_char(peek())) name += text_[pos_++];
        } else {
            fail("expected attribute name");
        }
        if (name.empty()) throw ParseError(at, "empty attribute name");
        return lowercase(name);
    }

    RelOp rel_op() {
        skip_ws();
        const char c = peek();
        const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
        switch (c) {
            case '=': ++pos_; return RelOp::Eq;
            case '!':
                if (next == '=') { pos_ += 2; return RelOp::Ne; }
                break;
            case '<':
                if (next == '=') { pos_ += 2; return RelOp::Le; }
                ++pos_;
                return RelOp::Lt;
            case '>':
                if (next == '=') { pos_ += 2; return RelOp::Ge; }
                ++pos_;
                return RelOp::Gt;
            default: break;
        }
        fail("expected relational operator");
    }

    Value value() {
        skip_ws();
        const std::size_t at = pos_;
        const char c = peek();
        if (c == '"') {
            std::string s = quoted();
            if (s.empty()) throw ParseError(at, "empty string value");
            return lowercase(s);
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t end = pos_ + (c == '-' ? 1 : 0);
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
            std::int64_t n = 0;
            const char* first = text_.data() + pos_;
            const char* last = text_.data() + end;
            auto [ptr, ec] = std::from_chars(first, last, n);
            if (ec == std::errc::result_out_of_range) throw ParseError(at, "integer out of range");
            if (ec != std::errc() || ptr != last) throw ParseError(at, "malformed integer");
            pos_ = end;
            return n;
        }
        if (is_bare_start(c)) {
            std::string word;
            while (!at_end() && is_bare_char(peek())) word += text_[pos_++];
            if (word == "true") return true;
            if (word == "false") return false;
            throw ParseError(at, "unquoted value '" + word + "'; strings must be quoted");
        }
        fail("expected value");
    }

    std::string quoted() {
        const std::size_t at = pos_;
        expect('"');
        std::string out;
        while (true) {
            if (at_end()) throw ParseError(at, "unterminated string");
            char c = text_[pos_++];
            if (c == '"') break;
            if (c == '\\') {
                if (at_end()) throw ParseError(at, "unterminated string");
                c = text_[pos_++];
                if (c != '"' && c != '\\') throw ParseError(pos_ - 1, "unknown escape");
            }
            out += c;
        }
        return out;
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void finish() {
        skip_ws();
        if (!at_end()) fail("trailing input");
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("at offset " + std::to_string(position) + ": " + message),
      position_(position) {}

std::string_view to_string(RelOp op) {
    switch (op) {
        case RelOp::Eq: return "=";
        case RelOp::Ne: return "!=";
        case RelOp::Lt: return "<";
        case RelOp::Le: return "<=";
        case RelOp::Gt: return ">";
        case RelOp::Ge: return ">=";
    }
    return "?";
}

void validate(const Predicate& p) {
    if (p.attribute.empty()) throw std::invalid_argument("empty attribute name");
    if (is_string(p.value) && std::get<std::string>(p.value).empty()) {
        throw std::invalid_argument("empty string value");
    }
    if (is_ordering(p.op) && !is_integer(p.value)) {
        throw std::invalid_argument("ordering operator " + std::string(to_string(p.op)) +
                                    " requires an integer value");
    }
}

Event parse_event(std::string_view text) { return Parser(text).event(); }

Subscription parse_subscription(std::string_view text, std::string id) {
    return Subscription{std::move(id), Parser(text).conjunction("subscription")};
}

Advertisement parse_advertisement(std::string_view text, std::string id) {
    return Advertisement{std::move(id), Parser(text).conjunction("advertisement")};
}

Predicate parse_predicate(std::string_view text) { return Parser(text).single_predicate(); }

std::string render_term(const Term& t) {
    const bool bare = !t.empty() && is_bare_start(t.front()) &&
                      std::all_of(t.begin(), t.end(), is_bare_char);
    return bare ? t : quote(t);
}

std::string render_value(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return quote(*s);
    if (const auto* n = std::get_if<std::int64_t>(&v)) return std::to_string(*n);
    return std::get<bool>(v) ? "true" : "false";
}

std::string render(const Pair& p) {
    return "(" + render_term(p.attribute) + ", " + render_value(p.value) + ")";
}

std::string render(const Predicate& p) {
    return "(" + render_term(p.attribute) + " " + std::string(to_string(p.op)) + " " +
           render_value(p.value) + ")";
}

std::string render(const Event& e) {
    std::string out = "{";
    for (std::size_t i = 0; i < e.pairs.size(); ++i) {
        if (i) out += ", ";
        out += render(e.pairs[i]);
    }
    return out + "}";
}

namespace {
std::string render_conjunction(const std::vector<Predicate>& preds) {
    std::string out;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (i) out += " AND ";
        out += render(preds[i]);
    }
    return out;
}
}  // namespace

std::string render(const Subscription& s) { return render_conjunction(s.predicates); }
std::string render(const Advertisement& a) { return render_conjunction(a.predicates); }

}  // namespace sempub
