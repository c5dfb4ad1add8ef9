#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sempub {

// A term is any lowercase token naming an attribute or a string value. The
// concept hierarchy is shared between both positions, so they share a type.
using Term = std::string;

// Strings are stored lowercased; integers are exact.
using Value = std::variant<std::string, std::int64_t, bool>;

enum class ValueKind { String, Integer, Boolean };

inline ValueKind kind_of(const Value& v) { return static_cast<ValueKind>(v.index()); }
inline bool is_string(const Value& v) { return std::holds_alternative<std::string>(v); }
inline bool is_integer(const Value& v) { return std::holds_alternative<std::int64_t>(v); }

std::string render_value(const Value& v);

enum class RelOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(RelOp op);
inline bool is_ordering(RelOp op) { return op != RelOp::Eq && op != RelOp::Ne; }

struct Pair {
    Term attribute;
    Value value;

    friend bool operator==(const Pair&, const Pair&) = default;
    friend auto operator<=>(const Pair&, const Pair&) = default;
};

struct Predicate {
    Term attribute;
    RelOp op = RelOp::Eq;
    Value value;

    friend bool operator==(const Predicate&, const Predicate&) = default;
};

// Pairs with pairwise distinct attribute names, at least one.
struct Event {
    std::vector<Pair> pairs;

    friend bool operator==(const Event&, const Event&) = default;
};

// Conjunction of predicates.
struct Subscription {
    std::string id;
    std::vector<Predicate> predicates;

    friend bool operator==(const Subscription&, const Subscription&) = default;
};

// Disjunction of predicates describing the pair space a publisher will use.
struct Advertisement {
    std::string id;
    std::vector<Predicate> predicates;

    friend bool operator==(const Advertisement&, const Advertisement&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& message);

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

Event parse_event(std::string_view text);
Subscription parse_subscription(std::string_view text, std::string id = {});
Advertisement parse_advertisement(std::string_view text, std::string id = {});
Predicate parse_predicate(std::string_view text);

// Throws std::invalid_argument when the predicate breaks an invariant
// (ordering operator on a non-integer value, empty string).
void validate(const Predicate& p);

// Canonical text forms; parse(render(x)) reproduces x.
std::string render(const Event& e);
std::string render(const Subscription& s);
std::string render(const Advertisement& a);
std::string render(const Predicate& p);
std::string render(const Pair& p);
std::string render_term(const Term& t);

}  // namespace sempub
