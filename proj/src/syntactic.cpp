#include "sempub/syntactic.hpp"

#include <algorithm>

#include "value_sets.hpp"

namespace sempub::syntactic {

bool match_pair(const Pair& pair, const Predicate& pred) {
    return pair.attribute == pred.attribute && detail::evaluate(pair.value, pred.op, pred.value);
}

bool match_all(std::span<const Pair> pairs, std::span<const Predicate> preds) {
    return std::all_of(preds.begin(), preds.end(), [&](const Predicate& p) {
        return std::any_of(pairs.begin(), pairs.end(), [&](const Pair& e) { return match_pair(e, p); });
    });
}

bool match_event(const Event& event, const Subscription& sub) {
    return match_all(event.pairs, sub.predicates);
}

bool implies(const Predicate& narrower, const Predicate& wider) {
    return narrower.attribute == wider.attribute && detail::value_implies(narrower, wider);
}

bool jointly_satisfiable(const Predicate& a, const Predicate& b) {
    return a.attribute == b.attribute && detail::value_jointly_satisfiable(a, b);
}

bool covers(const Subscription& s1, const Subscription& s2) {
    return std::all_of(s1.predicates.begin(), s1.predicates.end(), [&](const Predicate& p1) {
        return std::any_of(s2.predicates.begin(), s2.predicates.end(),
                           [&](const Predicate& p2) { return implies(p2, p1); });
    });
}

bool determines(const Advertisement& adv, const Event& event) {
    return std::all_of(event.pairs.begin(), event.pairs.end(), [&](const Pair& pair) {
        return std::any_of(adv.predicates.begin(), adv.predicates.end(),
                           [&](const Predicate& p) { return match_pair(pair, p); });
    });
}

bool intersects(const Advertisement& adv, const Subscription& sub) {
    return std::all_of(sub.predicates.begin(), sub.predicates.end(), [&](const Predicate& s) {
        return std::any_of(adv.predicates.begin(), adv.predicates.end(),
                           [&](const Predicate& a) { return jointly_satisfiable(a, s); });
    });
}

}  // namespace sempub::syntactic
