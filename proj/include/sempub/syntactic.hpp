#pragma once

#include <span>

#include "sempub/model.hpp"

// Syntax-level relations: names must be identical for anything to match.
namespace sempub::syntactic {

bool match_pair(const Pair& pair, const Predicate& pred);

// True iff every predicate is matched by some pair. Pairs may repeat an
// attribute (augmented events do).
bool match_all(std::span<const Pair> pairs, std::span<const Predicate> preds);

bool match_event(const Event& event, const Subscription& sub);

// Every pair matching `narrower` also matches `wider`. Both predicates must
// name the same attribute, otherwise false.
bool implies(const Predicate& narrower, const Predicate& wider);

// Some pair matches both predicates.
bool jointly_satisfiable(const Predicate& a, const Predicate& b);

// s1 covers s2: every s1 predicate is implied by a same-attribute s2 predicate.
bool covers(const Subscription& s1, const Subscription& s2);

bool determines(const Advertisement& adv, const Event& event);

// Every subscription predicate shares a satisfying pair with some
// same-attribute advertisement predicate.
bool intersects(const Advertisement& adv, const Subscription& sub);

}  // namespace sempub::syntactic
