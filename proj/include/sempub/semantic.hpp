#pragma once

#include <string>
#include <vector>

#include "sempub/knowledge.hpp"
#include "sempub/model.hpp"

namespace sempub::semantic {

enum class Provenance { Hierarchy, Mapping };

std::string_view to_string(Provenance p);

struct AddedPair {
    Pair pair;
    Provenance provenance = Provenance::Hierarchy;
    // Mapping name, or the base pair the hierarchy stage generalized.
    std::string origin;

    friend bool operator==(const AddedPair&, const AddedPair&) = default;
};

// e' = e ∪ E': the normalized event plus the pairs added by the hierarchy
// and mapping stages, in generation order.
struct AugmentedEvent {
    Event base;
    std::vector<AddedPair> added;

    std::vector<Pair> pairs() const;

    friend bool operator==(const AugmentedEvent&, const AugmentedEvent&) = default;
};

// Root-term replacement on attribute names and string values. Identical
// pairs produced by merging synonyms collapse into one; distinct values for
// the same root attribute are kept.
Event normalize(const Event& event, const KnowledgeBase& kb);
Subscription normalize(const Subscription& sub, const KnowledgeBase& kb);
Advertisement normalize(const Advertisement& adv, const KnowledgeBase& kb);
Predicate normalize(const Predicate& pred, const KnowledgeBase& kb);

// Expects a normalized event. Throws EvaluationError from mapping functions.
AugmentedEvent augment(const Event& normalized, const KnowledgeBase& kb);

bool sem_match(const Event& event, const Subscription& sub, const KnowledgeBase& kb);
bool sem_covers(const Subscription& s1, const Subscription& s2, const KnowledgeBase& kb);
bool sem_intersects(const Advertisement& adv, const Subscription& sub, const KnowledgeBase& kb);
bool sem_determines(const Advertisement& adv, const Event& event, const KnowledgeBase& kb);

// The same relations over inputs that are already normalized; brokers keep
// their tables in normalized form and call these directly.
bool matches(const AugmentedEvent& augmented, const Subscription& normalized_sub);
bool covers_normalized(const Subscription& s1, const Subscription& s2, const KnowledgeBase& kb);
bool intersects_normalized(const Advertisement& adv, const Subscription& sub, const KnowledgeBase& kb);
bool determines_normalized(const Advertisement& adv, const Event& event, const KnowledgeBase& kb);

// A normalized pair matches a normalized predicate once its attribute and
// (string) value are allowed to climb the hierarchy.
bool lifted_match(const Pair& pair, const Predicate& pred, const KnowledgeBase& kb);

}  // namespace sempub::semantic
