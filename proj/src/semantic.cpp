#include "sempub/semantic.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "sempub/syntactic.hpp"
#include "value_sets.hpp"

namespace sempub::semantic {

namespace {

Value normalize_value(const Value& v, const KnowledgeBase& kb) {
    if (const auto* s = std::get_if<std::string>(&v)) return kb.root_term(*s);
    return v;
}

std::vector<Predicate> normalize_all(const std::vector<Predicate>& preds, const KnowledgeBase& kb) {
    std::vector<Predicate> out;
    out.reserve(preds.size());
    for (const auto& p : preds) out.push_back(normalize(p, kb));
    return out;
}

// Lifted value sets of string predicates: (= v) admits v and everything
// below it; (!= w) admits every string whose chain holds a term other than
// w, which is all strings once w has a parent.
bool lifted_value_implies(const Predicate& narrower, const Predicate& wider, const KnowledgeBase& kb) {
    if (!is_string(narrower.value) || !is_string(wider.value)) return detail::value_implies(narrower, wider);
    const auto& n = std::get<std::string>(narrower.value);
    const auto& w = std::get<std::string>(wider.value);
    if (narrower.op == RelOp::Eq) {
        if (wider.op == RelOp::Eq) return kb.is_descendant_or_equal(n, w);
        return kb.has_parent(w) || !kb.is_descendant_or_equal(w, n);
    }
    if (wider.op == RelOp::Eq) return false;
    return kb.has_parent(w) || (!kb.has_parent(n) && n == w);
}

// Deepest term of a chain under the descendant order; nullopt when two
// terms are incomparable.
std::optional<Term> deepest_of(const std::vector<const Term*>& terms, const KnowledgeBase& kb) {
    const Term* deepest = terms.front();
    for (const Term* t : terms) {
        if (kb.is_descendant_or_equal(*t, *deepest)) {
            deepest = t;
        } else if (!kb.is_descendant_or_equal(*deepest, *t)) {
            return std::nullopt;
        }
    }
    return *deepest;
}

// Some single value lifted-matches every predicate in the group.
bool values_feasible(const std::vector<const Predicate*>& preds, const KnowledgeBase& kb) {
    const auto kind = preds.front()->value.index();
    for (const auto* p : preds) {
        if (p->value.index() != kind) return false;
    }
    switch (kind_of(preds.front()->value)) {
        case ValueKind::Integer: {
            detail::IntSet acc;
            for (const auto* p : preds) acc = acc.intersect(detail::IntSet::of(p->op, std::get<std::int64_t>(p->value)));
            return !acc.is_empty();
        }
        case ValueKind::Boolean: {
            unsigned acc = 3u;
            for (const auto* p : preds) acc &= detail::bool_set(p->op, std::get<bool>(p->value));
            return acc != 0;
        }
        case ValueKind::String: {
            std::vector<const Term*> equal;
            std::set<Term> excluded;
            for (const auto* p : preds) {
                const auto& s = std::get<std::string>(p->value);
                if (p->op == RelOp::Eq) {
                    equal.push_back(&s);
                } else {
                    excluded.insert(s);
                }
            }
            // Without an equality the value can be a term nobody mentions.
            if (equal.empty()) return true;
            const auto d = deepest_of(equal, kb);
            if (!d) return false;
            return kb.has_parent(*d) || kb.has_children(*d) || excluded.count(*d) == 0;
        }
    }
    return false;
}

// Witness search for sem_intersects. Subscription predicates are grouped so
// that each group is served by one event pair; groups need pairwise distinct
// attributes.
class WitnessSearch {
public:
    WitnessSearch(const Advertisement& adv, const Subscription& sub, const KnowledgeBase& kb)
        : adv_(adv), sub_(sub), kb_(kb), memo_(std::size_t{1} << sub.predicates.size()) {}

    bool run() {
        std::vector<unsigned> groups;
        return assign(0, groups);
    }

private:
    const std::vector<Term>& candidates(unsigned mask) {
        auto& slot = memo_[mask];
        if (slot) return *slot;
        std::set<Term> out;
        const auto& preds = sub_.predicates;
        for (const auto& a : adv_.predicates) {
            std::vector<const Predicate*> group{&a};
            std::vector<const Term*> attrs{&a.attribute};
            for (std::size_t k = 0; k < preds.size(); ++k) {
                if (mask & (1u << k)) {
                    group.push_back(&preds[k]);
                    attrs.push_back(&preds[k].attribute);
                }
            }
            const auto deepest = deepest_of(attrs, kb_);
            if (!deepest || !values_feasible(group, kb_)) continue;
            if (kb_.in_hierarchy(*deepest)) {
                const auto& below = kb_.subtree(*deepest);
                out.insert(below.begin(), below.end());
            } else {
                out.insert(*deepest);
            }
        }
        slot.emplace(out.begin(), out.end());
        return *slot;
    }

    bool assign(std::size_t k, std::vector<unsigned>& groups) {
        if (k == sub_.predicates.size()) return distinct_attributes(groups);
        const unsigned bit = 1u << k;
        if (!candidates(bit).empty()) {
            groups.push_back(bit);
            if (assign(k + 1, groups)) return true;
            groups.pop_back();
        }
        for (auto& g : groups) {
            if (candidates(g | bit).empty()) continue;
            g |= bit;
            if (assign(k + 1, groups)) return true;
            g &= ~bit;
        }
        return false;
    }

    // Distinct attributes, where a root term may be used once per surface
    // spelling (synonyms normalize onto it). A group whose candidates offer
    // at least as many slots as there are groups can always be served last.
    bool distinct_attributes(const std::vector<unsigned>& groups) {
        std::vector<const std::vector<Term>*> tight;
        for (unsigned g : groups) {
            const auto& c = candidates(g);
            std::size_t slots = 0;
            for (const auto& t : c) {
                slots += kb_.spellings(t);
                if (slots >= groups.size()) break;
            }
            if (slots < groups.size()) tight.push_back(&c);
        }
        std::sort(tight.begin(), tight.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
        std::map<Term, std::size_t> used;
        return pick(tight, 0, used);
    }

    bool pick(const std::vector<const std::vector<Term>*>& sets, std::size_t i, std::map<Term, std::size_t>& used) {
        if (i == sets.size()) return true;
        for (const auto& t : *sets[i]) {
            auto& n = used[t];
            if (n >= kb_.spellings(t)) continue;
            ++n;
            if (pick(sets, i + 1, used)) return true;
            --n;
        }
        return false;
    }

    const Advertisement& adv_;
    const Subscription& sub_;
    const KnowledgeBase& kb_;
    std::vector<std::optional<std::vector<Term>>> memo_;
};

// Above this many predicates the partition search is skipped and the
// per-predicate condition alone decides; that never loses a real witness.
constexpr std::size_t kMaxSearchPredicates = 12;

}  // namespace

std::string_view to_string(Provenance p) { return p == Provenance::Hierarchy ? "hierarchy" : "mapping"; }

std::vector<Pair> AugmentedEvent::pairs() const {
    std::vector<Pair> out = base.pairs;
    out.reserve(base.pairs.size() + added.size());
    for (const auto& a : added) out.push_back(a.pair);
    return out;
}

Predicate normalize(const Predicate& pred, const KnowledgeBase& kb) {
    return Predicate{kb.root_term(pred.attribute), pred.op, normalize_value(pred.value, kb)};
}

Event normalize(const Event& event, const KnowledgeBase& kb) {
    Event out;
    std::set<Pair> seen;
    for (const auto& p : event.pairs) {
        Pair n{kb.root_term(p.attribute), normalize_value(p.value, kb)};
        if (seen.insert(n).second) out.pairs.push_back(std::move(n));
    }
    return out;
}

Subscription normalize(const Subscription& sub, const KnowledgeBase& kb) {
    return Subscription{sub.id, normalize_all(sub.predicates, kb)};
}

Advertisement normalize(const Advertisement& adv, const KnowledgeBase& kb) {
    return Advertisement{adv.id, normalize_all(adv.predicates, kb)};
}

AugmentedEvent augment(const Event& normalized, const KnowledgeBase& kb) {
    AugmentedEvent out{normalized, {}};
    std::set<Pair> seen(normalized.pairs.begin(), normalized.pairs.end());

    for (const auto& base : normalized.pairs) {
        std::vector<Term> attrs{base.attribute};
        for (auto& a : kb.ancestors(base.attribute)) attrs.push_back(std::move(a));
        std::vector<Value> values{base.value};
        if (const auto* s = std::get_if<std::string>(&base.value)) {
            for (auto& v : kb.ancestors(*s)) values.emplace_back(std::move(v));
        }
        for (const auto& a : attrs) {
            for (const auto& v : values) {
                Pair p{a, v};
                if (seen.insert(p).second) {
                    out.added.push_back(AddedPair{std::move(p), Provenance::Hierarchy, render(base)});
                }
            }
        }
    }

    // Every mapping sees the base and hierarchy pairs only, once each.
    const std::vector<Pair> pool = out.pairs();
    for (const auto& f : kb.mappings()) {
        auto result = apply_mapping(f, pool, kb.reference_year());
        if (result && seen.insert(*result).second) {
            out.added.push_back(AddedPair{std::move(*result), Provenance::Mapping, f.name});
        }
    }
    return out;
}

bool lifted_match(const Pair& pair, const Predicate& pred, const KnowledgeBase& kb) {
    if (!kb.is_descendant_or_equal(pair.attribute, pred.attribute)) return false;
    const auto* v = std::get_if<std::string>(&pair.value);
    const auto* w = std::get_if<std::string>(&pred.value);
    if (v && w) {
        if (pred.op == RelOp::Eq) return kb.is_descendant_or_equal(*v, *w);
        if (pred.op == RelOp::Ne) return *v != *w || kb.has_parent(*v);
        return false;
    }
    return detail::evaluate(pair.value, pred.op, pred.value);
}

bool matches(const AugmentedEvent& augmented, const Subscription& normalized_sub) {
    const auto all = augmented.pairs();
    return syntactic::match_all(all, normalized_sub.predicates);
}

bool covers_normalized(const Subscription& s1, const Subscription& s2, const KnowledgeBase& kb) {
    return std::all_of(s1.predicates.begin(), s1.predicates.end(), [&](const Predicate& p1) {
        return std::any_of(s2.predicates.begin(), s2.predicates.end(), [&](const Predicate& p2) {
            return kb.is_descendant_or_equal(p2.attribute, p1.attribute) && lifted_value_implies(p2, p1, kb);
        });
    });
}

bool intersects_normalized(const Advertisement& adv, const Subscription& sub, const KnowledgeBase& kb) {
    // Every subscription predicate needs some advertisement predicate that a
    // single pair can lift-match together with it.
    const bool each = std::all_of(sub.predicates.begin(), sub.predicates.end(), [&](const Predicate& s) {
        return std::any_of(adv.predicates.begin(), adv.predicates.end(), [&](const Predicate& a) {
            const bool comparable = kb.is_descendant_or_equal(a.attribute, s.attribute) ||
                                    kb.is_descendant_or_equal(s.attribute, a.attribute);
            return comparable && values_feasible({&a, &s}, kb);
        });
    });
    if (!each) return false;
    if (sub.predicates.size() > kMaxSearchPredicates) return true;
    return WitnessSearch(adv, sub, kb).run();
}

bool determines_normalized(const Advertisement& adv, const Event& event, const KnowledgeBase& kb) {
    return std::all_of(event.pairs.begin(), event.pairs.end(), [&](const Pair& pair) {
        return std::any_of(adv.predicates.begin(), adv.predicates.end(),
                           [&](const Predicate& p) { return lifted_match(pair, p, kb); });
    });
}

bool sem_match(const Event& event, const Subscription& sub, const KnowledgeBase& kb) {
    return matches(augment(normalize(event, kb), kb), normalize(sub, kb));
}

bool sem_covers(const Subscription& s1, const Subscription& s2, const KnowledgeBase& kb) {
    return covers_normalized(normalize(s1, kb), normalize(s2, kb), kb);
}

bool sem_intersects(const Advertisement& adv, const Subscription& sub, const KnowledgeBase& kb) {
    return intersects_normalized(normalize(adv, kb), normalize(sub, kb), kb);
}

bool sem_determines(const Advertisement& adv, const Event& event, const KnowledgeBase& kb) {
    return determines_normalized(normalize(adv, kb), normalize(event, kb), kb);
}

}  // namespace sempub::semantic
