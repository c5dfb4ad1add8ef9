#include "sempub/generator.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "sempub/semantic.hpp"
#include "sempub/syntactic.hpp"

namespace sempub {

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not, so
// draws go through these helpers to keep scenarios identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(gen_() % n); }
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::size_t>(hi - lo + 1)));
    }
    bool chance(unsigned percent) { return below(100) < percent; }

    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 gen_;
};

class World {
public:
    World(Rng& rng, const GeneratorConfig& cfg) : rng_(rng), mode_(cfg.mode) {
        const std::size_t n_attr = 2 + rng_.below(std::max<std::size_t>(cfg.max_attributes, 2) - 1);
        nlohmann::json doc = {{"synonyms", nlohmann::json::array()},
                              {"hierarchy", nlohmann::json::array()},
                              {"mappings", nlohmann::json::array()},
                              {"reference_year", 2003}};
        for (std::size_t i = 0; i < n_attr; ++i) {
            const Term name = "attr" + std::to_string(i);
            ValueKind kind = std::array{ValueKind::String, ValueKind::String, ValueKind::Integer,
                                        ValueKind::Integer, ValueKind::Boolean}[rng_.below(5)];
            if (i > 0 && rng_.chance(35)) {
                const Term& parent = attributes_[rng_.below(i)];
                doc["hierarchy"].push_back({{"child", name}, {"parent", parent}});
                kind = kind_[parent];
            }
            attributes_.push_back(name);
            kind_[name] = kind;
        }

        const std::size_t budget = std::max<std::size_t>(cfg.max_concepts, n_attr + 6) - n_attr;
        const std::size_t n_concepts = 5 + rng_.below(budget - 4);
        for (std::size_t i = 0; i < n_concepts; ++i) {
            const Term name = "c" + std::to_string(i);
            if (i > 0 && rng_.chance(75)) {
                const std::size_t lo = i > 12 ? i - 12 : 0;
                doc["hierarchy"].push_back({{"child", name}, {"parent", concepts_[lo + rng_.below(i - lo)]}});
            }
            concepts_.push_back(name);
        }

        std::set<Term> grouped;
        const std::size_t groups = rng_.below(6);
        for (std::size_t g = 0; g < groups; ++g) {
            const bool attr = rng_.chance(30);
            const Term root = attr ? rng_.pick(attributes_) : rng_.pick(concepts_);
            if (!grouped.insert(root).second) continue;
            std::vector<Term> members{root + "_syn" + std::to_string(g)};
            if (rng_.chance(40)) members.push_back(root + "_alt" + std::to_string(g));
            doc["synonyms"].push_back({{"root", root}, {"members", members}});
            synonyms_[root] = members;
        }

        kb_ = std::make_shared<const KnowledgeBase>(KnowledgeBase::load(doc.dump()));
    }

    std::shared_ptr<const KnowledgeBase> kb() const { return kb_; }

    // Surface spelling of a root term; synonyms only in semantic mode, where
    // normalization undoes them.
    Term spell(const Term& t) {
        if (mode_ != RoutingMode::Semantic) return t;
        auto it = synonyms_.find(t);
        if (it == synonyms_.end() || !rng_.chance(40)) return t;
        return rng_.pick(it->second);
    }

    Value random_value(ValueKind kind) {
        switch (kind) {
            case ValueKind::String: return rng_.pick(concepts_);
            case ValueKind::Integer: return rng_.between(0, 100);
            case ValueKind::Boolean: return rng_.chance(50);
        }
        return false;
    }

    Predicate random_predicate(const Term& attr) {
        const ValueKind kind = kind_[attr];
        Predicate p{attr, RelOp::Eq, random_value(kind)};
        if (kind == ValueKind::Integer) {
            p.op = static_cast<RelOp>(rng_.below(6));
        } else if (rng_.chance(12)) {
            p.op = RelOp::Ne;
        }
        return p;
    }

    Advertisement advertisement(const std::string& id) {
        Advertisement a{id, {}};
        const std::size_t n = 1 + rng_.below(4);
        for (std::size_t i = 0; i < n; ++i) a.predicates.push_back(random_predicate(rng_.pick(attributes_)));
        return a;
    }

    // Generalizes a predicate the way a broader subscriber would.
    Predicate widen(const Predicate& p) {
        Predicate w = p;
        if (mode_ == RoutingMode::Semantic && rng_.chance(50)) {
            auto up = kb_->ancestors(p.attribute);
            if (!up.empty()) w.attribute = up[rng_.below(up.size())];
        }
        if (const auto* s = std::get_if<std::string>(&p.value)) {
            if (mode_ == RoutingMode::Semantic && rng_.chance(60)) {
                auto up = kb_->ancestors(*s);
                if (!up.empty()) w.value = up[rng_.below(up.size())];
            }
        } else if (const auto* n = std::get_if<std::int64_t>(&p.value)) {
            if (p.op != RelOp::Eq && p.op != RelOp::Ne) w.value = *n + rng_.between(-10, 10);
        }
        return w;
    }

    Subscription subscription(const std::string& id, const std::vector<Advertisement>& ads) {
        Subscription s{id, {}};
        const std::size_t n = 1 + rng_.below(3);
        if (!ads.empty() && rng_.chance(60)) {
            const auto& ad = rng_.pick(ads);
            for (std::size_t i = 0; i < n; ++i) s.predicates.push_back(widen(rng_.pick(ad.predicates)));
        } else {
            for (std::size_t i = 0; i < n; ++i) s.predicates.push_back(random_predicate(rng_.pick(attributes_)));
        }
        for (auto& p : s.predicates) {
            p.attribute = spell(p.attribute);
            if (const auto* v = std::get_if<std::string>(&p.value)) p.value = spell(*v);
        }
        return s;
    }

    // A pair inside the space described by p, made more specific where the
    // mode allows.
    std::optional<Pair> pair_for(const Predicate& p) {
        Term attr = p.attribute;
        if (mode_ == RoutingMode::Semantic) {
            const auto& below = kb_->subtree(attr);
            if (!below.empty()) attr = rng_.pick(below);
        }
        Value v;
        if (const auto* n = std::get_if<std::int64_t>(&p.value)) {
            switch (p.op) {
                case RelOp::Eq: v = *n; break;
                case RelOp::Ne: v = *n + 1 + static_cast<std::int64_t>(rng_.below(5)); break;
                case RelOp::Lt: v = *n - 1 - static_cast<std::int64_t>(rng_.below(10)); break;
                case RelOp::Le: v = *n - static_cast<std::int64_t>(rng_.below(10)); break;
                case RelOp::Gt: v = *n + 1 + static_cast<std::int64_t>(rng_.below(10)); break;
                case RelOp::Ge: v = *n + static_cast<std::int64_t>(rng_.below(10)); break;
            }
        } else if (const auto* b = std::get_if<bool>(&p.value)) {
            v = p.op == RelOp::Eq ? *b : !*b;
        } else {
            const auto& s = std::get<std::string>(p.value);
            if (p.op == RelOp::Eq) {
                const auto& below = kb_->subtree(s);
                v = (mode_ == RoutingMode::Semantic && !below.empty()) ? rng_.pick(below) : s;
            } else {
                Term other = rng_.pick(concepts_);
                if (other == s) return std::nullopt;
                v = other;
            }
        }
        return Pair{attr, v};
    }

    std::optional<Event> event_for(const Advertisement& ad) {
        Event e;
        std::set<Term> used;
        const std::size_t n = 1 + rng_.below(std::min<std::size_t>(3, ad.predicates.size()));
        for (std::size_t i = 0; i < n; ++i) {
            auto pair = pair_for(rng_.pick(ad.predicates));
            if (!pair) continue;
            pair->attribute = spell(pair->attribute);
            if (auto* s = std::get_if<std::string>(&pair->value)) pair->value = spell(*s);
            // Distinct spellings may still share a root.
            if (!used.insert(kb_->root_term(pair->attribute)).second) continue;
            e.pairs.push_back(std::move(*pair));
        }
        if (e.pairs.empty()) return std::nullopt;
        const bool determined = mode_ == RoutingMode::Syntactic ? syntactic::determines(ad, e)
                                                                : semantic::sem_determines(ad, e, *kb_);
        if (!determined) return std::nullopt;
        return e;
    }

private:
    Rng& rng_;
    RoutingMode mode_;
    std::vector<Term> attributes_;
    std::vector<Term> concepts_;
    std::map<Term, ValueKind> kind_;
    std::map<Term, std::vector<Term>> synonyms_;
    std::shared_ptr<const KnowledgeBase> kb_;
};

}  // namespace

Scenario generate_scenario(std::uint64_t seed, const GeneratorConfig& cfg) {
    Rng rng(seed);
    World world(rng, cfg);

    Scenario sc;
    sc.seed = seed;
    sc.mode = cfg.mode;
    sc.knowledge = world.kb();

    const std::size_t n_brokers = 1 + rng.below(std::max<std::size_t>(cfg.max_brokers, 1));
    for (std::size_t i = 0; i < n_brokers; ++i) {
        sc.brokers.push_back("b" + std::to_string(i));
        if (i > 0) sc.edges.emplace_back(sc.brokers[rng.below(i)], sc.brokers[i]);
    }

    std::vector<std::string> publishers;
    std::vector<std::string> subscribers;
    const std::size_t n_pub = 1 + rng.below(4);
    const std::size_t n_sub = 1 + rng.below(2 * n_brokers);
    for (std::size_t i = 0; i < n_pub; ++i) {
        publishers.push_back("p" + std::to_string(i));
        sc.clients.push_back({publishers.back(), rng.pick(sc.brokers)});
    }
    for (std::size_t i = 0; i < n_sub; ++i) {
        subscribers.push_back("s" + std::to_string(i));
        sc.clients.push_back({subscribers.back(), rng.pick(sc.brokers)});
    }

    std::map<std::string, std::vector<Advertisement>> ads;
    std::vector<Advertisement> all_ads;
    std::size_t ad_counter = 0;
    for (const auto& p : publishers) {
        const std::size_t n = 1 + (rng.chance(25) ? 1 : 0);
        for (std::size_t i = 0; i < n; ++i) {
            ads[p].push_back(world.advertisement("ad" + std::to_string(ad_counter++)));
            all_ads.push_back(ads[p].back());
        }
    }

    const std::size_t n_subs = 1 + rng.below(std::max<std::size_t>(cfg.max_subscriptions, 1));
    const std::size_t n_events = 1 + rng.below(std::max<std::size_t>(cfg.max_events, 1));
    std::vector<char> steps(n_subs, 'S');
    steps.insert(steps.end(), n_events, 'P');
    rng.shuffle(steps);

    std::set<std::string> advertised;
    auto advertise = [&](const std::string& p) {
        if (!advertised.insert(p).second) return;
        for (const auto& ad : ads[p]) sc.script.push_back({ActionKind::Advertise, p, ad});
    };
    for (const auto& p : publishers) {
        if (rng.chance(40)) advertise(p);
    }

    std::size_t sub_counter = 0;
    for (char step : steps) {
        if (step == 'S') {
            sc.script.push_back({ActionKind::Subscribe, rng.pick(subscribers),
                                 world.subscription("sub" + std::to_string(sub_counter++), all_ads)});
            continue;
        }
        const auto& p = rng.pick(publishers);
        auto event = world.event_for(rng.pick(ads[p]));
        if (!event) continue;
        advertise(p);
        sc.script.push_back({ActionKind::Publish, p, std::move(*event)});
    }

    validate(sc);
    return sc;
}

}  // namespace sempub
