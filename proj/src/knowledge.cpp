#include "sempub/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "value_sets.hpp"

namespace sempub {

using nlohmann::json;

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

Term read_term(const json& j, const std::string& where) {
    if (!j.is_string()) throw KnowledgeError(where + ": expected a string term");
    Term t = lowercase(j.get<std::string>());
    if (t.empty()) throw KnowledgeError(where + ": empty term");
    return t;
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw KnowledgeError(where + ": missing '" + key + "'");
    return *it;
}

Value read_value(const json& j, const std::string& where) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) {
        std::string s = lowercase(j.get<std::string>());
        if (s.empty()) throw KnowledgeError(where + ": empty string value");
        return s;
    }
    throw KnowledgeError(where + ": value must be a string, integer or boolean");
}

json value_to_json(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* n = std::get_if<std::int64_t>(&v)) return *n;
    return std::get<bool>(v);
}

MappingKind read_kind(const json& j, const std::string& where) {
    const std::string k = lowercase(read_term(j, where + ".kind"));
    if (k == "rename") return MappingKind::Rename;
    if (k == "const") return MappingKind::Const;
    if (k == "linear") return MappingKind::Linear;
    if (k == "years_since") return MappingKind::YearsSince;
    throw KnowledgeError(where + ": unknown mapping body kind '" + k + "'");
}

const Value* lookup(std::span<const Pair> pairs, const Term& attr) {
    for (const auto& p : pairs) {
        if (p.attribute == attr) return &p.value;
    }
    return nullptr;
}

}  // namespace

EvaluationError::EvaluationError(std::string function, const std::string& message)
    : std::runtime_error("mapping '" + function + "': " + message), function_(std::move(function)) {}

std::string_view to_string(MappingKind kind) {
    switch (kind) {
        case MappingKind::Rename: return "rename";
        case MappingKind::Const: return "const";
        case MappingKind::Linear: return "linear";
        case MappingKind::YearsSince: return "years_since";
    }
    return "?";
}

std::optional<Pair> apply_mapping(const MappingFunction& f, std::span<const Pair> pairs,
                                  std::int64_t reference_year) {
    for (const auto& in : f.inputs) {
        if (lookup(pairs, in) == nullptr) return std::nullopt;
    }
    if (f.guard && !detail::evaluate(*lookup(pairs, f.guard->attribute), f.guard->op, f.guard->value)) {
        return std::nullopt;
    }

    switch (f.kind) {
        case MappingKind::Rename:
            return Pair{f.output, *lookup(pairs, f.source)};
        case MappingKind::Const:
            return Pair{f.output, f.constant};
        case MappingKind::Linear: {
            const Value* v = lookup(pairs, f.source);
            if (!is_integer(*v)) return std::nullopt;
            std::int64_t product = 0;
            std::int64_t sum = 0;
            if (__builtin_mul_overflow(f.scale, std::get<std::int64_t>(*v), &product) ||
                __builtin_add_overflow(product, f.offset, &sum)) {
                throw EvaluationError(f.name, "integer overflow");
            }
            return Pair{f.output, sum};
        }
        case MappingKind::YearsSince: {
            const Value* v = lookup(pairs, f.source);
            if (!is_integer(*v)) return std::nullopt;
            std::int64_t diff = 0;
            if (__builtin_sub_overflow(reference_year, std::get<std::int64_t>(*v), &diff)) {
                throw EvaluationError(f.name, "integer overflow");
            }
            return Pair{f.output, diff};
        }
    }
    return std::nullopt;
}

std::optional<Pair> apply_mapping(const MappingFunction& f, const Event& event,
                                  std::int64_t reference_year) {
    return apply_mapping(f, std::span<const Pair>(event.pairs), reference_year);
}

KnowledgeBase KnowledgeBase::load(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw KnowledgeError(std::string("malformed knowledge document: ") + e.what());
    }
    if (!doc.is_object()) throw KnowledgeError("knowledge document must be a JSON object");
    try {
        return from_json(doc);
    } catch (const json::exception& e) {
        throw KnowledgeError(std::string("malformed knowledge document: ") + e.what());
    }
}

KnowledgeBase KnowledgeBase::from_json(const nlohmann::json& doc) {
    KnowledgeBase kb;

    // Synonyms: no term may belong to two groups.
    std::set<Term> grouped;
    if (auto it = doc.find("synonyms"); it != doc.end()) {
        std::size_t i = 0;
        for (const auto& g : *it) {
            const std::string where = "synonyms[" + std::to_string(i++) + "]";
            SynonymGroup group;
            group.root = read_term(require(g, "root", where), where + ".root");
            if (!grouped.insert(group.root).second) {
                throw KnowledgeError(where + ": term '" + group.root + "' appears in two synonym groups");
            }
            for (const auto& m : require(g, "members", where)) {
                Term t = read_term(m, where + ".members");
                if (t == group.root) throw KnowledgeError(where + ": root '" + t + "' listed as its own member");
                if (!grouped.insert(t).second) {
                    throw KnowledgeError(where + ": term '" + t + "' appears in two synonym groups");
                }
                kb.root_of_[t] = group.root;
                ++kb.spellings_[group.root];
                group.members.push_back(std::move(t));
            }
            kb.synonyms_.push_back(std::move(group));
        }
    }

    auto require_root = [&kb](const Term& t, const std::string& where) {
        if (kb.root_of_.count(t)) {
            throw KnowledgeError(where + ": '" + t + "' is a synonym of '" + kb.root_of_.at(t) +
                                 "'; use the root term");
        }
    };

    if (auto it = doc.find("hierarchy"); it != doc.end()) {
        std::size_t i = 0;
        for (const auto& e : *it) {
            const std::string where = "hierarchy[" + std::to_string(i++) + "]";
            HierarchyEdge edge{read_term(require(e, "child", where), where + ".child"),
                               read_term(require(e, "parent", where), where + ".parent")};
            require_root(edge.child, where);
            require_root(edge.parent, where);
            if (auto p = kb.parent_of_.find(edge.child); p != kb.parent_of_.end()) {
                if (p->second == edge.parent) continue;
                throw KnowledgeError(where + ": '" + edge.child + "' has multiple parents ('" + p->second +
                                     "', '" + edge.parent + "')");
            }
            kb.parent_of_[edge.child] = edge.parent;
            kb.edges_.push_back(std::move(edge));
        }
        // Walking up from any term must terminate before revisiting it.
        for (const auto& [child, parent] : kb.parent_of_) {
            std::set<Term> visited{child};
            const Term* cur = &parent;
            while (cur) {
                if (!visited.insert(*cur).second) {
                    throw KnowledgeError("hierarchy: cycle through '" + *cur + "'");
                }
                auto up = kb.parent_of_.find(*cur);
                cur = up == kb.parent_of_.end() ? nullptr : &up->second;
            }
        }
    }

    if (auto it = doc.find("reference_year"); it != doc.end()) {
        if (!it->is_number_integer()) throw KnowledgeError("reference_year must be an integer");
        kb.reference_year_ = it->get<std::int64_t>();
    }

    if (auto it = doc.find("mappings"); it != doc.end()) {
        std::size_t i = 0;
        for (const auto& m : *it) {
            const std::string where = "mappings[" + std::to_string(i++) + "]";
            MappingFunction f;
            f.name = require(m, "name", where).get<std::string>();
            for (const auto& in : require(m, "inputs", where)) {
                Term t = read_term(in, where + ".inputs");
                require_root(t, where);
                f.inputs.push_back(std::move(t));
            }
            if (f.inputs.empty()) throw KnowledgeError(where + ": mapping '" + f.name + "' has no inputs");
            f.output = read_term(require(m, "output", where), where + ".output");
            require_root(f.output, where);
            if (std::find(f.inputs.begin(), f.inputs.end(), f.output) != f.inputs.end()) {
                throw KnowledgeError(where + ": output '" + f.output + "' is also an input");
            }
            auto has_input = [&f](const Term& t) {
                return std::find(f.inputs.begin(), f.inputs.end(), t) != f.inputs.end();
            };
            if (auto g = m.find("guard"); g != m.end() && !g->is_null()) {
                try {
                    f.guard = parse_predicate(g->get<std::string>());
                } catch (const std::exception& e) {
                    throw KnowledgeError(where + ": bad guard: " + e.what());
                }
                if (!has_input(f.guard->attribute)) {
                    throw KnowledgeError(where + ": guard attribute '" + f.guard->attribute + "' is not an input");
                }
                if (const auto* s = std::get_if<std::string>(&f.guard->value)) require_root(*s, where);
            }
            const json& body = require(m, "body", where);
            f.kind = read_kind(require(body, "kind", where + ".body"), where + ".body");
            if (f.kind == MappingKind::Const) {
                f.constant = read_value(require(body, "value", where + ".body"), where + ".body.value");
                if (const auto* s = std::get_if<std::string>(&f.constant)) require_root(*s, where);
            } else {
                f.source = read_term(require(body, "input", where + ".body"), where + ".body.input");
                if (!has_input(f.source)) {
                    throw KnowledgeError(where + ": body input '" + f.source + "' is not among the inputs");
                }
            }
            if (f.kind == MappingKind::Linear) {
                f.scale = require(body, "scale", where + ".body").get<std::int64_t>();
                f.offset = body.value("offset", std::int64_t{0});
            }
            if (f.kind == MappingKind::YearsSince && !doc.contains("reference_year")) {
                throw KnowledgeError(where + ": years_since requires reference_year");
            }
            kb.mappings_.push_back(std::move(f));
        }
    }

    kb.index();
    return kb;
}

KnowledgeBase KnowledgeBase::load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw KnowledgeError("cannot open knowledge file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load(buf.str());
}

void KnowledgeBase::index() {
    children_of_.clear();
    subtree_of_.clear();
    for (const auto& [child, parent] : parent_of_) children_of_[parent].push_back(child);
    for (const auto& t : hierarchy_terms()) subtree_of_[t].push_back(t);
    for (const auto& [child, parent] : parent_of_) {
        (void)parent;
        for (const auto& up : ancestors(child)) subtree_of_[up].push_back(child);
    }
    for (auto& [t, members] : subtree_of_) std::sort(members.begin() + 1, members.end());
}

Term KnowledgeBase::root_term(const Term& term) const {
    auto it = root_of_.find(term);
    return it == root_of_.end() ? term : it->second;
}

const Term* KnowledgeBase::parent(const Term& term) const {
    auto it = parent_of_.find(term);
    return it == parent_of_.end() ? nullptr : &it->second;
}

std::vector<Term> KnowledgeBase::ancestors(const Term& term) const {
    std::vector<Term> out;
    for (const Term* p = parent(term); p; p = parent(*p)) out.push_back(*p);
    return out;
}

bool KnowledgeBase::is_descendant_or_equal(const Term& t1, const Term& t2) const {
    if (t1 == t2) return true;
    for (const Term* p = parent(t1); p; p = parent(*p)) {
        if (*p == t2) return true;
    }
    return false;
}

bool KnowledgeBase::has_children(const Term& term) const { return children_of_.count(term) != 0; }

std::size_t KnowledgeBase::depth(const Term& term) const {
    std::size_t d = 0;
    for (const Term* p = parent(term); p; p = parent(*p)) ++d;
    return d;
}

const std::vector<Term>& KnowledgeBase::subtree(const Term& term) const {
    static const std::vector<Term> kEmpty;
    auto it = subtree_of_.find(term);
    return it == subtree_of_.end() ? kEmpty : it->second;
}

std::size_t KnowledgeBase::spellings(const Term& root) const {
    auto it = spellings_.find(root);
    return 1 + (it == spellings_.end() ? 0 : it->second);
}

bool KnowledgeBase::in_hierarchy(const Term& term) const { return subtree_of_.count(term) != 0; }

std::vector<Term> KnowledgeBase::hierarchy_terms() const {
    std::set<Term> terms;
    for (const auto& [child, parent] : parent_of_) {
        terms.insert(child);
        terms.insert(parent);
    }
    return {terms.begin(), terms.end()};
}

KnowledgeBase KnowledgeBase::without_mappings() const {
    KnowledgeBase copy = *this;
    copy.mappings_.clear();
    return copy;
}

std::string KnowledgeBase::to_json() const {
    json doc = json::object();
    doc["synonyms"] = json::array();
    for (const auto& g : synonyms_) doc["synonyms"].push_back({{"root", g.root}, {"members", g.members}});
    doc["hierarchy"] = json::array();
    for (const auto& e : edges_) doc["hierarchy"].push_back({{"child", e.child}, {"parent", e.parent}});
    doc["mappings"] = json::array();
    for (const auto& f : mappings_) {
        json m = {{"name", f.name}, {"inputs", f.inputs}, {"output", f.output}};
        if (f.guard) m["guard"] = render(*f.guard);
        json body = {{"kind", std::string(to_string(f.kind))}};
        switch (f.kind) {
            case MappingKind::Const: body["value"] = value_to_json(f.constant); break;
            case MappingKind::Linear:
                body["input"] = f.source;
                body["scale"] = f.scale;
                body["offset"] = f.offset;
                break;
            default: body["input"] = f.source; break;
        }
        m["body"] = body;
        doc["mappings"].push_back(m);
    }
    doc["reference_year"] = reference_year_;
    return doc.dump(2);
}

}  // namespace sempub
