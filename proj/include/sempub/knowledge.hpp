#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sempub/model.hpp"

namespace sempub {

class KnowledgeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a mapping function cannot produce its output (overflow).
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(std::string function, const std::string& message);

    const std::string& function() const noexcept { return function_; }

private:
    std::string function_;
};

struct SynonymGroup {
    Term root;
    std::vector<Term> members;
};

struct HierarchyEdge {
    Term child;
    Term parent;
};

enum class MappingKind { Rename, Const, Linear, YearsSince };

std::string_view to_string(MappingKind kind);

// A mapping function from the closed combinator set. `source` names the
// input read by RENAME, LINEAR and YEARS_SINCE.
struct MappingFunction {
    std::string name;
    std::vector<Term> inputs;
    std::optional<Predicate> guard;
    Term output;
    MappingKind kind = MappingKind::Rename;
    Term source;
    Value constant;
    std::int64_t scale = 1;
    std::int64_t offset = 0;
};

// Produces f's output pair when every input attribute is present and the
// guard holds. When an attribute occurs more than once the first pair wins.
// LINEAR and YEARS_SINCE yield nothing on a non-integer source value.
std::optional<Pair> apply_mapping(const MappingFunction& f, std::span<const Pair> pairs,
                                  std::int64_t reference_year);
std::optional<Pair> apply_mapping(const MappingFunction& f, const Event& event,
                                  std::int64_t reference_year);

// Synonyms, a single-parent concept forest shared by attribute and value
// terms, and mapping functions. Immutable once loaded.
class KnowledgeBase {
public:
    KnowledgeBase() = default;

    static KnowledgeBase load(std::string_view document);
    static KnowledgeBase load_file(const std::filesystem::path& path);
    static KnowledgeBase from_json(const nlohmann::json& doc);

    Term root_term(const Term& term) const;

    // Strict ancestors, nearest first.
    std::vector<Term> ancestors(const Term& term) const;
    bool is_descendant_or_equal(const Term& t1, const Term& t2) const;

    const Term* parent(const Term& term) const;
    bool has_parent(const Term& term) const { return parent(term) != nullptr; }
    bool has_children(const Term& term) const;
    std::size_t depth(const Term& term) const;

    // The term itself followed by all of its descendants.
    const std::vector<Term>& subtree(const Term& term) const;

    bool in_hierarchy(const Term& term) const;

    // Number of surface names normalizing to this root term (itself included).
    std::size_t spellings(const Term& root) const;

    const std::vector<SynonymGroup>& synonyms() const { return synonyms_; }
    const std::vector<HierarchyEdge>& edges() const { return edges_; }
    const std::vector<MappingFunction>& mappings() const { return mappings_; }
    std::int64_t reference_year() const { return reference_year_; }

    // Every term the hierarchy mentions, sorted.
    std::vector<Term> hierarchy_terms() const;

    KnowledgeBase without_mappings() const;

    // Document form accepted by load().
    std::string to_json() const;

private:
    void index();

    std::vector<SynonymGroup> synonyms_;
    std::vector<HierarchyEdge> edges_;
    std::vector<MappingFunction> mappings_;
    std::int64_t reference_year_ = 0;

    std::map<Term, Term> root_of_;
    std::map<Term, std::size_t> spellings_;
    std::map<Term, Term> parent_of_;
    std::map<Term, std::vector<Term>> children_of_;
    std::map<Term, std::vector<Term>> subtree_of_;
};

}  // namespace sempub
