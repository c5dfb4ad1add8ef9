#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "sempub/knowledge.hpp"

using namespace sempub;
using nlohmann::json;

namespace {

KnowledgeBase library() { return KnowledgeBase::load_file(SEMPUB_DATA_DIR "/library.json"); }

KnowledgeBase from(const json& doc) { return KnowledgeBase::load(doc.dump()); }

json with_edges(std::initializer_list<std::pair<const char*, const char*>> edges) {
    json doc = {{"hierarchy", json::array()}};
    for (auto [c, p] : edges) doc["hierarchy"].push_back({{"child", c}, {"parent", p}});
    return doc;
}

json f1() {
    return {{"name", "f1"},
            {"inputs", {"work experience", "graduation date"}},
            {"guard", "(\"work experience\" = true)"},
            {"output", "professional experience"},
            {"body", {{"kind", "years_since"}, {"input", "graduation date"}}}};
}

}  // namespace

TEST(Load, SynonymGroup) {
    const auto kb = from({{"synonyms", {{{"root", "vehicle"}, {"members", {"car", "automobile"}}}}}});
    EXPECT_EQ(kb.root_term("car"), "vehicle");
    EXPECT_EQ(kb.root_term("automobile"), "vehicle");
    EXPECT_EQ(kb.root_term("vehicle"), "vehicle");
    EXPECT_EQ(kb.root_term("price"), "price");
    EXPECT_EQ(kb.spellings("vehicle"), 3u);
    EXPECT_EQ(kb.spellings("price"), 1u);
}

TEST(Load, Forest) {
    const auto kb = from(with_edges({{"book", "printed material"}, {"encyclopedia", "book"}}));
    EXPECT_EQ(kb.ancestors("encyclopedia"), (std::vector<Term>{"book", "printed material"}));
    EXPECT_TRUE(kb.is_descendant_or_equal("encyclopedia", "printed material"));
}

TEST(Load, TermsAreLowercased) {
    const auto kb = from(with_edges({{"Book", "Printed Material"}}));
    EXPECT_EQ(kb.ancestors("book"), (std::vector<Term>{"printed material"}));
}

TEST(Load, Errors) {
    EXPECT_THROW(from(with_edges({{"a", "b"}, {"b", "a"}})), KnowledgeError);
    EXPECT_THROW(from(with_edges({{"a", "b"}, {"b", "c"}, {"c", "a"}})), KnowledgeError);
    EXPECT_THROW(from(with_edges({{"a", "a"}})), KnowledgeError);
    EXPECT_THROW(from(with_edges({{"a", "b"}, {"a", "c"}})), KnowledgeError);
    EXPECT_THROW(from({{"synonyms",
                        {{{"root", "x"}, {"members", {"y"}}}, {{"root", "z"}, {"members", {"y"}}}}}}),
                 KnowledgeError);
    EXPECT_THROW(from({{"synonyms", {{{"root", "x"}, {"members", {"x"}}}}}}), KnowledgeError);
    // Hierarchy terms must be in root form.
    EXPECT_THROW(from({{"synonyms", {{{"root", "vehicle"}, {"members", {"car"}}}}},
                       {"hierarchy", {{{"child", "car"}, {"parent", "thing"}}}}}),
                 KnowledgeError);
    EXPECT_THROW(KnowledgeBase::load("not json"), KnowledgeError);
    EXPECT_THROW(KnowledgeBase::load(R"({"hierarchy": [{"child": 3, "parent": "x"}]})"), KnowledgeError);
    EXPECT_THROW(KnowledgeBase::load_file("/nonexistent/kb.json"), KnowledgeError);
}

TEST(Load, DuplicateEdgeIgnored) {
    const auto kb = from(with_edges({{"a", "b"}, {"a", "b"}}));
    EXPECT_EQ(kb.edges().size(), 1u);
}

TEST(Load, MappingErrors) {
    auto doc = [](json m) { return json{{"mappings", {m}}, {"reference_year", 2003}}; };

    json empty_inputs = {{"name", "c"}, {"inputs", json::array()}, {"output", "currency"},
                         {"body", {{"kind", "const"}, {"value", "CAD"}}}};
    EXPECT_THROW(from(doc(empty_inputs)), KnowledgeError);

    json unknown = f1();
    unknown["body"]["kind"] = "sqrt";
    EXPECT_THROW(from(doc(unknown)), KnowledgeError);

    json stray = f1();
    stray["body"]["input"] = "age";
    EXPECT_THROW(from(doc(stray)), KnowledgeError);

    json guard = f1();
    guard["guard"] = "(salary > 3)";
    EXPECT_THROW(from(doc(guard)), KnowledgeError);

    json loop = f1();
    loop["output"] = "graduation date";
    EXPECT_THROW(from(doc(loop)), KnowledgeError);

    json linear = {{"name", "l"}, {"inputs", {"a"}}, {"output", "b"}, {"body", {{"kind", "linear"}, {"input", "a"}}}};
    EXPECT_THROW(from(doc(linear)), KnowledgeError);

    EXPECT_THROW(from(json{{"mappings", {f1()}}}), KnowledgeError);  // years_since needs a reference year
}

TEST(Queries, LibraryExamples) {
    const auto kb = library();
    EXPECT_EQ(kb.root_term("automobile"), "vehicle");
    EXPECT_EQ(kb.root_term("vehicle"), "vehicle");
    EXPECT_EQ(kb.ancestors("encyclopedia"), (std::vector<Term>{"book", "printed material"}));
    EXPECT_EQ(kb.ancestors("crocodiles"), (std::vector<Term>{"reptiles"}));
    EXPECT_TRUE(kb.ancestors("price").empty());
    EXPECT_TRUE(kb.ancestors("printed material").empty());
    EXPECT_TRUE(kb.is_descendant_or_equal("encyclopedia", "book"));
    EXPECT_FALSE(kb.is_descendant_or_equal("book", "encyclopedia"));
    EXPECT_TRUE(kb.is_descendant_or_equal("book", "book"));
    EXPECT_TRUE(kb.is_descendant_or_equal("price", "price"));
    EXPECT_FALSE(kb.is_descendant_or_equal("dictionary", "encyclopedia"));
    EXPECT_EQ(kb.depth("encyclopedia"), 2u);
    EXPECT_EQ(kb.subtree("book"), (std::vector<Term>{"book", "dictionary", "encyclopedia"}));
    EXPECT_TRUE(kb.subtree("price").empty());
    EXPECT_EQ(kb.reference_year(), 2003);
}

TEST(Queries, DocumentRoundTrip) {
    const auto kb = library();
    const auto again = KnowledgeBase::load(kb.to_json());
    EXPECT_EQ(again.to_json(), kb.to_json());
    EXPECT_EQ(again.mappings().size(), 1u);
    EXPECT_TRUE(kb.without_mappings().mappings().empty());
    EXPECT_EQ(kb.without_mappings().ancestors("encyclopedia"), kb.ancestors("encyclopedia"));
}

TEST(Mapping, YearsSinceGuarded) {
    const auto kb = library();
    const auto& f = kb.mappings().at(0);
    const Event student = parse_event(R"({(school, "Y"), (degree, "PhD"), ("work experience", true), ("graduation date", 1990)})");
    const auto out = apply_mapping(f, student, 2003);
    ASSERT_TRUE(out);
    EXPECT_EQ(*out, (Pair{"professional experience", std::int64_t{13}}));

    const Event no_work = parse_event(R"({("work experience", false), ("graduation date", 1990)})");
    EXPECT_FALSE(apply_mapping(f, no_work, 2003));
    EXPECT_FALSE(apply_mapping(f, parse_event(R"({("graduation date", 1990)})"), 2003));
    EXPECT_FALSE(apply_mapping(f, parse_event(R"({("work experience", true), ("graduation date", "1990")})"), 2003));
}

TEST(Mapping, Kinds) {
    MappingFunction rename{"r", {"price"}, std::nullopt, "value", MappingKind::Rename, "price", {}, 1, 0};
    EXPECT_EQ(*apply_mapping(rename, parse_event("{(price, 1500)}"), 0), (Pair{"value", std::int64_t{1500}}));
    EXPECT_FALSE(apply_mapping(rename, parse_event("{(cost, 1500)}"), 0));

    MappingFunction konst{"c", {"country"}, parse_predicate(R"((country = "canada"))"), "currency",
                          MappingKind::Const, {}, std::string("cad"), 1, 0};
    EXPECT_EQ(*apply_mapping(konst, parse_event(R"({(country, "Canada")})"), 0), (Pair{"currency", std::string("cad")}));
    EXPECT_FALSE(apply_mapping(konst, parse_event(R"({(country, "Peru")})"), 0));

    MappingFunction linear{"l", {"cents"}, std::nullopt, "dollars", MappingKind::Linear, "cents", {}, 3, -2};
    EXPECT_EQ(*apply_mapping(linear, parse_event("{(cents, 5)}"), 0), (Pair{"dollars", std::int64_t{13}}));

    const Pair pairs[] = {{"cents", std::int64_t{1}}, {"cents", std::int64_t{100}}};
    EXPECT_EQ(*apply_mapping(linear, pairs, 0), (Pair{"dollars", std::int64_t{1}}));
}

TEST(Mapping, OverflowIsAnError) {
    MappingFunction linear{"big", {"x"}, std::nullopt, "y", MappingKind::Linear, "x", {}, 4, 0};
    const Event e{{{"x", std::numeric_limits<std::int64_t>::max() / 2}}};
    try {
        apply_mapping(linear, e, 0);
        FAIL();
    } catch (const EvaluationError& err) {
        EXPECT_EQ(err.function(), "big");
    }
    MappingFunction since{"s", {"x"}, std::nullopt, "y", MappingKind::YearsSince, "x", {}, 1, 0};
    EXPECT_THROW(apply_mapping(since, Event{{{"x", std::numeric_limits<std::int64_t>::min()}}}, 5), EvaluationError);
}

TEST(Mapping, Deterministic) {
    const auto kb = library();
    const Event e = parse_event(R"({("work experience", true), ("graduation date", 1971)})");
    const auto a = apply_mapping(kb.mappings()[0], e, 2003);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(apply_mapping(kb.mappings()[0], e, 2003), a);
    EXPECT_EQ(apply_mapping(kb.mappings()[0], e, 2010)->value, Value{std::int64_t{39}});
}

// Random forests with synonym groups, compared against the edge list.
class RandomForest : public ::testing::TestWithParam<int> {};

TEST_P(RandomForest, OrderAndChains) {
    std::mt19937_64 rng(GetParam());
    const std::size_t n = 2 + rng() % 30;
    std::vector<Term> terms;
    std::map<Term, Term> parent;
    json doc = {{"hierarchy", json::array()}, {"synonyms", json::array()}};
    for (std::size_t i = 0; i < n; ++i) {
        terms.push_back("n" + std::to_string(i));
        if (i > 0 && rng() % 4 != 0) {
            parent[terms[i]] = terms[rng() % i];
            doc["hierarchy"].push_back({{"child", terms[i]}, {"parent", parent[terms[i]]}});
        }
    }
    for (std::size_t g = 0; g < 3; ++g) {
        doc["synonyms"].push_back({{"root", terms[g % n] + "x"}, {"members", {"alias" + std::to_string(g)}}});
    }
    const auto kb = from(doc);

    const std::size_t in_tree = kb.hierarchy_terms().size();
    for (const auto& t : terms) {
        EXPECT_EQ(kb.root_term(kb.root_term(t)), kb.root_term(t));
        const auto up = kb.ancestors(t);
        if (in_tree) EXPECT_LT(up.size(), in_tree);
        Term cur = t;
        for (const auto& a : up) {
            ASSERT_EQ(parent.at(cur), a);
            EXPECT_EQ(kb.depth(a) + 1, kb.depth(cur));
            cur = a;
        }
        EXPECT_EQ(parent.count(cur), 0u);
    }
    for (const auto& a : terms) {
        EXPECT_TRUE(kb.is_descendant_or_equal(a, a));
        for (const auto& b : terms) {
            const bool ab = kb.is_descendant_or_equal(a, b);
            if (a != b && ab) EXPECT_FALSE(kb.is_descendant_or_equal(b, a));
            for (const auto& c : terms) {
                if (ab && kb.is_descendant_or_equal(b, c)) EXPECT_TRUE(kb.is_descendant_or_equal(a, c));
            }
            const auto& sub = kb.subtree(b);
            const bool listed = std::find(sub.begin(), sub.end(), a) != sub.end();
            if (kb.in_hierarchy(b)) EXPECT_EQ(listed, ab) << a << " under " << b;
        }
    }
    for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(kb.root_term("alias" + std::to_string(g)), terms[g % n] + "x");
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomForest, ::testing::Range(1, 21));
