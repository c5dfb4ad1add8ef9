#include <gtest/gtest.h>

#include "sempub/routing.hpp"

using namespace sempub;

namespace {

std::shared_ptr<const KnowledgeBase> library() {
    static const auto kb =
        std::make_shared<const KnowledgeBase>(KnowledgeBase::load_file(SEMPUB_DATA_DIR "/library.json"));
    return kb;
}

Broker make(const std::string& id, std::initializer_list<const char*> neighbors,
            std::initializer_list<const char*> clients, RoutingMode mode = RoutingMode::Syntactic,
            RoutingOptions options = {}) {
    Broker b(id, library(), mode, options);
    for (const char* n : neighbors) b.add_neighbor(n);
    for (const char* c : clients) b.add_client(c);
    return b;
}

std::vector<std::string> destinations(const std::vector<Message>& out, MessageKind kind) {
    std::vector<std::string> d;
    for (const auto& m : out) {
        if (m.kind == kind) d.push_back(m.to.str());
    }
    return d;
}

const char* kS1 = R"((product = "computer") AND (brand = "IBM") AND (price <= 1600))";
const char* kS2 = R"((product = "computer") AND (brand = "IBM") AND (price <= 1500))";
const char* kGapAdv = R"((product = "printed material") AND (price >= 10))";
const char* kGapSub = R"((product = "book") AND (price <= 20))";

}  // namespace

TEST(Mode, Parse) {
    EXPECT_EQ(parse_mode("semantic"), RoutingMode::Semantic);
    EXPECT_EQ(parse_mode("SYNTACTIC"), RoutingMode::Syntactic);
    EXPECT_THROW(parse_mode("fuzzy"), std::invalid_argument);
}

TEST(Advertise, LeafForwardsToItsNeighbor) {
    auto b = make("b1", {"b2"}, {"p"});
    const auto out = b.handle_advertise(parse_advertisement("(x = 1)", "a1"), LinkId::client("p"));
    EXPECT_EQ(destinations(out, MessageKind::Advertise), (std::vector<std::string>{"broker:b2"}));
}

TEST(Advertise, DuplicateIsIgnored) {
    auto b = make("b1", {"b2", "b3"}, {"p"});
    const auto a = parse_advertisement("(x = 1)", "a1");
    EXPECT_EQ(b.handle_advertise(a, LinkId::client("p")).size(), 2u);
    EXPECT_TRUE(b.handle_advertise(a, LinkId::client("p")).empty());
    EXPECT_EQ(b.advertisements().size(), 1u);
}

TEST(Advertise, ChainStoresOriginTowardsPublisher) {
    auto b1 = make("b1", {"b2"}, {"p"});
    auto b2 = make("b2", {"b1", "b3"}, {});
    auto b3 = make("b3", {"b2"}, {});
    const auto a = parse_advertisement("(x = 1)", "a1");
    auto m1 = b1.handle_advertise(a, LinkId::client("p"));
    ASSERT_EQ(m1.size(), 1u);
    auto m2 = b2.handle(m1[0]);
    ASSERT_EQ(destinations(m2, MessageKind::Advertise), (std::vector<std::string>{"broker:b3"}));
    auto m3 = b3.handle(m2[0]);
    EXPECT_TRUE(m3.empty());
    EXPECT_EQ(b2.advertisements().at(0).origin, LinkId::broker("b1"));
    EXPECT_EQ(b3.advertisements().at(0).origin, LinkId::broker("b2"));
}

TEST(Subscribe, CoveredSubscriptionIsSuppressed) {
    auto b = make("b1", {"n"}, {"c1", "c2"});
    b.handle_advertise(parse_advertisement(kS1, "a"), LinkId::broker("n"));
    const auto first = b.handle_subscribe(parse_subscription(kS1, "s1"), LinkId::client("c1"));
    EXPECT_EQ(destinations(first, MessageKind::Subscribe), (std::vector<std::string>{"broker:n"}));
    const auto second = b.handle_subscribe(parse_subscription(kS2, "s2"), LinkId::client("c2"));
    EXPECT_TRUE(second.empty());
    EXPECT_EQ(b.suppressed(), 1u);
}

TEST(Subscribe, CoveringCanBeDisabled) {
    auto b = make("b1", {"n"}, {"c1", "c2"}, RoutingMode::Syntactic, {.covering = false});
    b.handle_advertise(parse_advertisement(kS1, "a"), LinkId::broker("n"));
    b.handle_subscribe(parse_subscription(kS1, "s1"), LinkId::client("c1"));
    EXPECT_EQ(b.handle_subscribe(parse_subscription(kS2, "s2"), LinkId::client("c2")).size(), 1u);
}

TEST(Subscribe, SemanticCoveringSuppresses) {
    auto b = make("b1", {"n"}, {"c1", "c2"}, RoutingMode::Semantic);
    b.handle_advertise(parse_advertisement(R"((product = "printed material") AND (topic = "semantic web"))", "a"),
                       LinkId::broker("n"));
    const auto s1 = parse_subscription(R"((product = "printed material") AND (topic = "semantic web"))", "s1");
    const auto s2 = parse_subscription(R"((product = "book") AND (topic = "semantic web"))", "s2");
    EXPECT_EQ(b.handle_subscribe(s1, LinkId::client("c1")).size(), 1u);
    EXPECT_TRUE(b.handle_subscribe(s2, LinkId::client("c2")).empty());
    EXPECT_EQ(b.suppressed(), 1u);

    auto syn = make("b1", {"n"}, {"c1", "c2"}, RoutingMode::Syntactic);
    syn.handle_advertise(parse_advertisement(R"((product = "printed material") AND (topic = "semantic web"))", "a"),
                         LinkId::broker("n"));
    syn.handle_subscribe(s1, LinkId::client("c1"));
    EXPECT_EQ(syn.suppressed(), 0u);
}

TEST(Subscribe, AdvertisementGap) {
    for (auto mode : {RoutingMode::Syntactic, RoutingMode::Semantic}) {
        auto b = make("b1", {"n"}, {"c"}, mode);
        b.handle_advertise(parse_advertisement(kGapAdv, "a"), LinkId::broker("n"));
        const auto out = b.handle_subscribe(parse_subscription(kGapSub, "s"), LinkId::client("c"));
        if (mode == RoutingMode::Syntactic) {
            EXPECT_TRUE(out.empty());
            EXPECT_EQ(b.gated(), 1u);
        } else {
            EXPECT_EQ(destinations(out, MessageKind::Subscribe), (std::vector<std::string>{"broker:n"}));
        }
    }
}

TEST(Subscribe, GatingCanBeDisabled) {
    auto b = make("b1", {"n"}, {"c"}, RoutingMode::Syntactic, {.covering = true, .advertisement_gating = false});
    EXPECT_EQ(b.handle_subscribe(parse_subscription(kGapSub, "s"), LinkId::client("c")).size(), 1u);
}

TEST(Subscribe, FollowsLateAdvertisement) {
    auto b = make("b1", {"n", "m"}, {"c"});
    EXPECT_TRUE(b.handle_subscribe(parse_subscription(kS1, "s1"), LinkId::client("c")).empty());
    const auto out = b.handle_advertise(parse_advertisement(kS2, "a"), LinkId::broker("n"));
    EXPECT_EQ(destinations(out, MessageKind::Subscribe), (std::vector<std::string>{"broker:n"}));
    EXPECT_EQ(destinations(out, MessageKind::Advertise), (std::vector<std::string>{"broker:m"}));
    // Already forwarded; a second advertisement from n sends nothing new.
    const auto again = b.handle_advertise(parse_advertisement(kS1, "a2"), LinkId::broker("n"));
    EXPECT_TRUE(destinations(again, MessageKind::Subscribe).empty());
}

TEST(Subscribe, DuplicateIsIgnored) {
    auto b = make("b1", {"n"}, {"c"});
    b.handle_advertise(parse_advertisement(kS1, "a"), LinkId::broker("n"));
    const auto s = parse_subscription(kS1, "s1");
    EXPECT_EQ(b.handle_subscribe(s, LinkId::client("c")).size(), 1u);
    EXPECT_TRUE(b.handle_subscribe(s, LinkId::client("c")).empty());
    EXPECT_EQ(b.subscriptions().size(), 1u);
}

TEST(Publish, OneCopyPerLink) {
    auto b = make("b1", {"n", "m"}, {"p"});
    b.handle_subscribe(parse_subscription(kS1, "s1"), LinkId::broker("n"));
    b.handle_subscribe(parse_subscription(kS2, "s2"), LinkId::broker("n"));
    const auto out =
        b.handle_publish(parse_event(R"({(product, "computer"), (brand, "IBM"), (price, 1400)})"), LinkId::client("p"));
    EXPECT_EQ(destinations(out, MessageKind::Publish), (std::vector<std::string>{"broker:n"}));
}

TEST(Publish, NotifiesClientsAndSkipsSender) {
    auto b = make("b1", {"n"}, {"c1", "c2"});
    b.handle_subscribe(parse_subscription(kS1, "s1"), LinkId::client("c1"));
    b.handle_subscribe(parse_subscription(kS1, "s2"), LinkId::broker("n"));
    const auto e = parse_event(R"({(product, "computer"), (brand, "IBM"), (price, 1400)})");
    const auto out = b.handle_publish(e, LinkId::broker("n"));
    EXPECT_EQ(destinations(out, MessageKind::Notify), (std::vector<std::string>{"client:c1"}));
    EXPECT_TRUE(destinations(out, MessageKind::Publish).empty());
}

TEST(Publish, SemanticMatchAtTheBroker) {
    const auto e = parse_event(R"({(encyclopedia, "Stone Age"), (subject, "crocodiles")})");
    const auto s = parse_subscription(R"((book = "Stone Age") AND (subject = "reptiles"))", "s");
    auto sem = make("b1", {}, {"c", "p"}, RoutingMode::Semantic);
    sem.handle_subscribe(s, LinkId::client("c"));
    EXPECT_EQ(destinations(sem.handle_publish(e, LinkId::client("p")), MessageKind::Notify),
              (std::vector<std::string>{"client:c"}));
    auto syn = make("b1", {}, {"c", "p"}, RoutingMode::Syntactic);
    syn.handle_subscribe(s, LinkId::client("c"));
    EXPECT_TRUE(syn.handle_publish(e, LinkId::client("p")).empty());
}

TEST(Errors, UnknownLinksAndNotify) {
    auto b = make("b1", {"n"}, {"c"});
    EXPECT_THROW(b.handle_subscribe(parse_subscription("(x = 1)", "s"), LinkId::client("ghost")), RoutingError);
    EXPECT_THROW(b.handle_advertise(parse_advertisement("(x = 1)", "a"), LinkId::broker("ghost")), RoutingError);
    Message notify{MessageKind::Notify, parse_event("{(x, 1)}"), LinkId::broker("n"), LinkId::broker("b1")};
    EXPECT_THROW(b.handle(notify), RoutingError);
}
