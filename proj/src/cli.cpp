#include "sempub/cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "sempub/generator.hpp"
#include "sempub/knowledge.hpp"
#include "sempub/model.hpp"
#include "sempub/semantic.hpp"
#include "sempub/simulator.hpp"
#include "sempub/syntactic.hpp"

namespace sempub::cli {

namespace {

struct RelationArgs {
    std::string first;
    std::string second;
    std::string knowledge;
    std::string mode = "syntactic";
    bool explain = false;
};

struct SimulateArgs {
    std::string scenario;
    std::string report;
    std::string mode = "semantic";
    bool verify = false;
    bool random = false;
    std::uint64_t seed = 0;
    bool no_covering = false;
    bool no_gating = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Context {
    RoutingMode mode;
    KnowledgeBase kb;
};

Context context_for(const RelationArgs& a) {
    Context ctx{RoutingMode::Syntactic, {}};
    try {
        ctx.mode = parse_mode(a.mode);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!a.knowledge.empty()) {
        ctx.kb = KnowledgeBase::load_file(a.knowledge);
    } else if (ctx.mode == RoutingMode::Semantic) {
        throw UsageError("--knowledge is required in semantic mode");
    }
    return ctx;
}

void explain_match(const Event& event, const Subscription& sub, const Context& ctx, std::ostream& out) {
    const bool semantic = ctx.mode == RoutingMode::Semantic;
    const Event e = semantic ? semantic::normalize(event, ctx.kb) : event;
    const Subscription s = semantic ? semantic::normalize(sub, ctx.kb) : sub;
    const auto augmented = semantic ? semantic::augment(e, ctx.kb) : semantic::AugmentedEvent{e, {}};
    out << "event: " << render(e) << "\n";
    out << "subscription: " << render(s) << "\n";
    for (const auto& a : augmented.added) {
        out << "added: " << render(a.pair) << " " << semantic::to_string(a.provenance) << " " << a.origin << "\n";
    }
    const auto pairs = augmented.pairs();
    for (const auto& p : s.predicates) {
        auto it = std::find_if(pairs.begin(), pairs.end(),
                               [&](const Pair& pair) { return syntactic::match_pair(pair, p); });
        out << "predicate: " << render(p) << " <- " << (it == pairs.end() ? "unmatched" : render(*it)) << "\n";
    }
}

int cmd_match(const RelationArgs& a, std::ostream& out) {
    const Context ctx = context_for(a);
    const Event event = parse_event(a.first);
    const Subscription sub = parse_subscription(a.second);
    const bool ok = ctx.mode == RoutingMode::Semantic ? semantic::sem_match(event, sub, ctx.kb)
                                                      : syntactic::match_event(event, sub);
    out << (ok ? "match" : "no-match") << "\n";
    if (a.explain) explain_match(event, sub, ctx, out);
    return ok ? kOk : kNegative;
}

int cmd_covers(const RelationArgs& a, std::ostream& out) {
    const Context ctx = context_for(a);
    const Subscription s1 = parse_subscription(a.first);
    const Subscription s2 = parse_subscription(a.second);
    const bool ok = ctx.mode == RoutingMode::Semantic ? semantic::sem_covers(s1, s2, ctx.kb)
                                                      : syntactic::covers(s1, s2);
    out << (ok ? "covers" : "not-covers") << "\n";
    if (a.explain && ctx.mode == RoutingMode::Semantic) {
        out << "s1: " << render(semantic::normalize(s1, ctx.kb)) << "\n";
        out << "s2: " << render(semantic::normalize(s2, ctx.kb)) << "\n";
    }
    return ok ? kOk : kNegative;
}

int cmd_intersects(const RelationArgs& a, std::ostream& out) {
    const Context ctx = context_for(a);
    const Advertisement adv = parse_advertisement(a.first);
    const Subscription sub = parse_subscription(a.second);
    const bool ok = ctx.mode == RoutingMode::Semantic ? semantic::sem_intersects(adv, sub, ctx.kb)
                                                      : syntactic::intersects(adv, sub);
    out << (ok ? "intersects" : "not-intersects") << "\n";
    if (a.explain && ctx.mode == RoutingMode::Semantic) {
        out << "advertisement: " << render(semantic::normalize(adv, ctx.kb)) << "\n";
        out << "subscription: " << render(semantic::normalize(sub, ctx.kb)) << "\n";
    }
    return ok ? kOk : kNegative;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    Scenario sc;
    if (a.random) {
        GeneratorConfig cfg;
        try {
            cfg.mode = parse_mode(a.mode);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        sc = generate_scenario(a.seed, cfg);
    } else {
        if (a.scenario.empty()) throw UsageError("simulate needs a scenario path or --random");
        sc = load_scenario_file(a.scenario);
    }
    RoutingOptions options;
    options.covering = !a.no_covering;
    options.advertisement_gating = !a.no_gating;
    const SimReport report = run(sc, options);

    if (a.report.empty()) {
        out << report.to_json();
    } else {
        std::ofstream f(a.report, std::ios::binary);
        if (!f) throw UsageError("cannot write report '" + a.report + "'");
        f << report.to_json();
        out << report.to_text();
    }
    if (!a.verify) return kOk;
    switch (report.verdict.status) {
        case VerdictStatus::Pass: return kOk;
        case VerdictStatus::Fail: return kVerifyFail;
        case VerdictStatus::MappingGap: return kMappingGap;
    }
    return kVerifyFail;
}

void add_relation(CLI::App& sub, RelationArgs& a, const char* first, const char* second) {
    sub.add_option(first, a.first)->required();
    sub.add_option(second, a.second)->required();
    sub.add_option("--knowledge", a.knowledge, "knowledge base document (JSON)");
    sub.add_option("--mode", a.mode, "syntactic|semantic")->capture_default_str();
    sub.add_flag("--explain", a.explain, "print normalized forms and witnesses");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Semantic content-based publish/subscribe toolkit", "sempub"};
    app.require_subcommand(1);

    RelationArgs match_args;
    RelationArgs covers_args;
    RelationArgs intersects_args;
    SimulateArgs sim_args;

    auto* match = app.add_subcommand("match", "does an event match a subscription");
    add_relation(*match, match_args, "event", "subscription");
    auto* covers = app.add_subcommand("covers", "does subscription 1 cover subscription 2");
    add_relation(*covers, covers_args, "sub1", "sub2");
    auto* intersects = app.add_subcommand("intersects", "does an advertisement intersect a subscription");
    add_relation(*intersects, intersects_args, "advertisement", "subscription");

    auto* simulate = app.add_subcommand("simulate", "run a broker-overlay scenario");
    simulate->add_option("scenario", sim_args.scenario, "scenario document (JSON)");
    simulate->add_option("--report", sim_args.report, "write the JSON report here");
    simulate->add_flag("--verify", sim_args.verify, "exit 0 on PASS, 3 on FAIL, 4 on MAPPING_GAP");
    simulate->add_flag("--random", sim_args.random, "generate a mapping-free random scenario");
    simulate->add_option("--seed", sim_args.seed, "seed for --random");
    simulate->add_option("--mode", sim_args.mode, "mode for --random")->capture_default_str();
    simulate->add_flag("--no-covering", sim_args.no_covering, "disable covering suppression");
    simulate->add_flag("--no-gating", sim_args.no_gating, "disable advertisement gating");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "sempub: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*match) return cmd_match(match_args, out);
        if (*covers) return cmd_covers(covers_args, out);
        if (*intersects) return cmd_intersects(intersects_args, out);
        if (*simulate) return cmd_simulate(sim_args, out);
    } catch (const std::exception& e) {
        err << "sempub: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace sempub::cli
