#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sempub/routing.hpp"
#include "sempub/scenario.hpp"

namespace sempub {

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A NOTIFY of the index-th published event at a client.
struct Delivery {
    std::string client;
    std::size_t event = 0;

    friend bool operator==(const Delivery&, const Delivery&) = default;
    friend auto operator<=>(const Delivery&, const Delivery&) = default;
};

enum class VerdictStatus { Pass, Fail, MappingGap };

std::string_view to_string(VerdictStatus status);

struct Verdict {
    VerdictStatus status = VerdictStatus::Pass;
    std::vector<Delivery> missing;   // oracle only
    std::vector<Delivery> spurious;  // overlay only
};

struct SimReport {
    using KindCounts = std::array<std::uint64_t, 4>;  // indexed by MessageKind

    RoutingMode mode = RoutingMode::Syntactic;
    RoutingOptions options;
    std::optional<std::uint64_t> seed;
    std::size_t events = 0;
    std::set<Delivery> deliveries;
    std::map<std::string, KindCounts> messages;  // "from -> to"
    std::uint64_t suppressed_subscriptions = 0;
    std::uint64_t gated_subscriptions = 0;
    Verdict verdict;

    std::uint64_t total(MessageKind kind) const;

    std::string to_json() const;
    // Whitespace-separated lines, one fact per line, for diffing.
    std::string to_text() const;
};

// Runs the script over the overlay, each action's cascade to quiescence in
// breadth-first waves ordered by receiving broker id, and attaches the
// oracle verdict.
SimReport run(const Scenario& scenario, RoutingOptions options = {});

// Single broker holding every subscription issued before each publish.
std::set<Delivery> oracle_deliveries(const Scenario& scenario);

Verdict compare(const Scenario& scenario, const std::set<Delivery>& observed);
Verdict verify(const Scenario& scenario, RoutingOptions options = {});

}  // namespace sempub
