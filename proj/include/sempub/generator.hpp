#pragma once

#include <cstddef>
#include <cstdint>

#include "sempub/routing.hpp"
#include "sempub/scenario.hpp"

namespace sempub {

struct GeneratorConfig {
    RoutingMode mode = RoutingMode::Semantic;
    std::size_t max_brokers = 10;
    std::size_t max_subscriptions = 200;
    std::size_t max_events = 1000;
    std::size_t max_concepts = 100;  // hierarchy terms, attributes included
    std::size_t max_attributes = 6;
};

// Random tree overlay, mapping-free knowledge base and script in which every
// publish is determined by an earlier advertisement of its publisher. The
// result depends only on (seed, config); the seed is recorded in it.
Scenario generate_scenario(std::uint64_t seed, const GeneratorConfig& config = {});

}  // namespace sempub
