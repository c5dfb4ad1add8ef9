#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sempub/knowledge.hpp"
#include "sempub/model.hpp"
#include "sempub/routing.hpp"

namespace sempub {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ActionKind { Advertise, Subscribe, Publish };

std::string_view to_string(ActionKind kind);

struct Action {
    ActionKind kind = ActionKind::Publish;
    std::string client;
    std::variant<Advertisement, Subscription, Event> payload;
};

struct ClientSpec {
    std::string id;
    std::string broker;
};

struct Scenario {
    std::vector<std::string> brokers;
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<ClientSpec> clients;
    std::shared_ptr<const KnowledgeBase> knowledge = std::make_shared<const KnowledgeBase>();
    RoutingMode mode = RoutingMode::Syntactic;
    std::vector<Action> script;
    std::optional<std::uint64_t> seed;

    const ClientSpec& client(const std::string& id) const;

    // Self-contained document with the knowledge base inlined.
    std::string to_json() const;
};

// Document: {brokers, edges, clients, knowledge, mode, script}. `knowledge`
// is a path (relative to base_dir) or an inline knowledge object.
Scenario load_scenario(std::string_view document, const std::filesystem::path& base_dir = {});
Scenario load_scenario_file(const std::filesystem::path& path);

// Tree overlay, resolvable references, unique subscription and
// advertisement ids, and every publish determined (per mode) by an earlier
// advertisement of the same client. Throws ScenarioError.
void validate(const Scenario& scenario);

}  // namespace sempub
