#ifndef KEYFORGE_SESSION_HPP
#define KEYFORGE_SESSION_HPP

#include <memory>
#include <string>

#include "keyforge/limitchain.hpp"
#include "keyforge/valuation.hpp"

namespace keyforge {

// A session: base field, base valuation, the chain-represented valuation nu,
// and optionally a continuous-chain generator. Built from a JSON config
// (schema version 1); every entry is validated against the module
// preconditions before any computation runs.
struct SessionConfig {
    FieldPtr field;
    GroupDescriptor group;
    BaseValuation base;
    ValuationHandle nu;
    std::shared_ptr<LimitChain> chain; // null when the config has no limit_chain
};

SessionConfig load_session(const std::string& json_text);
SessionConfig load_session_file(const std::string& path);

} // namespace keyforge

#endif
