#ifndef COGS_INTENT_HPP
#define COGS_INTENT_HPP

#include <map>
#include <string>
#include <vector>

#include "cogs/transcript.hpp"
#include "cogs/xr.hpp"

namespace cogs {

/// A parameter the planner could not resolve from speech; its value must
/// come from the gesture segment aligned with `token`.
struct AmbiguousParam {
    std::string name;
    ParamKind kind = ParamKind::Object;
    TokenSpan token;
    std::vector<std::string> ignore_objects;  // obstacles to skip when pointing
};

/// One planned call: parameters split into speech-resolved literals and
/// gesture-pending ambiguous slots. The two sets partition the signature.
struct PlannedCall {
    std::string function;
    std::map<std::string, Value> text_params;
    std::vector<AmbiguousParam> amb_params;
};

struct Plan {
    std::vector<PlannedCall> calls;
};

/// Planner prompt: role instructions, one block per catalog function, the
/// serialized scene, and the strict reply schema. voice_only renders the
/// baseline variant that forbids ambiguous parameters entirely.
std::string render_metaprompt(const FunctionCatalog& catalog, const Scene& scene,
                              bool voice_only = false);

/// Deterministic keyword-grammar planner; the offline stand-in for the
/// language-model backend. Throws NoFunctionMatched (message = the general
/// error text) and EmptyTranscript.
Plan plan_rules(const Transcript& t, const Scene& scene,
                const FunctionCatalog& catalog = FunctionCatalog::default_catalog());

/// Strict reply schema:
/// {"calls":[{"function":str,"text_params":{name:value},
///            "amb_params":[{"name":str,"kind":str,"token":[i,j],
///                           "ignore_objects":[str]}]}]}
/// Any deviation, unknown function, bad token span, or text/amb partition
/// violation throws MalformedReply with the offending detail.
Plan parse_backend_reply(const std::string& reply_text, const Transcript& t,
                         const FunctionCatalog& catalog = FunctionCatalog::default_catalog());

struct IntentBackendConfig {
    std::string endpoint;  // e.g. "http://127.0.0.1:8089/plan"
    std::string auth_token;
    double timeout_s = 30.0;

    /// Reads COGS_LLM_ENDPOINT, COGS_LLM_TOKEN, COGS_LLM_TIMEOUT_S.
    static IntentBackendConfig from_environment();
};

/// One blocking POST of the metaprompt plus the indexed transcript; the
/// reply body goes through parse_backend_reply. Throws BackendUnreachable,
/// BackendTimeout, MalformedReply.
Plan plan_llm(const Transcript& t, const Scene& scene, const FunctionCatalog& catalog,
              const IntentBackendConfig& config);

}  // namespace cogs

#endif
