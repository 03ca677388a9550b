#include "cogs/intent.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <optional>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace cogs {

namespace {

using nlohmann::json;

std::string lower(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

/// Lowercased word with surrounding punctuation stripped.
std::string clean(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::ispunct(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::ispunct(static_cast<unsigned char>(s[b - 1]))) --b;
    return lower(s.substr(a, b - a));
}

std::vector<std::string> name_words(const std::string& name) {
    std::vector<std::string> out;
    std::istringstream in(name);
    std::string w;
    while (in >> w) out.push_back(clean(w));
    return out;
}

bool is_color_word(const std::string& w) {
    static const char* names[] = {"aqua", "black",  "blue",   "fuchsia", "gray", "green",
                                  "lime", "maroon", "navy",   "olive",   "purple", "red",
                                  "silver", "teal", "white",  "yellow"};
    for (const char* n : names)
        if (w == n) return true;
    return false;
}

enum class VerbGroup { Move, Rotate, Resize, Select, Color, Draw, Set };

std::optional<VerbGroup> verb_group(const std::string& w) {
    static const std::pair<const char*, VerbGroup> table[] = {
        {"move", VerbGroup::Move},     {"put", VerbGroup::Move},
        {"place", VerbGroup::Move},    {"hang", VerbGroup::Move},
        {"rotate", VerbGroup::Rotate}, {"turn", VerbGroup::Rotate},
        {"spin", VerbGroup::Rotate},   {"resize", VerbGroup::Resize},
        {"enlarge", VerbGroup::Resize},{"shrink", VerbGroup::Resize},
        {"scale", VerbGroup::Resize},  {"select", VerbGroup::Select},
        {"pick", VerbGroup::Select},   {"choose", VerbGroup::Select},
        {"color", VerbGroup::Color},   {"paint", VerbGroup::Color},
        {"draw", VerbGroup::Draw},     {"sketch", VerbGroup::Draw},
        {"set", VerbGroup::Set},
    };
    for (const auto& [name, g] : table)
        if (w == name) return g;
    return std::nullopt;
}

struct Clause {
    size_t first = 0;
    size_t last = 0;  // inclusive
};

struct ClauseView {
    const std::vector<std::string>& words;  // cleaned, whole transcript
    Clause clause;

    const std::string& at(size_t i) const { return words[i]; }
    size_t begin() const { return clause.first; }
    size_t end() const { return clause.last + 1; }

    std::optional<size_t> find_word(const std::string& w, size_t from) const {
        for (size_t i = std::max(from, begin()); i < end(); ++i)
            if (words[i] == w) return i;
        return std::nullopt;
    }
    std::optional<TokenSpan> find_phrase(const std::vector<std::string>& phrase) const {
        for (size_t i = begin(); i + phrase.size() <= end(); ++i) {
            bool ok = true;
            for (size_t k = 0; k < phrase.size(); ++k)
                if (words[i + k] != phrase[k]) { ok = false; break; }
            if (ok) return TokenSpan{i, i + phrase.size() - 1};
        }
        return std::nullopt;
    }
    bool contains_word(const std::string& w) const { return find_word(w, begin()).has_value(); }
    TokenSpan whole() const { return TokenSpan{clause.first, clause.last}; }
};

/// Longest scene name whose words appear consecutively in the clause.
struct NameMatch {
    const SceneObject* object = nullptr;
    TokenSpan span;
};

std::optional<NameMatch> match_full_name(const ClauseView& cv, const Scene& scene,
                                         size_t from = 0) {
    std::optional<NameMatch> best;
    for (const auto& obj : scene.objects) {
        auto nw = name_words(obj.name);
        if (nw.empty()) continue;
        for (size_t i = std::max(from, cv.begin()); i + nw.size() <= cv.end(); ++i) {
            bool ok = true;
            for (size_t k = 0; k < nw.size(); ++k)
                if (cv.at(i + k) != nw[k]) { ok = false; break; }
            if (!ok) continue;
            if (!best || nw.size() > name_words(best->object->name).size())
                best = NameMatch{&obj, TokenSpan{i, i + nw.size() - 1}};
            break;
        }
    }
    return best;
}

/// A single clause word that is part of some object's name ("painting" for
/// "Starry Night painting"): an ambiguous reference, not a textual one.
std::optional<TokenSpan> match_partial_name(const ClauseView& cv, const Scene& scene) {
    for (size_t i = cv.begin(); i < cv.end(); ++i) {
        for (const auto& obj : scene.objects) {
            for (const auto& w : name_words(obj.name)) {
                if (cv.at(i) != w) continue;
                size_t first = i;
                if (i > cv.begin() &&
                    (cv.at(i - 1) == "the" || cv.at(i - 1) == "this" || cv.at(i - 1) == "that"))
                    first = i - 1;
                return TokenSpan{first, i};
            }
        }
    }
    return std::nullopt;
}

bool reserved_this(const ClauseView& cv, size_t i) {
    if (i + 1 < cv.end()) {
        const std::string& next = cv.at(i + 1);
        if (next == "way" || next == "large" || next == "big" || next == "much")
            return true;
    }
    return i > cv.begin() && cv.at(i - 1) == "like";
}

std::optional<TokenSpan> find_demonstrative(const ClauseView& cv, bool plural_ok) {
    for (size_t i = cv.begin(); i < cv.end(); ++i) {
        const std::string& w = cv.at(i);
        if (plural_ok && (w == "them" || w == "these" || w == "those"))
            return TokenSpan{i, i};
        if (w == "it") return TokenSpan{i, i};
        if ((w == "this" || w == "that") && !reserved_this(cv, i)) return TokenSpan{i, i};
    }
    return std::nullopt;
}

std::optional<double> parse_size_literal(const ClauseView& cv) {
    for (size_t i = cv.begin(); i < cv.end(); ++i) {
        const std::string& w = cv.at(i);
        char* endp = nullptr;
        double v = std::strtod(w.c_str(), &endp);
        if (endp == w.c_str()) continue;
        std::string unit = endp && *endp ? std::string(endp) : std::string();
        if (unit.empty() && i + 1 < cv.end()) unit = cv.at(i + 1);
        if (unit == "cm" || unit == "centimeter" || unit == "centimeters") return v / 100.0;
        if (unit == "m" || unit == "meter" || unit == "meters") return v;
    }
    return std::nullopt;
}

/// "behind <name>" / "in front of <name>" name obstacles to disregard.
std::vector<std::string> find_ignored_obstacles(const ClauseView& cv, const Scene& scene) {
    std::vector<std::string> out;
    for (size_t i = cv.begin(); i < cv.end(); ++i) {
        size_t after;
        if (cv.at(i) == "behind") {
            after = i + 1;
        } else if (cv.at(i) == "front" && i > cv.begin() && cv.at(i - 1) == "in") {
            after = i + 1;
            if (after < cv.end() && cv.at(after) == "of") ++after;
        } else {
            continue;
        }
        if (auto m = match_full_name(cv, scene, after))
            if (std::find(out.begin(), out.end(), m->object->name) == out.end())
                out.push_back(m->object->name);
    }
    return out;
}

std::string pick_function(const ClauseView& cv, VerbGroup g) {
    auto like_this = [&] {
        return cv.find_phrase({"like", "this"}) || cv.find_phrase({"like", "that"});
    };
    switch (g) {
        case VerbGroup::Move:
            return cv.contains_word("along") || like_this() ? "move_path" : "move";
        case VerbGroup::Rotate:
            if (cv.find_phrase({"this", "way"}) || cv.find_phrase({"that", "way"}) ||
                cv.contains_word("toward") || cv.contains_word("towards") ||
                cv.contains_word("face"))
                return "rotate_dir";
            return "rotate";
        case VerbGroup::Resize: return "resize";
        case VerbGroup::Select: return "select";
        case VerbGroup::Draw: return "draw_path";
        case VerbGroup::Color: return "set_color";
        case VerbGroup::Set: return cv.contains_word("color") ? "set_color" : "";
    }
    return "";
}

void fill_param(PlannedCall& call, const ParamSpec& spec, const ClauseView& cv,
                const Scene& scene) {
    auto amb = [&](TokenSpan span, std::vector<std::string> ignore = {}) {
        call.amb_params.push_back({spec.name, spec.kind, span, std::move(ignore)});
    };

    switch (spec.kind) {
        case ParamKind::Object: {
            if (auto m = match_full_name(cv, scene)) {
                call.text_params[spec.name] = m->object->name;
                return;
            }
            if (auto d = find_demonstrative(cv, /*plural_ok=*/true)) return amb(*d);
            if (auto p = match_partial_name(cv, scene)) return amb(*p);
            return amb(cv.whole());
        }
        case ParamKind::ObjectList: {
            if (auto d = find_demonstrative(cv, /*plural_ok=*/true)) return amb(*d);
            return amb(cv.whole());
        }
        case ParamKind::Position: {
            auto ignore = find_ignored_obstacles(cv, scene);
            if (auto i = cv.find_word("here", 0)) return amb(TokenSpan{*i, *i}, ignore);
            if (auto i = cv.find_word("there", 0)) return amb(TokenSpan{*i, *i}, ignore);
            return amb(cv.whole(), ignore);
        }
        case ParamKind::Direction: {
            if (auto s = cv.find_phrase({"this", "way"})) return amb(*s);
            if (auto s = cv.find_phrase({"that", "way"})) return amb(*s);
            return amb(cv.whole());
        }
        case ParamKind::RotationDelta: {
            if (auto s = cv.find_phrase({"like", "this"})) return amb(*s);
            if (auto s = cv.find_phrase({"like", "that"})) return amb(*s);
            return amb(cv.whole());
        }
        case ParamKind::Size: {
            if (auto s = cv.find_phrase({"this", "large"})) return amb(*s);
            if (auto s = cv.find_phrase({"this", "big"})) return amb(*s);
            if (auto s = cv.find_phrase({"this", "much"})) return amb(*s);
            if (auto v = parse_size_literal(cv)) {
                call.text_params[spec.name] = *v;
                return;
            }
            return amb(cv.whole());
        }
        case ParamKind::Path: {
            if (auto s = cv.find_phrase({"like", "this"})) return amb(*s);
            if (auto s = cv.find_phrase({"like", "that"})) return amb(*s);
            return amb(cv.whole());
        }
        case ParamKind::Color: {
            for (size_t i = cv.begin(); i < cv.end(); ++i) {
                if (is_color_word(cv.at(i))) {
                    call.text_params[spec.name] = cv.at(i);
                    return;
                }
            }
            if (auto d = find_demonstrative(cv, true)) return amb(*d);
            return amb(cv.whole());
        }
        case ParamKind::ShapeType: {
            for (size_t i = cv.begin(); i < cv.end(); ++i) {
                const std::string& w = cv.at(i);
                if (w == "line" || w == "circle" || w == "sine") {
                    call.text_params[spec.name] = w;
                    return;
                }
                if (w == "straight") {
                    call.text_params[spec.name] = std::string("line");
                    return;
                }
            }
            return amb(cv.whole());
        }
    }
}

std::vector<Clause> split_clauses(const std::vector<std::string>& words) {
    std::vector<Clause> out;
    size_t start = 0;
    for (size_t i = 0; i < words.size(); ++i) {
        bool boundary = false;
        if (words[i] == "then") boundary = true;
        if (words[i] == "and" && i + 1 < words.size() && verb_group(words[i + 1]))
            boundary = true;
        if (boundary) {
            if (i > start) out.push_back({start, i - 1});
            start = i + 1;
        }
    }
    if (start < words.size()) out.push_back({start, words.size() - 1});
    return out;
}

}  // namespace

std::string render_metaprompt(const FunctionCatalog& catalog, const Scene& scene,
                              bool voice_only) {
    std::ostringstream out;
    out << "You are the command planner of a hands-tracked 3D manipulation system.\n"
           "The user speaks a command while gesturing; you receive the utterance\n"
           "as indexed, timestamped words. Plan the function calls that carry out\n"
           "the command.\n\n"
           "Steps:\n"
           "1. Split the utterance into one or more function calls, in spoken order.\n";
    if (voice_only) {
        out << "2. Resolve every parameter of every call from the words alone.\n"
               "3. If any parameter cannot be resolved from the words, reply with\n"
               "   {\"calls\":[]} instead of guessing.\n";
    } else {
        out << "2. Resolve each parameter from the words when possible (a text\n"
               "   parameter); otherwise mark it ambiguous and give the inclusive\n"
               "   word-index span the user's gesture aligns with.\n"
               "3. Every parameter appears exactly once: as a text parameter or as\n"
               "   an ambiguous parameter, never both and never neither.\n"
               "4. When the command names obstacles to disregard (\"behind the\n"
               "   couch\"), put those object names in the position parameter's\n"
               "   ignore_objects list.\n";
    }
    out << "\nFunctions:\n";
    for (const auto& f : catalog.functions) {
        out << "- " << f.display() << ": " << f.purpose << ". Parameters:";
        for (size_t i = 0; i < f.params.size(); ++i) {
            out << (i ? ", " : " ") << f.params[i].name << " ("
                << to_string(f.params[i].kind) << ")";
        }
        out << "\n";
    }
    out << "\nScene objects (JSON):\n" << serialize_scene(scene) << "\n";
    out << "\nReply with strict JSON only, no prose:\n"
           "{\"calls\":[{\"function\":\"move\",\"text_params\":{\"object\":\"lamp\"},"
           "\"amb_params\":[{\"name\":\"position\",\"kind\":\"position\","
           "\"token\":[7,7],\"ignore_objects\":[]}]}]}\n";
    return out.str();
}

Plan plan_rules(const Transcript& t, const Scene& scene, const FunctionCatalog& catalog) {
    if (t.empty()) throw EmptyTranscript("cannot plan an empty transcript");

    std::vector<std::string> words;
    words.reserve(t.words.size());
    for (const auto& w : t.words) words.push_back(clean(w.text));

    Plan plan;
    for (const Clause& clause : split_clauses(words)) {
        ClauseView cv{words, clause};

        std::string function;
        for (size_t i = cv.begin(); i < cv.end() && function.empty(); ++i)
            if (auto g = verb_group(cv.at(i))) function = pick_function(cv, *g);
        const FunctionSignature* sig = catalog.find(function);
        if (!sig) throw NoFunctionMatched(general_error_message(catalog));

        PlannedCall call;
        call.function = sig->name;
        for (const auto& p : sig->params) fill_param(call, p, cv, scene);
        plan.calls.push_back(std::move(call));
    }
    return plan;
}

namespace {

Value text_value_for_kind(const json& v, ParamKind kind, const std::string& where) {
    auto bad = [&](const std::string& what) {
        return MalformedReply(where + ": " + what);
    };
    switch (kind) {
        case ParamKind::Object:
        case ParamKind::Color:
        case ParamKind::ShapeType:
            if (!v.is_string()) throw bad("expected a string");
            return v.get<std::string>();
        case ParamKind::ObjectList: {
            if (!v.is_array()) throw bad("expected an array of names");
            ObjectSet set;
            for (const auto& e : v) {
                if (!e.is_string()) throw bad("expected an array of names");
                set.names.push_back(e.get<std::string>());
            }
            return set;
        }
        case ParamKind::Size:
            if (!v.is_number()) throw bad("expected a number");
            return v.get<double>();
        case ParamKind::Position:
        case ParamKind::Direction: {
            if (!v.is_array() || v.size() != 3 || !v[0].is_number())
                throw bad("expected [x,y,z]");
            return Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
        }
        case ParamKind::RotationDelta: {
            if (!v.is_array() || v.size() != 4 || !v[0].is_number())
                throw bad("expected [x,y,z,w]");
            return Quat{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
                        v[3].get<double>()}
                .normalized();
        }
        case ParamKind::Path:
            throw bad("a path parameter cannot be textual");
    }
    throw bad("unhandled kind");
}

}  // namespace

Plan parse_backend_reply(const std::string& reply_text, const Transcript& t,
                         const FunctionCatalog& catalog) {
    json doc = json::parse(reply_text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("calls") ||
        !doc["calls"].is_array())
        throw MalformedReply("reply is not {\"calls\":[...]}; got: " + reply_text);

    Plan plan;
    for (const auto& jc : doc["calls"]) {
        if (!jc.is_object() || !jc.contains("function") || !jc["function"].is_string())
            throw MalformedReply("call entry missing \"function\"");
        std::string fname = jc["function"].get<std::string>();
        const FunctionSignature* sig = catalog.find(fname);
        if (!sig) throw MalformedReply("unknown function '" + fname + "'");

        PlannedCall call;
        call.function = fname;

        if (jc.contains("text_params")) {
            if (!jc["text_params"].is_object())
                throw MalformedReply(fname + ": text_params must be an object");
            for (const auto& [key, val] : jc["text_params"].items()) {
                const ParamSpec* spec = sig->param(key);
                if (!spec)
                    throw MalformedReply(fname + ": unknown parameter '" + key + "'");
                call.text_params[key] =
                    text_value_for_kind(val, spec->kind, fname + "." + key);
            }
        }

        if (jc.contains("amb_params")) {
            if (!jc["amb_params"].is_array())
                throw MalformedReply(fname + ": amb_params must be an array");
            for (const auto& ja : jc["amb_params"]) {
                if (!ja.is_object() || !ja.contains("name") || !ja["name"].is_string() ||
                    !ja.contains("kind") || !ja["kind"].is_string())
                    throw MalformedReply(fname + ": bad ambiguous-parameter entry");
                AmbiguousParam amb;
                amb.name = ja["name"].get<std::string>();
                const ParamSpec* spec = sig->param(amb.name);
                if (!spec)
                    throw MalformedReply(fname + ": unknown parameter '" + amb.name + "'");
                auto kind = param_kind_from_string(ja["kind"].get<std::string>());
                if (!kind || *kind != spec->kind)
                    throw MalformedReply(fname + "." + amb.name + ": kind mismatch");
                amb.kind = *kind;
                if (!ja.contains("token") || !ja["token"].is_array() ||
                    ja["token"].size() != 2 || !ja["token"][0].is_number_integer())
                    throw MalformedReply(fname + "." + amb.name +
                                         ": token must be [first,last] word indices");
                int64_t first = ja["token"][0].get<int64_t>();
                int64_t last = ja["token"][1].get<int64_t>();
                if (first < 0 || last < first ||
                    static_cast<size_t>(last) >= t.words.size())
                    throw MalformedReply(fname + "." + amb.name +
                                         ": token span outside the transcript");
                amb.token = {static_cast<size_t>(first), static_cast<size_t>(last)};
                if (ja.contains("ignore_objects")) {
                    if (!ja["ignore_objects"].is_array())
                        throw MalformedReply(fname + "." + amb.name +
                                             ": ignore_objects must be an array");
                    for (const auto& e : ja["ignore_objects"])
                        amb.ignore_objects.push_back(e.get<std::string>());
                }
                call.amb_params.push_back(std::move(amb));
            }
        }

        // The text and ambiguous sets must partition the signature exactly.
        for (const auto& p : sig->params) {
            bool textual = call.text_params.count(p.name) > 0;
            bool ambiguous = std::any_of(call.amb_params.begin(), call.amb_params.end(),
                                         [&](const AmbiguousParam& a) { return a.name == p.name; });
            if (textual && ambiguous)
                throw MalformedReply(fname + ": parameter '" + p.name +
                                     "' bound both textually and ambiguously");
            if (!textual && !ambiguous)
                throw MalformedReply(fname + ": parameter '" + p.name + "' is unbound");
        }

        plan.calls.push_back(std::move(call));
    }
    return plan;
}

IntentBackendConfig IntentBackendConfig::from_environment() {
    IntentBackendConfig cfg;
    if (const char* e = std::getenv("COGS_LLM_ENDPOINT")) cfg.endpoint = e;
    if (const char* t = std::getenv("COGS_LLM_TOKEN")) cfg.auth_token = t;
    if (const char* s = std::getenv("COGS_LLM_TIMEOUT_S")) cfg.timeout_s = std::atof(s);
    return cfg;
}

Plan plan_llm(const Transcript& t, const Scene& scene, const FunctionCatalog& catalog,
              const IntentBackendConfig& config) {
    if (config.endpoint.empty())
        throw BackendUnreachable("no backend endpoint configured");

    // Split "http://host:port/path" into base and path.
    size_t scheme = config.endpoint.find("://");
    size_t path_pos = scheme == std::string::npos
                          ? config.endpoint.find('/')
                          : config.endpoint.find('/', scheme + 3);
    std::string base = path_pos == std::string::npos ? config.endpoint
                                                     : config.endpoint.substr(0, path_pos);
    std::string path = path_pos == std::string::npos ? "/"
                                                     : config.endpoint.substr(path_pos);

    std::ostringstream body;
    body << render_metaprompt(catalog, scene) << "\nUtterance words (index: text [start_ms-end_ms]):\n";
    for (size_t i = 0; i < t.words.size(); ++i)
        body << i << ": " << t.words[i].text << " [" << t.words[i].start_ms << "-"
             << t.words[i].end_ms << "]\n";

    httplib::Client client(base);
    auto micros = std::chrono::microseconds(static_cast<int64_t>(config.timeout_s * 1e6));
    client.set_connection_timeout(micros);
    client.set_read_timeout(micros);
    client.set_write_timeout(micros);
    httplib::Headers headers;
    if (!config.auth_token.empty())
        headers.emplace("Authorization", "Bearer " + config.auth_token);

    auto res = client.Post(path, headers, body.str(), "text/plain");
    if (!res) {
        auto err = res.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
            err == httplib::Error::Write)
            throw BackendTimeout("backend timed out after " +
                                 std::to_string(config.timeout_s) + " s");
        throw BackendUnreachable("cannot reach backend at " + config.endpoint + " (" +
                                 httplib::to_string(err) + ")");
    }
    if (res->status != 200)
        throw BackendUnreachable("backend returned HTTP " + std::to_string(res->status));
    return parse_backend_reply(res->body, t, catalog);
}

}  // namespace cogs
