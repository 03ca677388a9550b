#include "cogs/transcript.hpp"

#include <json.hpp>

namespace cogs {

using nlohmann::json;

std::string Transcript::joined() const {
    std::string out;
    for (size_t i = 0; i < words.size(); ++i) {
        if (i) out += ' ';
        out += words[i].text;
    }
    return out;
}

Transcript parse_transcript(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("transcript: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("words") || !doc["words"].is_array())
        throw SchemaError("transcript: expected {\"words\": [...]}");

    Transcript t;
    if (doc.contains("utterance_id")) {
        if (!doc["utterance_id"].is_string())
            throw SchemaError("transcript: utterance_id must be a string");
        t.utterance_id = doc["utterance_id"].get<std::string>();
    }
    for (const auto& jw : doc["words"]) {
        if (!jw.is_object() || !jw.contains("text") || !jw["text"].is_string() ||
            !jw.contains("start_ms") || !jw["start_ms"].is_number_integer() ||
            !jw.contains("end_ms") || !jw["end_ms"].is_number_integer())
            throw SchemaError("transcript word: expected {text, start_ms, end_ms}");
        WordSpan w{jw["text"].get<std::string>(), jw["start_ms"].get<int64_t>(),
                   jw["end_ms"].get<int64_t>()};
        if (w.start_ms > w.end_ms)
            throw OrderingError("transcript word '" + w.text + "': start_ms > end_ms");
        if (!t.words.empty() && w.start_ms < t.words.back().end_ms)
            throw OrderingError("transcript: words overlap or are out of order at '" +
                                w.text + "'");
        t.words.push_back(std::move(w));
    }
    return t;
}

TimeInterval token_window(const Transcript& t, const TokenSpan& span, int64_t padding_ms) {
    if (span.last >= t.words.size() || span.first > span.last)
        throw SchemaError("token span out of range");
    int64_t start = t.words[span.first].start_ms - padding_ms;
    int64_t end = t.words[span.last].end_ms + padding_ms;
    return {std::max<int64_t>(0, start), end};
}

}  // namespace cogs
