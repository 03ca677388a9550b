#ifndef COGS_TRANSCRIPT_HPP
#define COGS_TRANSCRIPT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cogs/errors.hpp"

namespace cogs {

struct WordSpan {
    std::string text;
    int64_t start_ms = 0;
    int64_t end_ms = 0;
};

struct Transcript {
    std::string utterance_id;
    std::vector<WordSpan> words;  // ordered by start_ms, non-overlapping

    bool empty() const { return words.empty(); }
    std::string joined() const;  // words joined with single spaces
};

/// Inclusive word-index range [first, last] into a Transcript.
struct TokenSpan {
    size_t first = 0;
    size_t last = 0;
};

struct TimeInterval {
    int64_t start_ms = 0;
    int64_t end_ms = 0;
};

/// JSON: {"utterance_id": str, "words": [{"text", "start_ms", "end_ms"}]}
Transcript parse_transcript(const std::string& json_text);

/// Spoken interval of the span widened by padding_ms on both sides,
/// clamped at 0.
TimeInterval token_window(const Transcript& t, const TokenSpan& span, int64_t padding_ms);

}  // namespace cogs

#endif
