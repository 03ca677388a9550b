#include <doctest.h>

#include "cogs/transcript.hpp"

using namespace cogs;

TEST_CASE("parse_transcript accepts a minimal document") {
    Transcript t = parse_transcript(
        R"({"utterance_id":"u1","words":[{"text":"move","start_ms":0,"end_ms":300}]})");
    CHECK(t.utterance_id == "u1");
    REQUIRE(t.words.size() == 1);
    CHECK(t.words[0].text == "move");
    CHECK(t.joined() == "move");
}

TEST_CASE("empty word list is a valid (empty) transcript") {
    Transcript t = parse_transcript(R"({"words":[]})");
    CHECK(t.empty());
}

TEST_CASE("ordering violations are rejected") {
    CHECK_THROWS_AS(parse_transcript(R"({"words":[
        {"text":"b","start_ms":500,"end_ms":700},
        {"text":"a","start_ms":0,"end_ms":300}]})"),
                    OrderingError);
    CHECK_THROWS_AS(parse_transcript(R"({"words":[
        {"text":"a","start_ms":0,"end_ms":300},
        {"text":"b","start_ms":200,"end_ms":500}]})"),
                    OrderingError);
    CHECK_THROWS_AS(
        parse_transcript(R"({"words":[{"text":"a","start_ms":300,"end_ms":100}]})"),
        OrderingError);
}

TEST_CASE("schema violations are rejected") {
    CHECK_THROWS_AS(parse_transcript("nope"), SchemaError);
    CHECK_THROWS_AS(parse_transcript(R"({"words":[{"text":"a"}]})"), SchemaError);
    CHECK_THROWS_AS(parse_transcript(R"({"words":[{"start_ms":0,"end_ms":1}]})"),
                    SchemaError);
}

TEST_CASE("token_window pads and clamps") {
    Transcript t = parse_transcript(R"({"words":[
        {"text":"move","start_ms":100,"end_ms":400},
        {"text":"here","start_ms":500,"end_ms":800}]})");
    TimeInterval w = token_window(t, {1, 1}, 300);
    CHECK(w.start_ms == 200);
    CHECK(w.end_ms == 1100);
    // Clamped at zero.
    w = token_window(t, {0, 0}, 300);
    CHECK(w.start_ms == 0);
    CHECK(w.end_ms == 700);
    // Zero padding is exactly the spoken interval.
    w = token_window(t, {0, 1}, 0);
    CHECK(w.start_ms == 100);
    CHECK(w.end_ms == 800);
    CHECK_THROWS_AS(token_window(t, {0, 5}, 0), SchemaError);
}

TEST_CASE("token_window is monotone in padding and nesting") {
    Transcript t = parse_transcript(R"({"words":[
        {"text":"a","start_ms":1000,"end_ms":1200},
        {"text":"b","start_ms":1300,"end_ms":1500},
        {"text":"c","start_ms":1600,"end_ms":1900}]})");
    for (int64_t p1 = 0; p1 <= 400; p1 += 100) {
        TimeInterval inner = token_window(t, {1, 1}, p1);
        TimeInterval outer = token_window(t, {0, 2}, p1);
        CHECK(outer.start_ms <= inner.start_ms);
        CHECK(outer.end_ms >= inner.end_ms);
        TimeInterval wider = token_window(t, {1, 1}, p1 + 100);
        CHECK(wider.start_ms <= inner.start_ms);
        CHECK(wider.end_ms >= inner.end_ms);
    }
}
