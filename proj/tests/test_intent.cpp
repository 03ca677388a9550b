#include <doctest.h>

#include <atomic>
#include <random>
#include <thread>

#include <httplib.h>

#include "cogs/intent.hpp"

using namespace cogs;

namespace {

Transcript make_transcript(const std::vector<std::string>& words) {
    Transcript t;
    int64_t ms = 0;
    for (const auto& w : words) {
        t.words.push_back({w, ms, ms + 250});
        ms += 300;
    }
    return t;
}

Transcript say(const std::string& sentence) {
    std::vector<std::string> words;
    std::istringstream in(sentence);
    std::string w;
    while (in >> w) words.push_back(w);
    return make_transcript(words);
}

Scene gallery_scene() {
    Scene s;
    SceneObject wall;
    wall.name = "wall";
    wall.position = {0, 1.5, 3.05};
    wall.scale = {6, 3, 0.1};
    wall.manipulatable = false;
    s.objects.push_back(wall);
    SceneObject painting;
    painting.name = "Starry Night painting";
    painting.position = {1.2, 1.4, 2.95};
    painting.scale = {0.9, 0.7, 0.05};
    s.objects.push_back(painting);
    SceneObject cube;
    cube.name = "cube";
    cube.position = {0, 1, 2};
    cube.scale = {0.2, 0.2, 0.2};
    s.objects.push_back(cube);
    return s;
}

bool partitions_signature(const PlannedCall& call, const FunctionCatalog& cat) {
    const FunctionSignature* sig = cat.find(call.function);
    if (!sig) return false;
    for (const auto& p : sig->params) {
        bool textual = call.text_params.count(p.name) > 0;
        size_t amb = 0;
        for (const auto& a : call.amb_params)
            if (a.name == p.name) ++amb;
        if (!((textual && amb == 0) || (!textual && amb == 1))) return false;
    }
    return call.text_params.size() + call.amb_params.size() == sig->params.size();
}

}  // namespace

TEST_CASE("the planner resolves a full object name and flags the deictic word") {
    Scene s = gallery_scene();
    Plan plan = plan_rules(
        say("Hang the Starry Night painting on the wall here"), s);
    REQUIRE(plan.calls.size() == 1);
    const PlannedCall& call = plan.calls[0];
    CHECK(call.function == "move");
    CHECK(std::get<std::string>(call.text_params.at("object")) ==
          "Starry Night painting");
    REQUIRE(call.amb_params.size() == 1);
    CHECK(call.amb_params[0].name == "position");
    CHECK(call.amb_params[0].kind == ParamKind::Position);
    CHECK(call.amb_params[0].token.first == 8);
    CHECK(call.amb_params[0].token.last == 8);
}

TEST_CASE("a partial object name becomes an ambiguous reference") {
    Plan plan = plan_rules(say("Enlarge the painting to this large"), gallery_scene());
    REQUIRE(plan.calls.size() == 1);
    CHECK(plan.calls[0].function == "resize");
    REQUIRE(plan.calls[0].amb_params.size() == 2);
    // "the painting" spans word indices 1..2; "this large" spans 4..5.
    const AmbiguousParam& obj = plan.calls[0].amb_params[0];
    CHECK(obj.kind == ParamKind::Object);
    CHECK(obj.token.first == 1);
    CHECK(obj.token.last == 2);
    const AmbiguousParam& size = plan.calls[0].amb_params[1];
    CHECK(size.kind == ParamKind::Size);
    CHECK(size.token.first == 4);
    CHECK(size.token.last == 5);
}

TEST_CASE("spoken units resolve size textually") {
    Plan plan = plan_rules(say("resize the cube to 30 cm"), gallery_scene());
    CHECK(std::get<double>(plan.calls[0].text_params.at("size")) ==
          doctest::Approx(0.3));
    plan = plan_rules(say("resize the cube to 2 meters"), gallery_scene());
    CHECK(std::get<double>(plan.calls[0].text_params.at("size")) == doctest::Approx(2.0));
}

TEST_CASE("verb sense selection distinguishes the rotation and path forms") {
    Scene s = gallery_scene();
    CHECK(plan_rules(say("rotate the cube like this"), s).calls[0].function == "rotate");
    CHECK(plan_rules(say("turn the cube this way"), s).calls[0].function == "rotate_dir");
    CHECK(plan_rules(say("move the cube along like this"), s).calls[0].function ==
          "move_path");
    CHECK(plan_rules(say("move the cube here"), s).calls[0].function == "move");
    CHECK(plan_rules(say("draw a straight line like this"), s).calls[0].function ==
          "draw_path");
    CHECK(plan_rules(say("set the color of the cube to red"), s).calls[0].function ==
          "set_color");
}

TEST_CASE("obstacle phrases feed the ignore list of the position parameter") {
    Scene s = gallery_scene();
    Plan plan = plan_rules(say("put the cube behind the wall there"), s);
    REQUIRE(plan.calls[0].amb_params.size() == 1);
    CHECK(plan.calls[0].amb_params[0].ignore_objects ==
          std::vector<std::string>{"wall"});
    plan = plan_rules(say("put the cube in front of the wall here"), s);
    CHECK(plan.calls[0].amb_params[0].ignore_objects ==
          std::vector<std::string>{"wall"});
}

TEST_CASE("color words bind textually, pronouns stay ambiguous") {
    Plan plan = plan_rules(say("select the red ones from these and paint them blue"),
                           gallery_scene());
    REQUIRE(plan.calls.size() == 2);
    CHECK(plan.calls[0].function == "select");
    CHECK(std::get<std::string>(plan.calls[0].text_params.at("color")) == "red");
    REQUIRE(plan.calls[0].amb_params.size() == 1);
    CHECK(plan.calls[0].amb_params[0].kind == ParamKind::ObjectList);

    CHECK(plan.calls[1].function == "set_color");
    CHECK(std::get<std::string>(plan.calls[1].text_params.at("color")) == "blue");
    REQUIRE(plan.calls[1].amb_params.size() == 1);
    CHECK(plan.calls[1].amb_params[0].kind == ParamKind::Object);
}

TEST_CASE("clauses split on then and coordinated verbs") {
    Plan plan = plan_rules(say("move the cube here then rotate the cube like this"),
                           gallery_scene());
    REQUIRE(plan.calls.size() == 2);
    CHECK(plan.calls[0].function == "move");
    CHECK(plan.calls[1].function == "rotate");
    // Token spans refer to whole-transcript word indices, not clause-local.
    CHECK(plan.calls[1].amb_params[0].token.first >= 6);
}

TEST_CASE("unplannable utterances raise the exact fallback message") {
    CHECK_THROWS_AS(plan_rules(say("teleport the cube here"), gallery_scene()),
                    NoFunctionMatched);
    try {
        plan_rules(say("teleport the cube here"), gallery_scene());
    } catch (const NoFunctionMatched& e) {
        CHECK(std::string(e.what()) ==
              general_error_message(FunctionCatalog::default_catalog()));
    }
    CHECK_THROWS_AS(plan_rules(Transcript{}, gallery_scene()), EmptyTranscript);
}

TEST_CASE("every planned call partitions its signature exactly") {
    // Random utterances assembled from the grammar's own vocabulary: each
    // one either fails cleanly or yields calls whose text and ambiguous
    // parameter sets partition the signature.
    static const char* vocab[] = {
        "move",  "put",    "hang",   "rotate", "turn",   "spin",  "resize",
        "enlarge", "shrink", "select", "pick",  "paint",  "color", "draw",
        "sketch", "set",    "the",    "cube",   "painting", "wall", "here",
        "there",  "this",   "that",   "way",    "like",   "large", "red",
        "blue",   "them",   "these",  "it",     "along",  "toward", "behind",
        "30", "cm", "line", "circle", "sine", "straight", "then", "and", "to"};
    FunctionCatalog cat = FunctionCatalog::default_catalog();
    Scene s = gallery_scene();
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<size_t> pick(0, std::size(vocab) - 1);
    std::uniform_int_distribution<size_t> len(1, 12);

    int planned = 0;
    for (int trial = 0; trial < 400; ++trial) {
        std::vector<std::string> words;
        size_t n = len(rng);
        for (size_t i = 0; i < n; ++i) words.emplace_back(vocab[pick(rng)]);
        try {
            Plan plan = plan_rules(make_transcript(words), s, cat);
            for (const auto& call : plan.calls) {
                CHECK(partitions_signature(call, cat));
                for (const auto& a : call.amb_params) {
                    CHECK(a.token.first <= a.token.last);
                    CHECK(a.token.last < words.size());
                }
            }
            ++planned;
        } catch (const NoFunctionMatched&) {
        }
    }
    // The vocabulary is verb-heavy, so most samples should actually plan.
    CHECK(planned > 100);
}

TEST_CASE("the planner prompt lists the functions, scene, and reply schema") {
    Scene s = gallery_scene();
    FunctionCatalog cat = FunctionCatalog::default_catalog();
    std::string prompt = render_metaprompt(cat, s);
    for (const auto& f : cat.functions) {
        CHECK(prompt.find(f.display()) != std::string::npos);
        CHECK(prompt.find(f.purpose) != std::string::npos);
    }
    CHECK(prompt.find(serialize_scene(s)) != std::string::npos);
    CHECK(prompt.find("\"calls\"") != std::string::npos);
    CHECK(prompt.find("ignore_objects") != std::string::npos);

    std::string voice = render_metaprompt(cat, s, /*voice_only=*/true);
    CHECK(voice.find("{\"calls\":[]}") != std::string::npos);
    CHECK(voice != prompt);
}

TEST_CASE("parse_backend_reply accepts the strict schema") {
    Transcript t = say("Hang the Starry Night painting on the wall here");
    Plan plan = parse_backend_reply(
        R"({"calls":[{"function":"move",
             "text_params":{"object":"Starry Night painting"},
             "amb_params":[{"name":"position","kind":"position","token":[8,8],
                            "ignore_objects":["wall"]}]}]})",
        t);
    REQUIRE(plan.calls.size() == 1);
    CHECK(plan.calls[0].function == "move");
    CHECK(plan.calls[0].amb_params[0].token.first == 8);
    CHECK(plan.calls[0].amb_params[0].ignore_objects ==
          std::vector<std::string>{"wall"});

    // Typed text values.
    plan = parse_backend_reply(
        R"({"calls":[{"function":"move",
             "text_params":{"object":"cube","position":[1,2,3]},
             "amb_params":[]}]})",
        t);
    CHECK(std::get<Vec3>(plan.calls[0].text_params.at("position")) == Vec3{1, 2, 3});
}

TEST_CASE("parse_backend_reply rejects every malformed shape") {
    Transcript t = say("move the cube here");
    auto bad = [&](const std::string& reply) {
        CHECK_THROWS_AS(parse_backend_reply(reply, t), MalformedReply);
    };
    bad("not json at all");
    bad(R"({"plan":[]})");
    bad(R"({"calls":[{"function":"teleport","text_params":{},"amb_params":[]}]})");
    // Unknown parameter name.
    bad(R"({"calls":[{"function":"move","text_params":{"speed":1},
         "amb_params":[{"name":"position","kind":"position","token":[3,3]}]}]})");
    // Kind mismatch on the ambiguous entry.
    bad(R"({"calls":[{"function":"move","text_params":{"object":"cube"},
         "amb_params":[{"name":"position","kind":"size","token":[3,3]}]}]})");
    // Token span outside the four-word transcript.
    bad(R"({"calls":[{"function":"move","text_params":{"object":"cube"},
         "amb_params":[{"name":"position","kind":"position","token":[3,9]}]}]})");
    // Parameter bound both ways.
    bad(R"({"calls":[{"function":"move",
         "text_params":{"object":"cube","position":[0,0,0]},
         "amb_params":[{"name":"position","kind":"position","token":[3,3]}]}]})");
    // Parameter not bound at all.
    bad(R"({"calls":[{"function":"move","text_params":{"object":"cube"},
         "amb_params":[]}]})");
    // Path parameters can never be textual.
    bad(R"({"calls":[{"function":"move_path",
         "text_params":{"object":"cube","path":[[0,0,0]]},
         "amb_params":[]}]})");
}

TEST_CASE("plan_llm talks to an HTTP backend and validates the reply") {
    httplib::Server server;
    std::atomic<int> hits{0};
    std::string last_auth, last_body;
    server.Post("/plan", [&](const httplib::Request& req, httplib::Response& res) {
        ++hits;
        last_auth = req.get_header_value("Authorization");
        last_body = req.body;
        res.set_content(
            R"({"calls":[{"function":"move","text_params":{"object":"cube"},
                 "amb_params":[{"name":"position","kind":"position","token":[3,3]}]}]})",
            "application/json");
    });
    server.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
        res.status = 500;
    });
    server.Post("/garbage", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("whatever", "text/plain");
    });

    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    Transcript t = say("move the cube here");
    Scene s = gallery_scene();
    FunctionCatalog cat = FunctionCatalog::default_catalog();
    IntentBackendConfig cfg;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/plan";
    cfg.auth_token = "sekrit";
    cfg.timeout_s = 5.0;

    Plan plan = plan_llm(t, s, cat, cfg);
    REQUIRE(plan.calls.size() == 1);
    CHECK(plan.calls[0].function == "move");
    CHECK(hits == 1);
    CHECK(last_auth == "Bearer sekrit");
    // The request body carries the prompt and the indexed words.
    CHECK(last_body.find(serialize_scene(s)) != std::string::npos);
    CHECK(last_body.find("3: here [900-1150]") != std::string::npos);

    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/broken";
    CHECK_THROWS_AS(plan_llm(t, s, cat, cfg), BackendUnreachable);
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/garbage";
    CHECK_THROWS_AS(plan_llm(t, s, cat, cfg), MalformedReply);

    server.stop();
    worker.join();

    IntentBackendConfig off;
    CHECK_THROWS_AS(plan_llm(t, s, cat, off), BackendUnreachable);
    off.endpoint = "http://127.0.0.1:1/nothing";
    off.timeout_s = 2.0;
    CHECK_THROWS_AS(plan_llm(t, s, cat, off), BackendUnreachable);
}
