#include <doctest.h>

#include "gatelens/llm.hpp"
#include "gatelens/parser.hpp"
#include "sample.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <fstream>
#include <thread>

using namespace gatelens;

namespace {

class Scripted : public Provider {
public:
    std::vector<LlmErrorKind> failures; // thrown in order before succeeding
    std::string reply = "```ra\nresults\n```";
    int attempts = 0;

    auto send(const ChatRequest&) -> std::string override {
        auto i = static_cast<std::size_t>(attempts++);
        if (i < failures.size()) {
            throw LlmError(failures[i], "scripted");
        }
        return reply;
    }
};

auto temp_dir(const std::string& name) -> std::filesystem::path {
    auto dir = std::filesystem::temp_directory_path() / ("gatelens-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

auto llm_error_kind(auto&& fn) -> std::optional<LlmErrorKind> {
    try {
        fn();
    } catch (const LlmError& e) {
        return e.kind();
    }
    return std::nullopt;
}

// Local chat-completions endpoint for exercising LiveProvider.
struct FakeEndpoint {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> hits{0};

    explicit FakeEndpoint(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        server.Post("/v1/chat/completions", [this, handler](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            handler(req, res);
        });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~FakeEndpoint() {
        server.stop();
        thread.join();
    }

    auto provider(std::string key = "k") const -> LiveProvider {
        return LiveProvider(LiveConfig{"http://127.0.0.1:" + std::to_string(port) + "/v1", std::move(key)});
    }
};

auto small_request() -> ChatRequest {
    ChatRequest r;
    r.system = "s";
    r.user = "u";
    r.timeout_s = 2;
    return r;
}

} // namespace

TEST_CASE("request validation") {
    auto r = small_request();
    CHECK_NOTHROW(r.validate());
    r.temperature = 2.5;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r = small_request();
    r.temperature = -0.1;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r = small_request();
    r.timeout_s = 0;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r = small_request();
    r.model.clear();
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    CHECK(ChatRequest{}.temperature == 0.0);
}

TEST_CASE("complete retries transport failures only") {
    Scripted twice;
    twice.failures = {LlmErrorKind::TransportError, LlmErrorKind::TransportError};
    CHECK(complete(small_request(), twice) == twice.reply);
    CHECK(twice.attempts == 3);
    CHECK(twice.calls() == 1);

    Scripted thrice;
    thrice.failures = {LlmErrorKind::TransportError, LlmErrorKind::TransportError, LlmErrorKind::TransportError};
    CHECK(llm_error_kind([&] { complete(small_request(), thrice); }) == LlmErrorKind::TransportError);
    CHECK(thrice.attempts == 3);

    Scripted slow;
    slow.failures = {LlmErrorKind::Timeout};
    CHECK(llm_error_kind([&] { complete(small_request(), slow); }) == LlmErrorKind::Timeout);
    CHECK(slow.attempts == 1);

    Scripted denied;
    denied.failures = {LlmErrorKind::ProviderRejection};
    CHECK(llm_error_kind([&] { complete(small_request(), denied); }) == LlmErrorKind::ProviderRejection);
    CHECK(denied.attempts == 1);

    auto bad = small_request();
    bad.temperature = 3;
    Scripted unused;
    CHECK_THROWS_AS(complete(bad, unused), std::invalid_argument);
    CHECK(unused.attempts == 0);
}

TEST_CASE("fixture keys") {
    auto a = small_request();
    auto key = fixture_key(a);
    CHECK(key.size() == 64);
    CHECK(key.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(fixture_key(a) == key);
    auto b = a;
    b.model = "other";
    CHECK(fixture_key(b) != key);
    auto c = a;
    c.temperature = 1.0;
    CHECK(fixture_key(c) == key);
    ChatRequest split1 = a;
    split1.system = "ab";
    split1.user = "c";
    ChatRequest split2 = a;
    split2.system = "a";
    split2.user = "bc";
    CHECK(fixture_key(split1) != fixture_key(split2));
}

TEST_CASE("fixture replay and record") {
    auto dir = temp_dir("fixtures");
    FixtureProvider replay(dir);
    auto req = small_request();
    CHECK(llm_error_kind([&] { complete(req, replay); }) == LlmErrorKind::FixtureMiss);

    auto upstream = std::make_shared<Scripted>();
    upstream->reply = "OUT_OF_SCOPE: nothing to see";
    FixtureProvider recorder(dir, upstream);
    CHECK(recorder.mode() == FixtureMode::Record);
    CHECK(complete(req, recorder) == upstream->reply);
    CHECK(complete(req, recorder) == upstream->reply);
    auto other = req;
    other.user = "another question";
    complete(other, recorder);
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dir)) {
        ++files;
    }
    CHECK(files == 2);
    CHECK(std::filesystem::exists(replay.path_for(req)));
    CHECK(replay.path_for(req).filename() == fixture_key(req) + ".txt");

    CHECK(complete(req, replay) == upstream->reply);
    CHECK(replay.calls() == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("interpreter prompt") {
    auto catalog = gatelens::testing::sample_catalog();
    auto zero = build_interpreter_prompt(catalog, "Find some trucks for cases that are NOK", {});
    CHECK(zero.user == "Find some trucks for cases that are NOK");
    CHECK(zero.model == kDefaultModel);
    CHECK(zero.temperature == 0.0);
    for (const auto* needle : {"Table results", "test_result (text", "Truck test campaign.", "## RA grammar",
                               "select[pred](expr)", "```ra", "OUT_OF_SCOPE: <reason>", "Apply filters first"}) {
        CAPTURE(needle);
        CHECK(zero.system.find(needle) != std::string::npos);
    }
    CHECK(zero.system.find("## Examples") == std::string::npos);
    CHECK(build_interpreter_prompt(catalog, "Find some trucks for cases that are NOK", {}).system == zero.system);

    std::vector<FewShotExample> examples{{"How many tests ran?", "groupby[; count(*) as n](results)", ""},
                                         {"Which trucks failed?", R"(project[name](select[test_result == "NOK"](results)))",
                                          "NOK marks a failed test"},
                                         {"List releases", "distinct(project[release](results))", ""}};
    auto three = build_interpreter_prompt(catalog, "q", examples, "m");
    CHECK(three.model == "m");
    auto p1 = three.system.find("Question 1: How many tests ran?");
    auto p2 = three.system.find("Question 2: Which trucks failed?\nNote: NOK marks a failed test\n```ra\nproject[name]");
    auto p3 = three.system.find("Question 3: List releases");
    CHECK(p1 != std::string::npos);
    CHECK(p2 != std::string::npos);
    CHECK(p3 != std::string::npos);
    CHECK(p1 < p2);
    CHECK(p2 < p3);
    CHECK(three.system.find("Question 4") == std::string::npos);
    for (const auto& ex : examples) {
        CHECK_NOTHROW(parse(ex.ra));
    }
}

TEST_CASE("interpreter output") {
    CHECK(parse_interpreter_output("```ra\nselect[x == 1](t)\n```") == InterpreterOutput{RaText{"select[x == 1](t)"}});
    CHECK(parse_interpreter_output("OUT_OF_SCOPE: subjective judgment required") ==
          InterpreterOutput{OutOfScope{"subjective judgment required"}});
    CHECK(parse_interpreter_output("Sure.\n\n```ra\n  project[a](\n  t)\n```\nDone.\n```ra\nother\n```") ==
          InterpreterOutput{RaText{"project[a](\n  t)"}});
    CHECK(parse_interpreter_output("Thinking...\n  OUT_OF_SCOPE:  needs opinions \n```ra\nt\n```") ==
          InterpreterOutput{OutOfScope{"needs opinions"}});
    CHECK(parse_interpreter_output("```sql\nselect 1\n```\n```ra\nt\n```") == InterpreterOutput{RaText{"t"}});
    for (std::string_view bad : {"here is some prose", "", "```ra\n\n```", "```ra\nt", "```\nt\n```",
                                 "the answer is OUT_OF_SCOPE: maybe"}) {
        CAPTURE(bad);
        CHECK(llm_error_kind([&] { parse_interpreter_output(bad); }) == LlmErrorKind::MalformedResponse);
    }
}

TEST_CASE("live provider over HTTP") {
    SUBCASE("success") {
        FakeEndpoint ep([](const httplib::Request& req, httplib::Response& res) {
            auto body = nlohmann::json::parse(req.body);
            CHECK(req.get_header_value("Authorization") == "Bearer secret");
            CHECK(body["messages"][0]["role"] == "system");
            CHECK(body["messages"][1]["content"] == "u");
            CHECK(body["temperature"] == 0.0);
            nlohmann::json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", "```ra\nt\n```"}}}}}}};
            res.set_content(reply.dump(), "application/json");
        });
        auto provider = ep.provider("secret");
        CHECK(complete(small_request(), provider) == "```ra\nt\n```");
    }
    SUBCASE("bad credentials are rejected without retry") {
        FakeEndpoint ep([](const httplib::Request&, httplib::Response& res) {
            res.status = 401;
            res.set_content(R"({"error": "invalid api key"})", "application/json");
        });
        auto provider = ep.provider("wrong");
        CHECK(llm_error_kind([&] { complete(small_request(), provider); }) == LlmErrorKind::ProviderRejection);
        CHECK(ep.hits == 1);
    }
    SUBCASE("server errors are retried twice") {
        FakeEndpoint ep([](const httplib::Request&, httplib::Response& res) { res.status = 503; });
        auto provider = ep.provider();
        CHECK(llm_error_kind([&] { complete(small_request(), provider); }) == LlmErrorKind::TransportError);
        CHECK(ep.hits == 3);
    }
    SUBCASE("slow responses time out") {
        FakeEndpoint ep([](const httplib::Request&, httplib::Response& res) {
            std::this_thread::sleep_for(std::chrono::milliseconds(800));
            res.set_content("{}", "application/json");
        });
        auto provider = ep.provider();
        auto req = small_request();
        req.timeout_s = 0.2;
        CHECK(llm_error_kind([&] { complete(req, provider); }) == LlmErrorKind::Timeout);
        CHECK(ep.hits == 1);
    }
    SUBCASE("non-chat bodies are malformed") {
        FakeEndpoint ep([](const httplib::Request&, httplib::Response& res) { res.set_content("[]", "application/json"); });
        auto provider = ep.provider();
        CHECK(llm_error_kind([&] { complete(small_request(), provider); }) == LlmErrorKind::MalformedResponse);
    }
    SUBCASE("unreachable host") {
        LiveProvider provider(LiveConfig{"http://127.0.0.1:1/v1", "k"});
        CHECK(llm_error_kind([&] { complete(small_request(), provider); }) == LlmErrorKind::TransportError);
    }
}
