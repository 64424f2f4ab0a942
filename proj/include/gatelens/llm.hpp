#pragma once

#include "gatelens/schema.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gatelens {

inline constexpr std::string_view kDefaultModel = "gpt-4o";

struct ChatRequest {
    std::string model{kDefaultModel};
    std::string system;
    std::string user;
    double temperature = 0.0;
    int max_tokens = 1024;
    double timeout_s = 60.0;

    /// Throws std::invalid_argument unless temperature is in [0, 2], timeout
    /// and max_tokens are positive and the model is named.
    void validate() const;
};

enum class LlmErrorKind : std::uint8_t { Timeout, TransportError, ProviderRejection, FixtureMiss, MalformedResponse };

auto to_string(LlmErrorKind kind) -> std::string_view;

class LlmError : public std::runtime_error {
public:
    LlmError(LlmErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    auto kind() const -> LlmErrorKind { return kind_; }

private:
    LlmErrorKind kind_;
};

/// A chat-completion backend. Implementations report failures as LlmError.
class Provider {
public:
    virtual ~Provider() = default;

    /// One attempt, no retries.
    virtual auto send(const ChatRequest& request) -> std::string = 0;

    /// Number of complete() invocations against this provider.
    auto calls() const -> std::uint64_t { return calls_.load(); }

private:
    friend auto complete(const ChatRequest& request, Provider& provider) -> std::string;
    std::atomic<std::uint64_t> calls_{0};
};

/// Validates the request and sends it, retrying at most twice after a
/// TransportError. Timeouts and rejections are not retried.
auto complete(const ChatRequest& request, Provider& provider) -> std::string;

/// Hex SHA-256 over the length-prefixed model id, system text and user text.
auto fixture_key(const ChatRequest& request) -> std::string;

enum class FixtureMode : std::uint8_t { Replay, Record };

/// Serves responses from `<dir>/<fixture_key>.txt`. Replay fails with
/// FixtureMiss for unknown requests; record forwards to `upstream` and stores
/// the raw response, one file per distinct request.
class FixtureProvider : public Provider {
public:
    explicit FixtureProvider(std::filesystem::path dir);
    FixtureProvider(std::filesystem::path dir, std::shared_ptr<Provider> upstream);

    auto send(const ChatRequest& request) -> std::string override;
    auto mode() const -> FixtureMode { return upstream_ ? FixtureMode::Record : FixtureMode::Replay; }
    auto path_for(const ChatRequest& request) const -> std::filesystem::path;

    /// Stores `response` for `request` directly, bypassing any upstream.
    void store(const ChatRequest& request, std::string_view response);

private:
    std::filesystem::path dir_;
    std::shared_ptr<Provider> upstream_;
    std::mutex write_mutex_;
};

struct LiveConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key;

    /// GATELENS_BASE_URL and GATELENS_API_KEY, with the defaults above.
    static auto from_env() -> LiveConfig;
};

/// Chat-completions over HTTP: POST `<base_url>/chat/completions` with a
/// bearer token. 4xx (other than 408/429) is ProviderRejection, other
/// failures TransportError, exceeding the request timeout Timeout.
class LiveProvider : public Provider {
public:
    explicit LiveProvider(LiveConfig config);
    auto send(const ChatRequest& request) -> std::string override;

private:
    LiveConfig config_;
};

struct FewShotExample {
    std::string query;
    std::string ra;
    std::string note;
};

/// Interpreter prompt: scope rules, schema and domain context, grammar,
/// filter-early strategy, output contract and, when given, the examples in
/// order. Byte-for-byte deterministic.
auto build_interpreter_prompt(const Catalog& catalog, std::string_view query,
                              const std::vector<FewShotExample>& examples,
                              std::string_view model = kDefaultModel) -> ChatRequest;

struct RaText {
    std::string text;
    friend bool operator==(const RaText&, const RaText&) = default;
};

struct OutOfScope {
    std::string reason;
    friend bool operator==(const OutOfScope&, const OutOfScope&) = default;
};

using InterpreterOutput = std::variant<RaText, OutOfScope>;

/// Takes the first ```ra fenced block or `OUT_OF_SCOPE:` line, whichever
/// comes first. Anything else throws LlmError(MalformedResponse).
auto parse_interpreter_output(std::string_view raw) -> InterpreterOutput;

} // namespace gatelens
