#include "gatelens/llm.hpp"

#include "gatelens/schema_kb.hpp"

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gatelens {

void ChatRequest::validate() const {
    if (model.empty()) {
        throw std::invalid_argument("chat request needs a model id");
    }
    if (!(temperature >= 0.0 && temperature <= 2.0)) {
        throw std::invalid_argument("temperature must be within [0, 2]");
    }
    if (!(timeout_s > 0.0)) {
        throw std::invalid_argument("timeout must be positive");
    }
    if (max_tokens <= 0) {
        throw std::invalid_argument("max_tokens must be positive");
    }
}

auto to_string(LlmErrorKind kind) -> std::string_view {
    switch (kind) {
    case LlmErrorKind::Timeout: return "Timeout";
    case LlmErrorKind::TransportError: return "TransportError";
    case LlmErrorKind::ProviderRejection: return "ProviderRejection";
    case LlmErrorKind::FixtureMiss: return "FixtureMiss";
    case LlmErrorKind::MalformedResponse: return "MalformedResponse";
    }
    return "?";
}

auto complete(const ChatRequest& request, Provider& provider) -> std::string {
    request.validate();
    ++provider.calls_;
    constexpr int kRetries = 2;
    for (int attempt = 0;; ++attempt) {
        try {
            return provider.send(request);
        } catch (const LlmError& e) {
            if (e.kind() != LlmErrorKind::TransportError || attempt == kRetries) {
                throw;
            }
        }
    }
}

auto fixture_key(const ChatRequest& request) -> std::string {
    std::string material;
    for (const auto* part : {&request.model, &request.system, &request.user}) {
        material += std::to_string(part->size()) + ":" + *part + "\n";
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(material.data(), material.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0xf];
    }
    return hex;
}

FixtureProvider::FixtureProvider(std::filesystem::path dir) : dir_(std::move(dir)) {}

FixtureProvider::FixtureProvider(std::filesystem::path dir, std::shared_ptr<Provider> upstream)
    : dir_(std::move(dir)), upstream_(std::move(upstream)) {}

auto FixtureProvider::path_for(const ChatRequest& request) const -> std::filesystem::path {
    return dir_ / (fixture_key(request) + ".txt");
}

void FixtureProvider::store(const ChatRequest& request, std::string_view response) {
    std::lock_guard lock(write_mutex_);
    std::filesystem::create_directories(dir_);
    auto target = path_for(request);
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(response.data(), static_cast<std::streamsize>(response.size()));
        if (!out) {
            throw std::runtime_error("cannot write fixture '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, target);
}

auto FixtureProvider::send(const ChatRequest& request) -> std::string {
    if (upstream_) {
        auto response = upstream_->send(request);
        store(request, response);
        return response;
    }
    auto path = path_for(request);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw LlmError(LlmErrorKind::FixtureMiss, "no fixture " + path.filename().string() + " for this request");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

auto LiveConfig::from_env() -> LiveConfig {
    LiveConfig config;
    if (const char* url = std::getenv("GATELENS_BASE_URL"); url != nullptr && *url != '\0') {
        config.base_url = url;
    }
    if (const char* key = std::getenv("GATELENS_API_KEY"); key != nullptr) {
        config.api_key = key;
    }
    return config;
}

LiveProvider::LiveProvider(LiveConfig config) : config_(std::move(config)) {}

auto LiveProvider::send(const ChatRequest& request) -> std::string {
    // Split "scheme://host[:port]/prefix" for httplib.
    auto scheme_end = config_.base_url.find("://");
    auto path_start = config_.base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    auto origin = config_.base_url.substr(0, path_start);
    auto prefix = path_start == std::string::npos ? std::string() : config_.base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') {
        prefix.pop_back();
    }

    httplib::Client client(origin);
    if (!client.is_valid()) {
        throw LlmError(LlmErrorKind::TransportError, "invalid base URL '" + config_.base_url + "'");
    }
    auto seconds = std::chrono::duration<double>(request.timeout_s);
    auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(seconds);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    nlohmann::json body = {
        {"model", request.model},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
        {"messages",
         nlohmann::json::array({{{"role", "system"}, {"content", request.system}},
                                {{"role", "user"}, {"content", request.user}}})},
    };
    httplib::Headers headers{{"Authorization", "Bearer " + config_.api_key}};

    auto started = std::chrono::steady_clock::now();
    auto res = client.Post(prefix + "/chat/completions", headers, body.dump(), "application/json");
    if (!res) {
        auto elapsed = std::chrono::steady_clock::now() - started;
        if (res.error() == httplib::Error::ConnectionTimeout || elapsed >= seconds) {
            throw LlmError(LlmErrorKind::Timeout, "no response within " + std::to_string(request.timeout_s) + " s");
        }
        throw LlmError(LlmErrorKind::TransportError, "request failed: " + httplib::to_string(res.error()));
    }
    auto status = res->status;
    if (status >= 400 && status < 500 && status != 408 && status != 429) {
        throw LlmError(LlmErrorKind::ProviderRejection,
                       "provider rejected the request with HTTP " + std::to_string(status));
    }
    if (status != 200) {
        throw LlmError(LlmErrorKind::TransportError, "provider answered HTTP " + std::to_string(status));
    }
    try {
        auto doc = nlohmann::json::parse(res->body);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw LlmError(LlmErrorKind::MalformedResponse, "response is not a chat completion");
    }
}

namespace {

constexpr std::string_view kGrammar = R"(expr    := IDENT
         | select[pred](expr) | project[col, ...](expr)
         | rename[old -> new, ...](expr) | distinct(expr)
         | sort[col (asc|desc)?, ...](expr) | limit[INT](expr)
         | groupby[col, ... ; agg, ...](expr)      (key list may be empty)
         | union(expr, expr) | minus(expr, expr) | intersect(expr, expr)
         | times(expr, expr) | divide(expr, expr) | join[pred](expr, expr)
agg     := count(*) as name | count(col) as name
         | sum(col) as name | avg(col) as name | min(col) as name | max(col) as name
pred    := pred or pred | pred and pred | not pred | (pred)
         | term op term | col in [literal, ...] | contains(term, "text")
op      := == | != | < | <= | > | >=
term    := col | literal | lower(term)
literal := "text" | number | true | false | null      (dates are "YYYY-MM-DD" strings)
Greek aliases: σ = select, π = project, ρ = rename, γ = groupby.
Keywords are lowercase and cannot be used as names. Column names are not
qualified by table; when both operands of times/join share a column name,
rename one side first. Comparisons with null are false.)";

} // namespace

auto build_interpreter_prompt(const Catalog& catalog, std::string_view query,
                              const std::vector<FewShotExample>& examples, std::string_view model) -> ChatRequest {
    std::string system;
    system += "You translate questions about release test data into relational algebra (RA) expressions that "
              "are executed against the tables described below. You only see the schema, never the data.\n\n";
    system += "## Scope\n"
              "Answer only questions the tables below can answer. If a question needs subjective judgment, "
              "information that is not in the tables, or is not a question about the data, do not guess.\n\n";
    system += "## Schema\n" + render_schema_prompt(catalog) + "\n";
    system += "## RA grammar\n" + std::string(kGrammar) + "\n\n";
    system += "## Strategy\n"
              "Apply filters first: put selections as close to the tables as possible and run joins, products "
              "and aggregations on the reduced data. Use only the table and column names listed in the schema, "
              "spelled exactly as shown; map informal terms through the listed aliases.\n\n";
    system += "## Output\n"
              "Reply with exactly one fenced block containing a single expression:\n"
              "```ra\n<expression>\n```\n"
              "or, when the question is out of scope, with the single line\n"
              "OUT_OF_SCOPE: <reason>\n";
    if (!examples.empty()) {
        system += "\n## Examples\n";
        for (std::size_t i = 0; i < examples.size(); ++i) {
            const auto& ex = examples[i];
            system += "\nQuestion " + std::to_string(i + 1) + ": " + ex.query + "\n";
            if (!ex.note.empty()) {
                system += "Note: " + ex.note + "\n";
            }
            system += "```ra\n" + ex.ra + "\n```\n";
        }
    }
    ChatRequest request;
    request.model = std::string(model);
    request.system = std::move(system);
    request.user = std::string(query);
    return request;
}

namespace {

auto trim(std::string_view s) -> std::string_view {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

constexpr std::string_view kOutOfScope = "OUT_OF_SCOPE:";

// Offset of the first line whose content starts with OUT_OF_SCOPE:.
auto find_out_of_scope(std::string_view raw) -> std::size_t {
    std::size_t line_start = 0;
    while (line_start <= raw.size()) {
        auto line_end = raw.find('\n', line_start);
        auto line = raw.substr(line_start, line_end == std::string_view::npos ? raw.npos : line_end - line_start);
        auto t = trim(line);
        if (t.substr(0, kOutOfScope.size()) == kOutOfScope) {
            return line_start;
        }
        if (line_end == std::string_view::npos) {
            break;
        }
        line_start = line_end + 1;
    }
    return std::string_view::npos;
}

// Offset of the first ``` fence whose info string is exactly "ra".
auto find_ra_fence(std::string_view raw, std::size_t& body_start) -> std::size_t {
    std::size_t pos = 0;
    while ((pos = raw.find("```", pos)) != std::string_view::npos) {
        auto info_end = raw.find('\n', pos + 3);
        if (info_end == std::string_view::npos) {
            return std::string_view::npos;
        }
        if (trim(raw.substr(pos + 3, info_end - pos - 3)) == "ra") {
            body_start = info_end + 1;
            return pos;
        }
        pos += 3;
    }
    return std::string_view::npos;
}

} // namespace

auto parse_interpreter_output(std::string_view raw) -> InterpreterOutput {
    std::size_t body_start = 0;
    auto fence = find_ra_fence(raw, body_start);
    auto oos = find_out_of_scope(raw);
    if (fence != std::string_view::npos && (oos == std::string_view::npos || fence < oos)) {
        auto close = raw.find("```", body_start);
        if (close == std::string_view::npos) {
            throw LlmError(LlmErrorKind::MalformedResponse, "unterminated ```ra block");
        }
        auto body = trim(raw.substr(body_start, close - body_start));
        if (body.empty()) {
            throw LlmError(LlmErrorKind::MalformedResponse, "empty ```ra block");
        }
        return RaText{std::string(body)};
    }
    if (oos != std::string_view::npos) {
        auto line_end = raw.find('\n', oos);
        auto line = trim(raw.substr(oos, line_end == std::string_view::npos ? raw.npos : line_end - oos));
        return OutOfScope{std::string(trim(line.substr(kOutOfScope.size())))};
    }
    throw LlmError(LlmErrorKind::MalformedResponse, "response has neither a ```ra block nor an OUT_OF_SCOPE line");
}

} // namespace gatelens
