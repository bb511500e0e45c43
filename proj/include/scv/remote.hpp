#ifndef SCV_REMOTE_HPP
#define SCV_REMOTE_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "scv/equivalence.hpp"
#include "scv/errors.hpp"
#include "scv/sampler.hpp"
#include "scv/trace_model.hpp"

namespace scv {

namespace detail {

// "http://host:port/path" -> ("http://host:port", "/path")
inline std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace detail

// Embedding HTTP endpoint with cosine similarity; config-gated alternative
// to the deterministic providers.
class RemoteProvider : public SimilarityProvider {
public:
    RemoteProvider(std::string url, double threshold = 0.85)
        : SimilarityProvider("remote", threshold), url_(std::move(url)) {}

protected:
    double score(const Statement& a, const Statement& b) const override {
        auto [base, path] = detail::split_url(url_);
        httplib::Client client(base);
        client.set_connection_timeout(5);
        nlohmann::json body = {{"texts", {a.text, b.text}}};
        auto res = client.Post(path, body.dump(), "application/json");
        if (!res || res->status != 200)
            throw ProviderError("embedding provider unreachable at " + url_);
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::parse_error&) {
            throw ProviderError("embedding provider returned malformed JSON");
        }
        if (!parsed.contains("embeddings") || parsed["embeddings"].size() != 2)
            throw ProviderError("embedding provider response missing embeddings");
        std::vector<double> ea = parsed["embeddings"][0].get<std::vector<double>>();
        std::vector<double> eb = parsed["embeddings"][1].get<std::vector<double>>();
        if (ea.size() != eb.size() || ea.empty())
            throw ProviderError("embedding provider returned mismatched vectors");
        double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < ea.size(); ++i) {
            dot += ea[i] * eb[i];
            na += ea[i] * ea[i];
            nb += eb[i] * eb[i];
        }
        if (na == 0 || nb == 0) return 0.0;
        return dot / (std::sqrt(na) * std::sqrt(nb));
    }

private:
    std::string url_;
};

// LLM generation endpoint. POST {query, sample_index, request_id} with a
// bearer token; the response body is one trace object of the trace-set
// document schema. 3 attempts with exponential backoff; request ids make
// retries idempotent server-side.
class HttpBackend : public GeneratorBackend {
public:
    HttpBackend(std::string url, std::string token, std::uint64_t seed = 0)
        : url_(std::move(url)), token_(std::move(token)), seed_(seed) {}

    ReasoningTrace generate(const std::string& query, int sample_index) override {
        auto [base, path] = detail::split_url(url_);
        char rid[40];
        std::snprintf(rid, sizeof rid, "req-%016llx-%04d",
                      static_cast<unsigned long long>(derive_seed(seed_, 0)), sample_index);
        nlohmann::json body = {
            {"query", query}, {"sample_index", sample_index}, {"request_id", rid}};
        std::string last_error;
        for (int attempt = 0; attempt < 3; ++attempt) {
            if (attempt > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
            httplib::Client client(base);
            client.set_connection_timeout(10);
            httplib::Headers headers;
            if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
            auto res = client.Post(path, headers, body.dump(), "application/json");
            if (!res) {
                last_error = "connection failed";
                continue;
            }
            if (res->status != 200) {
                last_error = "HTTP status " + std::to_string(res->status);
                continue;
            }
            try {
                return parse_trace_object(nlohmann::json::parse(res->body));
            } catch (const Error& e) {
                last_error = e.what();
            } catch (const nlohmann::json::parse_error& e) {
                last_error = e.what();
            }
        }
        throw BackendError("generation request " + std::string(rid) + " failed after 3 attempts: " +
                           last_error);
    }

private:
    std::string url_;
    std::string token_;
    std::uint64_t seed_;
};

} // namespace scv

#endif
