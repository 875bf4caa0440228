#include "caarl/error.hpp"
#include "caarl/select.hpp"

#include <httplib.h>

namespace caarl {

namespace {

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // prefix without trailing slash
};

ParsedUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidArgument, "endpoint URL lacks a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    ParsedUrl out;
    out.origin = url.substr(0, path_start);
    out.path = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
    return out;
}

class HttplibTransport final : public ChatTransport {
public:
    explicit HttplibTransport(const std::string& base_url) : url_(split_url(base_url)), client_(url_.origin) {
        constexpr std::string_view suffix = "/chat/completions";
        if (url_.path.size() < suffix.size() || url_.path.compare(url_.path.size() - suffix.size(), suffix.size(), suffix) != 0)
            url_.path += suffix;
        if (!client_.is_valid()) throw Error(ErrorCode::InvalidArgument, "unsupported endpoint URL: " + base_url);
    }

    HttpResponse post_json(const std::string& body, const std::string& api_key,
                           std::chrono::milliseconds timeout) override {
        client_.set_connection_timeout(timeout);
        client_.set_read_timeout(timeout);
        client_.set_write_timeout(timeout);
        httplib::Headers headers;
        if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
        auto result = client_.Post(url_.path, headers, body, "application/json");
        if (!result) throw TransportFailure("request failed: " + httplib::to_string(result.error()));
        return {result->status, result->body};
    }

private:
    ParsedUrl url_;
    httplib::Client client_;
};

}  // namespace

std::unique_ptr<ChatTransport> make_http_transport(const std::string& base_url) {
    return std::make_unique<HttplibTransport>(base_url);
}

}  // namespace caarl
