#pragma once

// Scripted chat-completion endpoint on localhost for exercising the remote selector offline.

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <deque>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace stub {

struct Scripted {
    int status = 200;
    std::string content;  // reply text placed in choices[0].message.content
};

class ChatServer {
public:
    explicit ChatServer(std::deque<Scripted> script) : script_(std::move(script)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard lock(mutex_);
            requests_.push_back(req.body);
            auth_.push_back(req.get_header_value("Authorization"));
            Scripted next{200, "no"};
            if (!script_.empty()) {
                next = script_.front();
                script_.pop_front();
            }
            res.status = next.status;
            if (next.status == 200) {
                const nlohmann::json body = {
                    {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", next.content}}}}}}};
                res.set_content(body.dump(), "application/json");
            } else {
                res.set_content(R"({"error":"scripted failure"})", "application/json");
            }
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~ChatServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    ChatServer(const ChatServer&) = delete;
    ChatServer& operator=(const ChatServer&) = delete;

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

    std::vector<std::string> requests() const {
        std::lock_guard lock(mutex_);
        return requests_;
    }

    std::vector<std::string> auth_headers() const {
        std::lock_guard lock(mutex_);
        return auth_;
    }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    mutable std::mutex mutex_;
    std::deque<Scripted> script_;
    std::vector<std::string> requests_;
    std::vector<std::string> auth_;
};

}  // namespace stub
