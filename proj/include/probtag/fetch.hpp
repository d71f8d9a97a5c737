#pragma once

#include <chrono>
#include <string>
#include <thread>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "probtag/errors.hpp"

namespace probtag::ingest {

struct FetchOptions {
    /// Minimum spacing between consecutive requests. Scraping a public site
    /// at full speed is rude and gets the client banned; 500ms is the floor
    /// the scraper ships with.
    std::chrono::milliseconds min_interval{500};
    int timeout_seconds = 30;
    std::string user_agent = "probtag-scraper";
};

/// Thin polite HTTP client around a single host. get() blocks until at least
/// min_interval has passed since the previous request on this instance.
class Fetcher {
public:
    explicit Fetcher(std::string base_url, FetchOptions options = {})
        : client_(base_url), options_(options) {
        // Politeness floor: rate violations are impossible by construction.
        if (options_.min_interval < std::chrono::milliseconds(500))
            options_.min_interval = std::chrono::milliseconds(500);
        client_.set_connection_timeout(options_.timeout_seconds);
        client_.set_read_timeout(options_.timeout_seconds);
        client_.set_follow_location(true);
    }

    /// Fetches base_url + path and returns the body. Throws HttpError for a
    /// non-2xx status and NetworkError when no response arrives at all.
    std::string get(const std::string& path) {
        wait_for_slot();
        httplib::Result res = client_.Get(path, {{"User-Agent", options_.user_agent}});
        last_request_ = std::chrono::steady_clock::now();
        if (!res)
            throw NetworkError("request to " + path + " failed: " + httplib::to_string(res.error()));
        if (res->status < 200 || res->status >= 300) throw HttpError(res->status, path);
        return res->body;
    }

private:
    void wait_for_slot() {
        if (!has_fetched_) {
            has_fetched_ = true;
            return;
        }
        const auto next_allowed = last_request_ + options_.min_interval;
        const auto now = std::chrono::steady_clock::now();
        if (now < next_allowed) std::this_thread::sleep_for(next_allowed - now);
    }

    httplib::Client client_;
    FetchOptions options_;
    std::chrono::steady_clock::time_point last_request_{};
    bool has_fetched_ = false;
};

}  // namespace probtag::ingest
