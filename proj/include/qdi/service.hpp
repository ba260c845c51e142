// Copyright 2026 The qdi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP/JSON front end for SessionStore.
//
//   GET    /api/scenarios
//   POST   /api/sessions                    {"scenario": name | definition, "seed"?, "dim"?}
//   GET    /api/sessions/{id}
//   POST   /api/sessions/{id}/measurements  {"measurement": name}
//   DELETE /api/sessions/{id}
//
// Errors are {"error": text} with 400, 404 or 422.

#pragma once

#include <functional>
#include <mutex>
#include <ostream>
#include <string>

#include <httplib.h>

#include "qdi/json_io.hpp"
#include "qdi/session.hpp"

namespace qdi::service {

using io::json;

namespace detail {

inline void reply(httplib::Response &res, int status, const json &body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

inline void error(httplib::Response &res, int status, const std::string &message) {
    reply(res, status, json{{"error", message}});
}

/// Maps library exceptions onto HTTP statuses.
inline void guarded(httplib::Response &res, const std::function<void()> &body) {
    try {
        body();
    } catch (const SessionNotFound &e) {
        error(res, 404, e.what());
    } catch (const UnknownScenario &e) {
        error(res, 404, e.what());
    } catch (const ScriptError &e) {
        error(res, 422, e.what());
    } catch (const json::exception &e) {
        error(res, 400, std::string("malformed request: ") + e.what());
    } catch (const Error &e) {
        error(res, 400, e.what());
    }
}

inline SessionStore::CreateRequest parse_create(const std::string &body) {
    SessionStore::CreateRequest req;
    const json j = body.empty() ? json::object() : json::parse(body);
    if (!j.is_object()) throw io::FormatError("request body must be a JSON object");
    if (!j.contains("scenario")) throw io::FormatError("missing 'scenario'");
    if (j["scenario"].is_string()) {
        req.scenario = j["scenario"].get<std::string>();
    } else if (j["scenario"].is_object()) {
        req.custom = io::scenario_from_json(j["scenario"]);
    } else {
        throw io::FormatError("'scenario' must be a name or a scenario definition");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw io::FormatError("'seed' must be a non-negative integer");
        req.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("dim")) {
        if (!j["dim"].is_number_unsigned()) throw io::FormatError("'dim' must be a positive integer");
        req.dim = j["dim"].get<std::size_t>();
    }
    return req;
}

}  // namespace detail

inline json scenarios_json() {
    json out = json::array();
    for (const auto &d : list_scenarios()) {
        auto s = *find_builtin_scenario(d.name, d.default_dim);
        json ms = json::array();
        for (const auto &m : s.measurements) {
            json labels = json::array();
            for (const auto &o : m.outcomes()) labels.push_back(o.label);
            ms.push_back({{"name", m.name()}, {"outcomes", std::move(labels)}});
        }
        json item = {{"name", d.name}, {"description", d.description}, {"dim", s.dim}, {"measurements", ms}};
        item["takes_dim"] = d.takes_dim;
        out.push_back(std::move(item));
    }
    return out;
}

/// Registers the API routes on `server`. When `log` is set, one line per
/// request is written to it.
inline void install_routes(httplib::Server &server, SessionStore &store, std::ostream *log = nullptr) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});

    server.Options(R"(/api/.*)", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });

    server.Get("/api/scenarios", [](const httplib::Request &, httplib::Response &res) {
        detail::reply(res, 200, scenarios_json());
    });

    server.Post("/api/sessions", [&store](const httplib::Request &req, httplib::Response &res) {
        detail::guarded(res, [&] { detail::reply(res, 201, store.create(detail::parse_create(req.body))); });
    });

    server.Get(R"(/api/sessions/([^/]+))", [&store](const httplib::Request &req, httplib::Response &res) {
        detail::guarded(res, [&] { detail::reply(res, 200, store.get(req.matches[1])); });
    });

    server.Delete(R"(/api/sessions/([^/]+))", [&store](const httplib::Request &req, httplib::Response &res) {
        detail::guarded(res, [&] {
            const std::string id = req.matches[1];
            store.remove(id);
            detail::reply(res, 200, json{{"deleted", id}});
        });
    });

    server.Post(R"(/api/sessions/([^/]+)/measurements)",
                [&store](const httplib::Request &req, httplib::Response &res) {
                    detail::guarded(res, [&] {
                        const std::string id = req.matches[1];
                        const json body = json::parse(req.body.empty() ? "{}" : req.body);
                        if (!body.is_object() || !body.contains("measurement") || !body["measurement"].is_string()) {
                            // Check the session first so an unknown id is still a 404.
                            store.get(id);
                            throw io::FormatError("body must be {\"measurement\": name}");
                        }
                        detail::reply(res, 200, store.measure(id, body["measurement"].get<std::string>()));
                    });
                });

    if (log) {
        auto log_mutex = std::make_shared<std::mutex>();
        server.set_logger([log, log_mutex](const httplib::Request &req, const httplib::Response &res) {
            std::lock_guard lock(*log_mutex);
            *log << utc_timestamp() << ' ' << req.method << ' ' << req.path << ' ' << res.status << '\n' << std::flush;
        });
    }
}

}  // namespace qdi::service
