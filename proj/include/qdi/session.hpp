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

// Live measurement sessions: one simulated system, its hidden state and an
// append-only history. SessionStore holds many of them for the HTTP service.

#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "qdi/json_io.hpp"
#include "qdi/measurement.hpp"
#include "qdi/random.hpp"
#include "qdi/scenario.hpp"

namespace qdi {

/// A single system that is measured one step at a time. The state is always
/// the collapse-fold of the history over the initial state, and all
/// randomness comes from RandomStream(seed).
class LiveSystem {
   public:
    LiveSystem(Scenario scenario, std::uint64_t seed)
        : scenario_(std::move(scenario)), seed_(seed), rng_(seed),
          state_(scenario_.initial_state ? *scenario_.initial_state : haar_random_state(scenario_.dim, rng_)),
          last_(scenario_.measurements.size(), -1) {}

    const Scenario &scenario() const { return scenario_; }
    std::uint64_t seed() const { return seed_; }
    const StateVector &state() const { return state_; }
    const std::vector<MeasurementEvent> &history() const { return history_; }

    std::vector<std::string> actions() const {
        std::vector<std::string> out;
        for (const auto &e : history_) out.push_back(e.measurement);
        return out;
    }

    OutcomeDistribution predictions(const Measurement &m) const { return predict(state_, m); }

    /// Samples, collapses and appends the event. Throws ScriptError for an
    /// unknown measurement name.
    const MeasurementEvent &measure(const std::string &name) {
        const auto k = scenario_.index_of(name);
        if (!k) throw ScriptError("unknown measurement '" + name + "' in scenario '" + scenario_.name + "'");
        const auto &m = scenario_.measurements[*k];
        auto drawn = sample(state_, m, rng_);
        state_ = drawn.state;

        MeasurementEvent e;
        e.step_index = history_.size();
        e.measurement = name;
        e.outcome_label = m.outcome(drawn.index).label;
        e.value = m.outcome(drawn.index).value;
        e.probability = drawn.probability;
        const int idx = static_cast<int>(drawn.index);
        if (last_[*k] >= 0 && last_[*k] != idx) {
            e.invalidated.push_back({name, m.outcome(static_cast<std::size_t>(last_[*k])).label, e.outcome_label});
        }
        last_[*k] = idx;
        history_.push_back(std::move(e));
        return history_.back();
    }

   private:
    Scenario scenario_;
    std::uint64_t seed_;
    RandomStream rng_;
    StateVector state_;
    std::vector<int> last_;
    std::vector<MeasurementEvent> history_;
};

/// Rebuilds a system from its scenario, seed and the names measured so far.
inline LiveSystem replay(const Scenario &scenario, std::uint64_t seed, const std::vector<std::string> &actions) {
    LiveSystem system(scenario, seed);
    for (const auto &a : actions) system.measure(a);
    return system;
}

struct SessionNotFound : Error {
    using Error::Error;
};
struct UnknownScenario : Error {
    using Error::Error;
};

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// In-memory session registry. Operations on one session are serialized by
/// that session's mutex; the registry itself takes a shared lock for lookups.
class SessionStore {
   public:
    struct CreateRequest {
        /// Built-in scenario name, or empty when `custom` is set.
        std::string scenario;
        std::optional<std::size_t> dim;
        std::optional<Scenario> custom;
        std::optional<std::uint64_t> seed;
    };

    explicit SessionStore(bool reveal_state = false) : reveal_state_(reveal_state) {}

    bool reveal_state() const { return reveal_state_; }

    /// Returns the new session's view. Throws UnknownScenario, DomainError or
    /// DefinitionError for bad requests.
    io::json create(const CreateRequest &req) {
        Scenario scenario;
        if (req.custom) {
            scenario = *req.custom;
        } else {
            auto found = find_builtin_scenario(req.scenario, req.dim);
            if (!found) throw UnknownScenario("unknown scenario '" + req.scenario + "'");
            scenario = std::move(*found);
        }
        const std::uint64_t seed = req.seed ? *req.seed : random_token_u64();
        auto entry = std::make_shared<Entry>(LiveSystem(std::move(scenario), seed), utc_timestamp());
        std::string id;
        {
            std::unique_lock lock(registry_mutex_);
            do {
                id = new_id();
            } while (sessions_.count(id));
            entry->id = id;
            sessions_.emplace(id, entry);
        }
        std::shared_lock entry_lock(entry->mutex);
        return view(*entry);
    }

    io::json get(const std::string &id) const {
        auto entry = find(id);
        std::shared_lock lock(entry->mutex);
        return view(*entry);
    }

    /// {"event": ..., "session": view}. Throws SessionNotFound or ScriptError.
    io::json measure(const std::string &id, const std::string &measurement) {
        auto entry = find(id);
        std::unique_lock lock(entry->mutex);
        const auto &event = entry->system.measure(measurement);
        return {{"event", io::to_json(event)}, {"session", view(*entry)}};
    }

    void remove(const std::string &id) {
        std::unique_lock lock(registry_mutex_);
        if (sessions_.erase(id) == 0) throw SessionNotFound("unknown session '" + id + "'");
    }

    std::size_t size() const {
        std::shared_lock lock(registry_mutex_);
        return sessions_.size();
    }

    /// Scenario definitions, seeds and action lists; enough to replay.
    io::json snapshot() const {
        io::json sessions = io::json::array();
        std::shared_lock lock(registry_mutex_);
        for (const auto &[id, entry] : sessions_) {
            std::shared_lock entry_lock(entry->mutex);
            sessions.push_back({{"id", id},
                                {"scenario", io::to_json(entry->system.scenario())},
                                {"seed", entry->system.seed()},
                                {"created_at", entry->created_at},
                                {"actions", entry->system.actions()}});
        }
        return {{"sessions", std::move(sessions)}};
    }

    void restore(const io::json &snap) {
        if (!snap.contains("sessions") || !snap["sessions"].is_array()) {
            throw io::FormatError("snapshot needs a 'sessions' array");
        }
        std::unique_lock lock(registry_mutex_);
        for (const auto &s : snap["sessions"]) {
            auto system = replay(io::scenario_from_json(s["scenario"]), s["seed"].get<std::uint64_t>(),
                                 s["actions"].get<std::vector<std::string>>());
            auto entry = std::make_shared<Entry>(std::move(system), s["created_at"].get<std::string>());
            entry->id = s["id"].get<std::string>();
            sessions_[entry->id] = entry;
        }
    }

    void save_snapshot(const std::string &path) const {
        std::ofstream out(path);
        out << snapshot().dump(2) << '\n';
    }

    void load_snapshot(const std::string &path) {
        std::ifstream in(path);
        if (!in) return;
        restore(io::json::parse(in));
    }

   private:
    struct Entry {
        Entry(LiveSystem s, std::string created) : system(std::move(s)), created_at(std::move(created)) {}
        std::string id;
        LiveSystem system;
        std::string created_at;
        mutable std::shared_mutex mutex;
    };

    std::shared_ptr<Entry> find(const std::string &id) const {
        std::shared_lock lock(registry_mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) throw SessionNotFound("unknown session '" + id + "'");
        return it->second;
    }

    io::json view(const Entry &entry) const {
        const auto &sys = entry.system;
        io::json ms = io::json::array();
        for (const auto &m : sys.scenario().measurements) {
            const auto dist = sys.predictions(m);
            io::json outs = io::json::array();
            for (std::size_t k = 0; k < m.dim(); ++k) {
                outs.push_back(
                    {{"label", m.outcome(k).label}, {"value", m.outcome(k).value}, {"probability", dist[k]}});
            }
            ms.push_back({{"name", m.name()}, {"outcomes", std::move(outs)}});
        }
        io::json out = {{"id", entry.id},
                        {"scenario", sys.scenario().name},
                        {"dim", sys.scenario().dim},
                        {"seed", sys.seed()},
                        {"created_at", entry.created_at},
                        {"measurements", std::move(ms)},
                        {"history", io::to_json(sys.history())}};
        if (reveal_state_) out["state"] = io::to_json(sys.state());
        return out;
    }

    static std::uint64_t random_token_u64() {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }

    static std::string new_id() {
        static constexpr char hex[] = "0123456789abcdef";
        std::random_device rd;
        std::string id;
        for (int i = 0; i < 8; ++i) {
            auto word = rd();
            for (int b = 0; b < 4; ++b) {
                id.push_back(hex[word & 0xf]);
                word >>= 4;
            }
        }
        return id;
    }

    bool reveal_state_;
    mutable std::shared_mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace qdi
