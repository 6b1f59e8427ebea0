#pragma once

#include "faultline/cloud/clock.hpp"
#include "faultline/support/jsonio.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace faultline::cloud {

// Single-writer record store plus the authoritative logical clock. All
// services read and write through it, so every state change and every
// timestamp in an experiment is ordered by one process.
//
// Lifecycle kinds (see resource_rules) get state enforcement: records are
// created in a legal initial state, direct writes to "state" are refused,
// and a transition request becomes visible only after its settle delay of
// logical time. Due transitions are applied lazily at the start of every
// operation.
//
// Kinds whose name starts with "__" are runtime scratch (e.g. the service
// port registry): they skip the clock, the transaction log, dumps, and
// snapshots, so operational noise never leaks into datasets.
//
// Persistence: mutations append to tx.jsonl; write_snapshot() captures the
// full state and truncates the log; opening a directory restores snapshot
// plus tail. A reopened store resumes the clock from the last persisted
// stamp, so pure-read ticks that happened after it are not replayed.
class Datastore {
public:
    struct OpError {
        std::string code;
        std::string message;
    };

    // No directory: purely in-memory (unit tests). Seed records are applied
    // only when there is no persisted state to restore.
    Datastore(std::optional<std::filesystem::path> dir, const support::cjson& seed);

    support::cjson get(const std::string& kind, const std::string& id);
    support::cjson find(const std::string& kind, const support::cjson& filter);
    support::cjson put(const std::string& kind, const std::string& id,
                       const support::cjson& record);
    support::cjson update(const std::string& kind, const std::string& id,
                          const support::cjson& fields);
    support::cjson transition(const std::string& kind, const std::string& id,
                              const std::string& to_state);
    void remove(const std::string& kind, const std::string& id);

    // Full visible state: {"time_ms": ..., "records": {kind: {id: record}}}.
    support::cjson dump();

    int64_t stamp();
    void advance(int64_t delta_ms);
    int64_t now_ms();

    void write_snapshot();

private:
    struct Pending {
        std::string to_state;
        int64_t due_ms = 0;
    };

    std::optional<std::filesystem::path> dir_;
    VirtualClock clock_;
    std::map<std::string, std::map<std::string, support::cjson>> records_;
    std::map<std::pair<std::string, std::string>, Pending> pending_;
    std::mutex mutex_;

    static bool shadow_kind(const std::string& kind);
    void apply_due_locked();
    void log_tx_locked(const support::cjson& entry);
    void restore_locked(const support::cjson& seed);
    void apply_tx_locked(const support::cjson& entry);
    support::cjson snapshot_state_locked();
};

}  // namespace faultline::cloud
