#include "faultline/cloud/datastore.hpp"

#include "faultline/cloud/catalog.hpp"
#include "faultline/cloud/resource_rules.hpp"
#include "faultline/support/fs.hpp"

#include <fstream>

namespace faultline::cloud {

using support::cjson;

namespace {

bool subset_match(const cjson& filter, const cjson& record) {
    for (auto it = filter.begin(); it != filter.end(); ++it) {
        if (!record.contains(it.key()) || record.at(it.key()) != it.value()) {
            return false;
        }
    }
    return true;
}

}  // namespace

Datastore::Datastore(std::optional<std::filesystem::path> dir, const cjson& seed)
    : dir_(std::move(dir)) {
    std::lock_guard<std::mutex> lock(mutex_);
    restore_locked(seed);
}

bool Datastore::shadow_kind(const std::string& kind) {
    return kind.rfind("__", 0) == 0;
}

void Datastore::apply_due_locked() {
    // std::map iteration keeps application order deterministic when several
    // transitions share a due time.
    const int64_t now = clock_.now_ms();
    for (auto it = pending_.begin(); it != pending_.end();) {
        if (it->second.due_ms > now) {
            ++it;
            continue;
        }
        const auto& [kind, id] = it->first;
        auto kind_it = records_.find(kind);
        if (kind_it != records_.end()) {
            auto rec_it = kind_it->second.find(id);
            if (rec_it != kind_it->second.end()) {
                rec_it->second["state"] = it->second.to_state;
                log_tx_locked({{"t", it->second.due_ms},
                               {"op", "settle"},
                               {"kind", kind},
                               {"id", id},
                               {"to", it->second.to_state}});
            }
        }
        it = pending_.erase(it);
    }
}

void Datastore::log_tx_locked(const cjson& entry) {
    if (!dir_) {
        return;
    }
    support::append_jsonl_line(*dir_ / "tx.jsonl", entry);
}

cjson Datastore::get(const std::string& kind, const std::string& id) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!shadow_kind(kind)) {
        apply_due_locked();
        clock_.stamp();
    }
    auto kind_it = records_.find(kind);
    if (kind_it == records_.end() || !kind_it->second.count(id)) {
        throw OpError{kErrNotFound, kind + "/" + id + " does not exist"};
    }
    return kind_it->second.at(id);
}

cjson Datastore::find(const std::string& kind, const cjson& filter) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!shadow_kind(kind)) {
        apply_due_locked();
        clock_.stamp();
    }
    if (!filter.is_object()) {
        throw OpError{kErrBadRequest, "find filter must be an object"};
    }
    cjson out = cjson::array();
    auto kind_it = records_.find(kind);
    if (kind_it != records_.end()) {
        for (const auto& [id, record] : kind_it->second) {
            if (subset_match(filter, record)) {
                out.push_back(record);
            }
        }
    }
    return out;
}

cjson Datastore::put(const std::string& kind, const std::string& id, const cjson& record) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!record.is_object()) {
        throw OpError{kErrBadRequest, "record must be an object"};
    }
    if (shadow_kind(kind)) {
        records_[kind][id] = record;
        return record;
    }
    apply_due_locked();
    const int64_t t = clock_.stamp();
    if (records_.count(kind) && records_.at(kind).count(id)) {
        throw OpError{kErrConflict, kind + "/" + id + " already exists"};
    }
    if (rules_for_kind(kind) != nullptr) {
        if (!record.contains("state") || !record.at("state").is_string() ||
            !legal_initial_state(kind, record.at("state").get<std::string>())) {
            throw OpError{kErrBadRequest, "illegal initial state for " + kind};
        }
    }
    cjson stored = record;
    stored["id"] = id;
    records_[kind][id] = stored;
    log_tx_locked({{"t", t}, {"op", "put"}, {"kind", kind}, {"id", id}, {"record", stored}});
    return stored;
}

cjson Datastore::update(const std::string& kind, const std::string& id, const cjson& fields) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!fields.is_object()) {
        throw OpError{kErrBadRequest, "update fields must be an object"};
    }
    if (shadow_kind(kind)) {
        throw OpError{kErrBadRequest, "scratch kinds do not support update"};
    }
    apply_due_locked();
    const int64_t t = clock_.stamp();
    auto kind_it = records_.find(kind);
    if (kind_it == records_.end() || !kind_it->second.count(id)) {
        throw OpError{kErrNotFound, kind + "/" + id + " does not exist"};
    }
    if (fields.contains("state") && rules_for_kind(kind) != nullptr) {
        throw OpError{kErrBadRequest, "state changes only happen via transition"};
    }
    if (fields.contains("id") && fields.at("id") != cjson(id)) {
        throw OpError{kErrBadRequest, "record id is immutable"};
    }
    cjson& record = kind_it->second.at(id);
    for (auto it = fields.begin(); it != fields.end(); ++it) {
        record[it.key()] = it.value();
    }
    log_tx_locked({{"t", t}, {"op", "merge"}, {"kind", kind}, {"id", id}, {"fields", fields}});
    return record;
}

cjson Datastore::transition(const std::string& kind, const std::string& id,
                            const std::string& to_state) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (shadow_kind(kind)) {
        throw OpError{kErrBadRequest, "scratch kinds have no lifecycle"};
    }
    apply_due_locked();
    const int64_t t = clock_.stamp();
    auto kind_it = records_.find(kind);
    if (kind_it == records_.end() || !kind_it->second.count(id)) {
        throw OpError{kErrNotFound, kind + "/" + id + " does not exist"};
    }
    if (pending_.count({kind, id})) {
        throw OpError{kErrConflict, kind + "/" + id + " already has a pending transition"};
    }
    const cjson& record = kind_it->second.at(id);
    const std::string from =
        record.contains("state") ? record.at("state").get<std::string>() : "";
    const TransitionEdge* edge = find_edge(kind, from, to_state);
    if (edge == nullptr) {
        throw OpError{kErrBadRequest,
                      kind + " cannot move from " + from + " to " + to_state};
    }
    const int64_t due = t + edge->settle_ms;
    pending_[{kind, id}] = Pending{to_state, due};
    log_tx_locked({{"t", t},
                   {"op", "schedule"},
                   {"kind", kind},
                   {"id", id},
                   {"to", to_state},
                   {"due", due}});
    return cjson{{"scheduled", to_state}, {"due_ms", due}};
}

void Datastore::remove(const std::string& kind, const std::string& id) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (shadow_kind(kind)) {
        records_[kind].erase(id);
        return;
    }
    apply_due_locked();
    const int64_t t = clock_.stamp();
    auto kind_it = records_.find(kind);
    if (kind_it == records_.end() || !kind_it->second.count(id)) {
        throw OpError{kErrNotFound, kind + "/" + id + " does not exist"};
    }
    kind_it->second.erase(id);
    if (kind_it->second.empty()) {
        records_.erase(kind_it);
    }
    pending_.erase({kind, id});
    log_tx_locked({{"t", t}, {"op", "delete"}, {"kind", kind}, {"id", id}});
}

cjson Datastore::dump() {
    std::lock_guard<std::mutex> lock(mutex_);
    apply_due_locked();
    cjson kinds = cjson::object();
    for (const auto& [kind, by_id] : records_) {
        if (shadow_kind(kind)) {
            continue;
        }
        cjson entry = cjson::object();
        for (const auto& [id, record] : by_id) {
            entry[id] = record;
        }
        kinds[kind] = entry;
    }
    return cjson{{"time_ms", clock_.now_ms()}, {"records", kinds}};
}

int64_t Datastore::stamp() {
    std::lock_guard<std::mutex> lock(mutex_);
    apply_due_locked();
    return clock_.stamp();
}

void Datastore::advance(int64_t delta_ms) {
    std::lock_guard<std::mutex> lock(mutex_);
    clock_.advance(delta_ms);
    apply_due_locked();
}

int64_t Datastore::now_ms() {
    std::lock_guard<std::mutex> lock(mutex_);
    return clock_.now_ms();
}

support::cjson Datastore::snapshot_state_locked() {
    cjson kinds = cjson::object();
    for (const auto& [kind, by_id] : records_) {
        if (shadow_kind(kind)) {
            continue;
        }
        cjson entry = cjson::object();
        for (const auto& [id, record] : by_id) {
            entry[id] = record;
        }
        kinds[kind] = entry;
    }
    cjson pending = cjson::array();
    for (const auto& [key, p] : pending_) {
        pending.push_back(cjson{{"kind", key.first},
                                {"id", key.second},
                                {"to", p.to_state},
                                {"due", p.due_ms}});
    }
    return cjson{
        {"time_ms", clock_.now_ms()}, {"records", kinds}, {"pending", pending}};
}

void Datastore::write_snapshot() {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!dir_) {
        return;
    }
    apply_due_locked();
    support::save_json_file(*dir_ / "snapshot.json", snapshot_state_locked());
    std::ofstream truncate(*dir_ / "tx.jsonl", std::ios::trunc);
}

void Datastore::restore_locked(const cjson& seed) {
    const auto load_state = [this](const cjson& state) {
        clock_.reset(state.at("time_ms").get<int64_t>());
        for (auto kind_it = state.at("records").begin(); kind_it != state.at("records").end();
             ++kind_it) {
            for (auto rec_it = kind_it.value().begin(); rec_it != kind_it.value().end();
                 ++rec_it) {
                records_[kind_it.key()][rec_it.key()] = rec_it.value();
            }
        }
        for (const auto& p : state.value("pending", cjson::array())) {
            pending_[{p.at("kind").get<std::string>(), p.at("id").get<std::string>()}] =
                Pending{p.at("to").get<std::string>(), p.at("due").get<int64_t>()};
        }
    };

    bool restored = false;
    if (dir_) {
        support::ensure_dir(*dir_);
        const auto snapshot_path = *dir_ / "snapshot.json";
        if (std::filesystem::exists(snapshot_path)) {
            load_state(cjson(support::load_json_file(snapshot_path)));
            restored = true;
        }
        const auto tx_path = *dir_ / "tx.jsonl";
        if (std::filesystem::exists(tx_path)) {
            std::ifstream in(tx_path);
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty()) {
                    apply_tx_locked(cjson::parse(line));
                    restored = true;
                }
            }
        }
    }
    if (!restored && seed.is_object()) {
        for (auto kind_it = seed.begin(); kind_it != seed.end(); ++kind_it) {
            for (auto rec_it = kind_it.value().begin(); rec_it != kind_it.value().end();
                 ++rec_it) {
                cjson record = rec_it.value();
                record["id"] = rec_it.key();
                records_[kind_it.key()][rec_it.key()] = record;
            }
        }
    }
}

void Datastore::apply_tx_locked(const cjson& entry) {
    const std::string op = entry.at("op").get<std::string>();
    const int64_t t = entry.at("t").get<int64_t>();
    if (t > clock_.now_ms()) {
        clock_.reset(t);
    }
    if (op == "put") {
        records_[entry.at("kind").get<std::string>()][entry.at("id").get<std::string>()] =
            entry.at("record");
    } else if (op == "merge") {
        auto& record = records_.at(entry.at("kind").get<std::string>())
                           .at(entry.at("id").get<std::string>());
        for (auto it = entry.at("fields").begin(); it != entry.at("fields").end(); ++it) {
            record[it.key()] = it.value();
        }
    } else if (op == "schedule") {
        pending_[{entry.at("kind").get<std::string>(), entry.at("id").get<std::string>()}] =
            Pending{entry.at("to").get<std::string>(), entry.at("due").get<int64_t>()};
    } else if (op == "settle") {
        const std::pair<std::string, std::string> key{entry.at("kind").get<std::string>(),
                                                      entry.at("id").get<std::string>()};
        auto kind_it = records_.find(key.first);
        if (kind_it != records_.end() && kind_it->second.count(key.second)) {
            kind_it->second.at(key.second)["state"] = entry.at("to");
        }
        pending_.erase(key);
    } else if (op == "delete") {
        const std::string kind = entry.at("kind").get<std::string>();
        const std::string id = entry.at("id").get<std::string>();
        auto kind_it = records_.find(kind);
        if (kind_it != records_.end()) {
            kind_it->second.erase(id);
            if (kind_it->second.empty()) {
                records_.erase(kind_it);
            }
        }
        pending_.erase({kind, id});
    } else {
        throw std::runtime_error("unknown tx op: " + op);
    }
}

}  // namespace faultline::cloud
