#include "faultline/cloud/service_core.hpp"

#include "faultline/cloud/catalog.hpp"
#include "faultline/engine/corrupt.hpp"
#include "faultline/engine/inject.hpp"
#include "faultline/lang/parser.hpp"
#include "faultline/support/fs.hpp"

#include <stdexcept>

namespace faultline::cloud {

using lang::ScriptError;
using lang::Value;
using support::cjson;

cjson store_dispatch(Datastore& store, const std::string& endpoint, const cjson& payload) {
    try {
        if (endpoint == "get") {
            return store.get(payload.at("kind"), payload.at("id"));
        }
        if (endpoint == "find") {
            return store.find(payload.at("kind"), payload.at("filter"));
        }
        if (endpoint == "put") {
            return store.put(payload.at("kind"), payload.at("id"), payload.at("record"));
        }
        if (endpoint == "update") {
            return store.update(payload.at("kind"), payload.at("id"), payload.at("fields"));
        }
        if (endpoint == "transition") {
            return store.transition(payload.at("kind"), payload.at("id"), payload.at("to"));
        }
        if (endpoint == "delete") {
            store.remove(payload.at("kind"), payload.at("id"));
            return cjson{{"deleted", true}};
        }
        if (endpoint == "stamp") {
            return cjson{{"t_ms", store.stamp()}};
        }
        if (endpoint == "advance") {
            store.advance(payload.at("delta_ms").get<int64_t>());
            return cjson{{"time_ms", store.now_ms()}};
        }
        if (endpoint == "now") {
            return cjson{{"time_ms", store.now_ms()}};
        }
        if (endpoint == "dump") {
            return store.dump();
        }
        if (endpoint == "snapshot") {
            store.write_snapshot();
            return cjson{{"written", true}};
        }
    } catch (const Datastore::OpError& err) {
        throw RpcError{err.code, err.message};
    } catch (const cjson::exception& err) {
        throw RpcError{kErrBadRequest, err.what()};
    }
    throw RpcError{kErrBadRequest, "unknown store endpoint " + endpoint};
}

void bind_store_endpoints(RpcServer& server, Datastore& store) {
    static const char* kEndpoints[] = {"get",    "find",  "put",     "update",
                                       "transition", "delete", "stamp", "advance",
                                       "now",    "dump",  "snapshot"};
    for (const char* name : kEndpoints) {
        server.add(name, [&store, name](const cjson& payload) {
            return store_dispatch(store, name, payload);
        });
    }
}

support::cjson HttpPeerBus::call(const std::string& subsystem, const std::string& endpoint,
                                 const cjson& payload, int timeout_ms) {
    RpcClient* client = nullptr;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = clients_.find(subsystem);
        if (it == clients_.end()) {
            cjson entry;
            try {
                entry = store_.op("get", cjson{{"kind", "__svc"}, {"id", subsystem}});
            } catch (const RpcError&) {
                throw RpcError{kErrUnavailable, "no registered service " + subsystem};
            }
            auto created = std::make_unique<RpcClient>(entry.at("host").get<std::string>(),
                                                       entry.at("port").get<int>());
            it = clients_.emplace(subsystem, std::move(created)).first;
        }
        client = it->second.get();
    }
    return client->call(endpoint, payload, timeout_ms);
}

namespace {

ScriptError store_error_to_script(const RpcError& err) {
    Value::Map detail;
    detail["code"] = Value::str(err.code);
    return ScriptError{script_type_for_error_code(err.code), err.message, std::move(detail)};
}

const std::string& want_str(const Value& v, const char* what) {
    if (v.kind() != Value::Kind::Str) {
        throw ScriptError{"TypeError", std::string(what) + " must be a string", {}};
    }
    return v.as_str();
}

}  // namespace

ServiceCore::ServiceCore(ServiceEnv env, StoreClient& store, PeerBus& peers)
    : env_(std::move(env)), store_(store), peers_(peers) {
    for (const auto& rel : support::list_files(env_.script_dir, ".mc")) {
        const std::string source = support::read_file(env_.script_dir / rel);
        lang::ParseError err;
        auto parsed = lang::parse_source(source, err);
        if (!parsed) {
            throw std::runtime_error(env_.subsystem + "/" + rel.string() + " line " +
                                     std::to_string(err.line) + ": " + err.message);
        }
        parsed->rel_path = rel.string();
        module_.add_file(std::move(*parsed));
    }
    interp_ = std::make_unique<lang::Interpreter>(module_);
    log_ = std::make_unique<LogSink>(env_.log_file, env_.subsystem, [this] { return stamp(); });
    register_host_builtins();
    log_->write(Severity::Info, "service started, " +
                                    std::to_string(module_.files().size()) +
                                    " script files loaded");
}

int64_t ServiceCore::stamp() {
    try {
        return store_.op("stamp", cjson::object()).at("t_ms").get<int64_t>();
    } catch (const RpcError& err) {
        throw store_error_to_script(err);
    }
}

void ServiceCore::register_host_builtins() {
    auto store_op = [this](const std::string& endpoint, const cjson& payload) {
        try {
            return store_.op(endpoint, payload);
        } catch (const RpcError& err) {
            throw store_error_to_script(err);
        }
    };

    interp_->register_builtin("ds_get", [store_op](std::vector<Value>& args) {
        const cjson result = store_op("get", cjson{{"kind", want_str(args[0], "kind")},
                                                   {"id", want_str(args[1], "id")}});
        return Value::from_json(result);
    });
    interp_->register_builtin("ds_find", [store_op](std::vector<Value>& args) {
        const cjson result =
            store_op("find", cjson{{"kind", want_str(args[0], "kind")},
                                   {"filter", cjson(args[1].to_json())}});
        return Value::from_json(result);
    });
    interp_->register_builtin("ds_put", [store_op](std::vector<Value>& args) {
        const cjson result =
            store_op("put", cjson{{"kind", want_str(args[0], "kind")},
                                  {"id", want_str(args[1], "id")},
                                  {"record", cjson(args[2].to_json())}});
        return Value::from_json(result);
    });
    interp_->register_builtin("ds_update", [store_op](std::vector<Value>& args) {
        const cjson result =
            store_op("update", cjson{{"kind", want_str(args[0], "kind")},
                                     {"id", want_str(args[1], "id")},
                                     {"fields", cjson(args[2].to_json())}});
        return Value::from_json(result);
    });
    interp_->register_builtin("ds_transition", [store_op](std::vector<Value>& args) {
        const cjson result =
            store_op("transition", cjson{{"kind", want_str(args[0], "kind")},
                                         {"id", want_str(args[1], "id")},
                                         {"to", want_str(args[2], "state")}});
        return Value::from_json(result);
    });
    interp_->register_builtin("ds_delete", [store_op](std::vector<Value>& args) {
        store_op("delete", cjson{{"kind", want_str(args[0], "kind")},
                                 {"id", want_str(args[1], "id")}});
        return Value::null();
    });

    interp_->register_builtin("rpc_call", [this](std::vector<Value>& args) {
        const std::string& subsystem = want_str(args[0], "subsystem");
        const std::string& endpoint = want_str(args[1], "endpoint");
        try {
            const cjson result =
                peers_.call(subsystem, endpoint, cjson(args[2].to_json()));
            return Value::from_json(result);
        } catch (const RpcError& err) {
            throw store_error_to_script(err);
        }
    });

    const auto log_fn = [this](Severity sev) {
        return [this, sev](std::vector<Value>& args) {
            log_->write(sev, want_str(args[0], "message"));
            return Value::null();
        };
    };
    interp_->register_builtin("log_debug", log_fn(Severity::Debug));
    interp_->register_builtin("log_info", log_fn(Severity::Info));
    interp_->register_builtin("log_warning", log_fn(Severity::Warning));
    interp_->register_builtin("log_error", log_fn(Severity::Error));
    interp_->register_builtin("log_critical", log_fn(Severity::Critical));

    interp_->register_builtin("fail", [](std::vector<Value>& args) -> Value {
        Value::Map detail;
        detail["code"] = Value::str(want_str(args[0], "code"));
        throw ScriptError{"ApiFail", want_str(args[1], "message"), std::move(detail)};
    });

    interp_->register_builtin("cache_get", [this](std::vector<Value>& args) {
        const auto it = cache_.find(want_str(args[0], "key"));
        return it == cache_.end() ? args[1] : it->second;
    });
    interp_->register_builtin("cache_put", [this](std::vector<Value>& args) {
        cache_[want_str(args[0], "key")] = args[1];
        return Value::null();
    });

    interp_->register_builtin("__trig", [this](std::vector<Value>& args) {
        const std::string& point_id = want_str(args[0], "point id");
        if (env_.trigger_control.empty() ||
            !engine::trigger_file::enabled_for(env_.trigger_control, point_id)) {
            return Value::boolean(false);
        }
        const int64_t t = stamp();
        support::append_jsonl_line(env_.trigger_out, support::json{{"t_ms", t},
                                                                   {"point", point_id},
                                                                   {"subsystem", env_.subsystem}});
        return Value::boolean(true);
    });

    interp_->register_builtin("__mark", [this, store_op](std::vector<Value>& args) {
        const std::string& joined = want_str(args[0], "point ids");
        // Reads the clock without ticking it, so probes never perturb the
        // timeline they observe.
        const double t_secs =
            static_cast<double>(
                store_op("now", cjson::object()).at("time_ms").get<int64_t>()) /
            1000.0;
        size_t begin = 0;
        while (begin <= joined.size()) {
            const size_t comma = joined.find(',', begin);
            const std::string id = joined.substr(
                begin, comma == std::string::npos ? std::string::npos : comma - begin);
            if (!id.empty()) {
                support::append_jsonl_line(env_.coverage_out,
                                           support::json{{"point", id}, {"t", t_secs}});
            }
            if (comma == std::string::npos) {
                break;
            }
            begin = comma + 1;
        }
        return Value::null();
    });

    interp_->register_builtin("__corrupt", [](std::vector<Value>& args) {
        return engine::corrupt_value(args[0]);
    });
}

cjson ServiceCore::handle(const std::string& endpoint, const cjson& payload) {
    if (!module_.has_function("api_" + endpoint)) {
        throw RpcError{kErrBadRequest, "unknown endpoint " + endpoint};
    }
    try {
        Value result = interp_->call_function("api_" + endpoint, {Value::from_json(payload)});
        return cjson(result.to_json());
    } catch (const ScriptError& err) {
        if (err.type == "ApiFail") {
            std::string code = kErrServer;
            const auto it = err.detail.find("code");
            if (it != err.detail.end() && it->second.kind() == Value::Kind::Str) {
                code = it->second.as_str();
            }
            log_->write(Severity::Warning,
                        endpoint + " refused: " + code + ": " + err.message);
            throw RpcError{code, err.message};
        }
        log_->write(Severity::Error,
                    "unhandled " + err.type + " in " + endpoint + ": " + err.message);
        throw RpcError{kErrServer, err.type + ": " + err.message};
    }
}

}  // namespace faultline::cloud
