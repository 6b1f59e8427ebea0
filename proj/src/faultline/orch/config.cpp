#include "faultline/orch/config.hpp"

#include "faultline/support/fnv.hpp"

namespace faultline::orch {

CampaignConfig CampaignConfig::load(const std::filesystem::path& file) {
    support::json j;
    try {
        j = support::load_json_file(file);
    } catch (const std::exception& e) {
        throw CampaignError("cannot load config " + file.string() + ": " + e.what());
    }

    CampaignConfig cfg;
    cfg.raw = j;
    auto base = std::filesystem::absolute(file).parent_path();
    try {
        cfg.scan = engine::ScanConfig::from_json(j.at("scan"), base);
        if (j.contains("seed_data")) {
            std::filesystem::path p = j.at("seed_data").get<std::string>();
            cfg.seed_data = p.is_absolute() ? p : base / p;
        }
        if (j.contains("workload")) {
            const auto& w = j.at("workload");
            cfg.workload.poll_interval_ms = w.value("poll_interval_ms", cfg.workload.poll_interval_ms);
            cfg.workload.assert_budget_ms = w.value("assert_budget_ms", cfg.workload.assert_budget_ms);
            cfg.workload.rpc_timeout_ms = w.value("rpc_timeout_ms", cfg.workload.rpc_timeout_ms);
            cfg.workload.probe_timeout_ms = w.value("probe_timeout_ms", cfg.workload.probe_timeout_ms);
        }
        cfg.round_budget_secs = j.value("round_budget_secs", cfg.round_budget_secs);
    } catch (const support::json::exception& e) {
        throw CampaignError("config " + file.string() + " is malformed: " + e.what());
    }
    if (cfg.round_budget_secs <= 0) {
        throw CampaignError("round_budget_secs must be positive");
    }
    return cfg;
}

std::string CampaignConfig::fingerprint() const {
    return support::fnv1a64_hex(support::canonical_dump(raw));
}

}  // namespace faultline::orch
