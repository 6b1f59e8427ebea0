#include "faultline/orch/campaign.hpp"

#include "faultline/orch/coverage.hpp"
#include "faultline/support/fs.hpp"
#include "faultline/support/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace faultline::orch {

namespace {

using support::json;

int64_t wall_now() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::filesystem::path manifest_path(const std::filesystem::path& out) {
    return out / "manifest";
}

void write_manifest(const std::filesystem::path& out, const json& manifest) {
    support::save_json_file(manifest_path(out), manifest);
}

// Deterministic subsample: seeded shuffle, keep the prefix, restore id order.
std::vector<std::string> select_points(const std::vector<std::string>& ids, uint64_t seed,
                                       int max_points) {
    if (max_points <= 0 || static_cast<size_t>(max_points) >= ids.size()) return ids;
    support::Rng rng(seed);
    auto picked = rng.sample(ids, static_cast<size_t>(max_points));
    std::sort(picked.begin(), picked.end());
    return picked;
}

struct Phases {
    engine::ScanResult scan;
    std::map<std::string, engine::InjectionPoint> by_id;
    CoverageResult coverage;
    std::vector<std::string> selected;
};

CampaignSummary run_experiments(const CampaignConfig& cfg, const CampaignOptions& opts,
                                const engine::TargetTree& tree, Phases& ph, json manifest,
                                bool skip_existing) {
    ExperimentContext ctx{cfg, tree, opts.svc_binary,
                          opts.round_budget_secs > 0 ? opts.round_budget_secs
                                                     : cfg.round_budget_secs};

    std::atomic<size_t> next{0};
    std::atomic<int> done{0};
    std::atomic<int> completed{0};
    std::atomic<int> invalid{0};
    std::mutex progress_mutex;
    const int total = static_cast<int>(ph.selected.size());

    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= ph.selected.size()) return;
            const auto& id = ph.selected[i];
            auto exp_dir = opts.out / ("exp-" + id);
            ExperimentOutcome outcome;
            bool reused = false;
            if (skip_existing && std::filesystem::exists(exp_dir / "record")) {
                try {
                    auto rec = support::load_json_file(exp_dir / "record");
                    outcome.point_id = id;
                    outcome.status = rec.at("status").get<std::string>();
                    outcome.invalid_reason = rec.value("invalid_reason", "");
                    reused = true;
                } catch (const std::exception&) {
                    reused = false;  // unreadable record: rerun the experiment
                }
            }
            if (!reused) {
                outcome = run_experiment(ctx, ph.by_id.at(id), exp_dir);
            }
            (outcome.status == "COMPLETED" ? completed : invalid).fetch_add(1);
            int finished = done.fetch_add(1) + 1;
            if (opts.progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                opts.progress(outcome, finished, total);
            }
        }
    };

    int jobs = std::max(1, opts.jobs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    CampaignSummary summary;
    summary.files_scanned = ph.scan.files_scanned;
    summary.points = static_cast<int>(ph.scan.points.size());
    summary.markers = ph.coverage.markers;
    summary.covered = static_cast<int>(ph.coverage.covered.size());
    summary.selected = total;
    summary.completed = completed.load();
    summary.invalid = invalid.load();

    manifest["phases"]["experiments"] = {{"completed_at", wall_now()},
                                         {"selected", summary.selected},
                                         {"completed", summary.completed},
                                         {"invalid", summary.invalid}};
    manifest["status"] = "done";
    write_manifest(opts.out, manifest);
    return summary;
}

}  // namespace

CampaignSummary run_campaign(const CampaignConfig& cfg, const CampaignOptions& opts) {
    support::remove_all(opts.out);
    support::ensure_dir(opts.out);

    json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["config_hash"] = cfg.fingerprint();
    manifest["seed"] = opts.seed;
    manifest["max_points"] = opts.max_points;
    manifest["status"] = "scanning";
    manifest["phases"] = json::object();
    write_manifest(opts.out, manifest);

    auto tree = engine::TargetTree::load(cfg.scan);
    Phases ph;
    ph.scan = engine::scan_target(tree, cfg.scan);
    {
        std::vector<json> rows;
        rows.reserve(ph.scan.points.size());
        for (const auto& p : ph.scan.points) rows.push_back(p.to_json());
        support::save_jsonl_file(opts.out / "points.jsonl", rows);
    }
    manifest["phases"]["scan"] = {{"completed_at", wall_now()},
                                  {"files", ph.scan.files_scanned},
                                  {"points", ph.scan.points.size()}};
    manifest["status"] = "scanned";
    write_manifest(opts.out, manifest);

    ExperimentContext ctx{cfg, tree, opts.svc_binary,
                          opts.round_budget_secs > 0 ? opts.round_budget_secs
                                                     : cfg.round_budget_secs};
    ph.coverage = run_coverage(ctx, ph.scan.points, opts.out / "gate");
    {
        json covered = json::array();
        for (const auto& id : ph.coverage.covered) covered.push_back(id);
        support::save_json_file(opts.out / "covered.json", covered);
    }
    manifest["phases"]["coverage"] = {{"completed_at", wall_now()},
                                      {"markers", ph.coverage.markers},
                                      {"covered", ph.coverage.covered.size()}};
    manifest["status"] = "covered";
    write_manifest(opts.out, manifest);

    for (const auto& p : ph.scan.points) ph.by_id.emplace(p.id, p);
    auto pool = ph.coverage.covered;
    if (!opts.only_points.empty()) {
        std::set<std::string> wanted(opts.only_points.begin(), opts.only_points.end());
        pool.erase(std::remove_if(pool.begin(), pool.end(),
                                  [&wanted](const std::string& id) { return !wanted.count(id); }),
                   pool.end());
    }
    ph.selected = select_points(pool, opts.seed, opts.max_points);
    manifest["selected_points"] = ph.selected;
    manifest["status"] = "running";
    write_manifest(opts.out, manifest);

    return run_experiments(cfg, opts, tree, ph, std::move(manifest), false);
}

CampaignSummary resume_campaign(const CampaignConfig& cfg, const CampaignOptions& opts) {
    auto mpath = manifest_path(opts.out);
    if (!std::filesystem::exists(mpath)) {
        throw CampaignError("nothing to resume: no manifest in " + opts.out.string());
    }
    json manifest = support::load_json_file(mpath);
    auto recorded = manifest.value("config_hash", "");
    if (recorded != cfg.fingerprint()) {
        throw CampaignError("refusing to resume: configuration hash " + cfg.fingerprint() +
                            " does not match the manifest's " + recorded);
    }

    auto tree = engine::TargetTree::load(cfg.scan);
    Phases ph;
    ph.scan = engine::scan_target(tree, cfg.scan);
    for (const auto& p : ph.scan.points) ph.by_id.emplace(p.id, p);

    ExperimentContext ctx{cfg, tree, opts.svc_binary,
                          opts.round_budget_secs > 0 ? opts.round_budget_secs
                                                     : cfg.round_budget_secs};
    if (!manifest["phases"].contains("coverage") ||
        !std::filesystem::exists(opts.out / "covered.json")) {
        ph.coverage = run_coverage(ctx, ph.scan.points, opts.out / "gate");
        json covered = json::array();
        for (const auto& id : ph.coverage.covered) covered.push_back(id);
        support::save_json_file(opts.out / "covered.json", covered);
        manifest["phases"]["coverage"] = {{"completed_at", wall_now()},
                                          {"markers", ph.coverage.markers},
                                          {"covered", ph.coverage.covered.size()}};
        manifest["status"] = "covered";
        write_manifest(opts.out, manifest);
    } else {
        for (const auto& id : support::load_json_file(opts.out / "covered.json")) {
            ph.coverage.covered.push_back(id.get<std::string>());
        }
        ph.coverage.markers = manifest["phases"]["coverage"].value("markers", 0);
    }

    if (manifest.contains("selected_points")) {
        for (const auto& id : manifest["selected_points"]) {
            ph.selected.push_back(id.get<std::string>());
        }
    } else {
        ph.selected = select_points(ph.coverage.covered,
                                    manifest.value("seed", uint64_t{0}),
                                    manifest.value("max_points", 0));
        manifest["selected_points"] = ph.selected;
        manifest["status"] = "running";
        write_manifest(opts.out, manifest);
    }

    return run_experiments(cfg, opts, tree, ph, std::move(manifest), true);
}

}  // namespace faultline::orch
