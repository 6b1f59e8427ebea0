#include "faultline/orch/coverage.hpp"

#include "faultline/engine/instrument.hpp"
#include "faultline/support/fs.hpp"
#include "faultline/workload/runner.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <set>
#include <thread>

namespace faultline::orch {

namespace {

workload::WorkloadResult gate_round(Deployment& dep, const ExperimentContext& ctx,
                                    const char* label) {
    std::packaged_task<workload::WorkloadResult()> task([&dep, &ctx] {
        auto wl = ctx.cfg.workload;
        wl.round_tag = "r1";
        return workload::run_workload(dep.bus(), dep.store(), wl);
    });
    auto fut = task.get_future();
    std::thread worker(std::move(task));
    if (fut.wait_for(std::chrono::duration<double>(ctx.round_budget_secs)) !=
        std::future_status::ready) {
        dep.stop();
        worker.join();
        throw CampaignError(std::string(label) + " run exceeded the round budget");
    }
    worker.join();
    auto result = fut.get();
    if (result.aborted || result.failed_assertions > 0) {
        throw CampaignError(std::string(label) + " run failed: " +
                            std::to_string(result.failed_assertions) +
                            " failed assertions, aborted=" +
                            (result.aborted ? "true" : "false"));
    }
    return result;
}

Deployment deploy(const ExperimentContext& ctx, const std::filesystem::path& root,
                  std::vector<std::pair<std::string, std::string>> files) {
    Deployment::Options opts;
    opts.root = root;
    opts.svc_binary = ctx.svc_binary;
    opts.seed_file = ctx.cfg.seed_data;
    opts.files = std::move(files);
    return Deployment(opts);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> tree_sources(const engine::TargetTree& tree) {
    std::vector<std::pair<std::string, std::string>> files;
    files.reserve(tree.entries().size());
    for (const auto& entry : tree.entries()) {
        files.emplace_back(entry.file.rel_path, entry.file.source);
    }
    return files;
}

CoverageResult run_coverage(const ExperimentContext& ctx,
                            const std::vector<engine::InjectionPoint>& points,
                            const std::filesystem::path& work_dir) {
    support::remove_all(work_dir);
    support::ensure_dir(work_dir);

    {
        Deployment dep;
        try {
            dep = deploy(ctx, work_dir / "baseline", tree_sources(ctx.tree));
        } catch (const DeployError& e) {
            throw CampaignError(std::string("baseline deployment failed: ") + e.what());
        }
        gate_round(dep, ctx, "baseline");
    }

    auto instrumented = engine::instrument_coverage(ctx.tree, points);
    CoverageResult out;
    out.markers = instrumented.marker_count;

    auto probe_root = work_dir / "instrumented";
    {
        Deployment dep;
        try {
            dep = deploy(ctx, probe_root, instrumented.files);
        } catch (const DeployError& e) {
            throw CampaignError(std::string("instrumented deployment failed: ") + e.what());
        }
        gate_round(dep, ctx, "instrumented");
    }

    std::set<std::string> scanned;
    for (const auto& p : points) scanned.insert(p.id);

    std::set<std::string> covered;
    auto cov_dir = probe_root / "coverage";
    if (std::filesystem::exists(cov_dir)) {
        for (const auto& rel : support::list_files(cov_dir, ".jsonl")) {
            for (const auto& row : support::load_jsonl_file(cov_dir / rel)) {
                auto id = row.at("point").get<std::string>();
                if (scanned.count(id)) covered.insert(id);
            }
        }
    }
    out.covered.assign(covered.begin(), covered.end());
    return out;
}

}  // namespace faultline::orch
