// faultline: fault-injection campaigns against the minicloud testbed.
//
// Subcommands cover the whole pipeline: scan enumerates injection points,
// coverage finds which of them the workload reaches, campaign runs one
// experiment per covered point, analyze/report turn a campaign directory
// into CSV/DOT tables and a text summary, and demo runs a small seeded
// campaign end to end.

#include <CLI11.hpp>

#include "faultline/analyze/dataset.hpp"
#include "faultline/analyze/report.hpp"
#include "faultline/engine/scanner.hpp"
#include "faultline/orch/campaign.hpp"
#include "faultline/orch/coverage.hpp"
#include "faultline/support/fs.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

namespace {

namespace fl = faultline;

std::filesystem::path self_dir() {
    std::error_code ec;
    auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
    if (ec) return std::filesystem::current_path();
    return exe.parent_path();
}

fl::orch::CampaignConfig load_config(const std::string& path) {
    return fl::orch::CampaignConfig::load(path);
}

std::vector<std::string> load_point_ids(const std::string& file) {
    std::vector<std::string> ids;
    std::istringstream in(fl::support::read_file(file));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '{') {
            ids.push_back(fl::support::json::parse(line).at("id").get<std::string>());
        } else {
            ids.push_back(line);
        }
    }
    return ids;
}

void print_progress(const fl::orch::ExperimentOutcome& outcome, int done, int total) {
    std::cout << "[" << done << "/" << total << "] " << outcome.point_id << ": "
              << outcome.status;
    if (!outcome.invalid_reason.empty()) std::cout << " (" << outcome.invalid_reason << ")";
    std::cout << "\n";
}

void print_campaign_summary(const fl::orch::CampaignSummary& s) {
    std::cout << "scanned " << s.points << " points in " << s.files_scanned << " files; "
              << s.covered << " covered; ran " << s.selected << " experiments ("
              << s.completed << " completed, " << s.invalid << " invalid)\n";
}

int cmd_scan(const std::string& config, const std::string& out) {
    auto cfg = load_config(config);
    auto tree = fl::engine::TargetTree::load(cfg.scan);
    auto scan = fl::engine::scan_target(tree, cfg.scan);
    if (!out.empty()) {
        std::vector<fl::support::json> rows;
        rows.reserve(scan.points.size());
        for (const auto& p : scan.points) rows.push_back(p.to_json());
        fl::support::save_jsonl_file(out, rows);
    }
    std::cout << "scanned " << scan.files_scanned << " files, " << scan.points.size()
              << " injection points\n";
    return 0;
}

int cmd_coverage(const std::string& config, const std::string& out,
                 const std::filesystem::path& svc_binary, double budget) {
    auto cfg = load_config(config);
    auto tree = fl::engine::TargetTree::load(cfg.scan);
    auto scan = fl::engine::scan_target(tree, cfg.scan);
    fl::orch::ExperimentContext ctx{cfg, tree, svc_binary,
                                    budget > 0 ? budget : cfg.round_budget_secs};
    auto coverage = fl::orch::run_coverage(ctx, scan.points, std::filesystem::path(out) / "gate");
    fl::support::json covered = fl::support::json::array();
    for (const auto& id : coverage.covered) covered.push_back(id);
    fl::support::ensure_dir(out);
    fl::support::save_json_file(std::filesystem::path(out) / "covered.json", covered);
    std::cout << coverage.covered.size() << " of " << scan.points.size()
              << " points covered by the workload (" << coverage.markers << " probes)\n";
    return 0;
}

int cmd_campaign(const std::string& config, fl::orch::CampaignOptions opts, bool resume) {
    auto cfg = load_config(config);
    opts.progress = print_progress;
    auto summary = resume ? fl::orch::resume_campaign(cfg, opts)
                          : fl::orch::run_campaign(cfg, opts);
    print_campaign_summary(summary);
    return 0;
}

int cmd_analyze(const std::string& out, bool print_summary) {
    auto ds = fl::analyze::Dataset::load(out);
    auto bundle = fl::analyze::write_reports(ds, std::filesystem::path(out) / "reports");
    if (print_summary) {
        if (const auto* text = bundle.find("summary.txt")) std::cout << *text;
    } else {
        std::cout << "wrote " << bundle.files.size() << " report files to "
                  << (std::filesystem::path(out) / "reports").string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fault-injection campaigns against the minicloud testbed"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::string points_file;
    uint64_t seed = 0;
    int jobs = 1;
    double timeout_secs = 0;
    std::string svc_binary = (self_dir() / "minicloud-svc").string();

    auto add_common = [&](CLI::App* cmd, bool needs_config, bool needs_out) {
        auto* copt = cmd->add_option("--config", config, "campaign configuration file");
        if (needs_config) copt->required();
        auto* oopt = cmd->add_option("--out", out, "output directory");
        if (needs_out) oopt->required();
    };

    auto* scan_cmd = app.add_subcommand("scan", "enumerate injection points");
    scan_cmd->add_option("--config", config, "campaign configuration file")->required();
    scan_cmd->add_option("--out", out, "write points as jsonl to this file");

    auto* cov_cmd = app.add_subcommand("coverage", "find workload-covered points");
    add_common(cov_cmd, true, true);
    cov_cmd->add_option("--svc-binary", svc_binary, "service executable");
    cov_cmd->add_option("--timeout-secs", timeout_secs, "per-round wall budget");

    auto* camp_cmd = app.add_subcommand("campaign", "run one experiment per covered point");
    add_common(camp_cmd, true, true);
    camp_cmd->add_option("--seed", seed, "selection seed");
    camp_cmd->add_option("--jobs", jobs, "parallel experiments");
    camp_cmd->add_option("--points", points_file, "restrict to point ids from this file");
    camp_cmd->add_option("--svc-binary", svc_binary, "service executable");
    camp_cmd->add_option("--timeout-secs", timeout_secs, "per-round wall budget");

    auto* resume_cmd = app.add_subcommand("resume", "continue an interrupted campaign");
    add_common(resume_cmd, true, true);
    resume_cmd->add_option("--jobs", jobs, "parallel experiments");
    resume_cmd->add_option("--svc-binary", svc_binary, "service executable");
    resume_cmd->add_option("--timeout-secs", timeout_secs, "per-round wall budget");

    auto* an_cmd = app.add_subcommand("analyze", "write report tables for a campaign");
    an_cmd->add_option("--out", out, "campaign output directory")->required();

    auto* rep_cmd = app.add_subcommand("report", "print the campaign summary");
    rep_cmd->add_option("--out", out, "campaign output directory")->required();

    auto* demo_cmd = app.add_subcommand("demo", "seeded 20-point campaign plus reports");
    add_common(demo_cmd, true, true);
    demo_cmd->add_option("--seed", seed, "selection seed");
    demo_cmd->add_option("--jobs", jobs, "parallel experiments");
    demo_cmd->add_option("--svc-binary", svc_binary, "service executable");
    demo_cmd->add_option("--timeout-secs", timeout_secs, "per-round wall budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        fl::orch::CampaignOptions opts;
        opts.out = out;
        opts.svc_binary = svc_binary;
        opts.seed = seed;
        opts.jobs = jobs;
        opts.round_budget_secs = timeout_secs;
        if (!points_file.empty()) opts.only_points = load_point_ids(points_file);

        if (scan_cmd->parsed()) return cmd_scan(config, out);
        if (cov_cmd->parsed()) return cmd_coverage(config, out, svc_binary, timeout_secs);
        if (camp_cmd->parsed()) return cmd_campaign(config, opts, false);
        if (resume_cmd->parsed()) return cmd_campaign(config, opts, true);
        if (an_cmd->parsed()) return cmd_analyze(out, false);
        if (rep_cmd->parsed()) return cmd_analyze(out, true);
        if (demo_cmd->parsed()) {
            opts.max_points = 20;
            int rc = cmd_campaign(config, opts, false);
            if (rc != 0) return rc;
            return cmd_analyze(out, true);
        }
    } catch (const fl::cloud::RpcError& e) {
        std::cerr << "faultline: rpc failure: " << e.code << ": " << e.message << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "faultline: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
