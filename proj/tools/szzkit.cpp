// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: mine -> run -> classify -> report, plus fixture
// building. Stages communicate through files in the output directory, so a
// long evaluation can be resumed or inspected between steps.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "szz/errors.hpp"
#include "szz/pipeline.hpp"

namespace {

struct CliOverrides {
    std::string config_file;
    std::string repo, until, algos, tc_mode, out;
    int blame_count = 0;
    bool blame_count_set = false;
    double similarity = 0.0;
    bool similarity_set = false;
    int workers = -1;
    bool emit_prompts = false;
    bool attribution = false;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_file, "flat key=value config file");
    cmd->add_option("--repo", o.repo, "path to the git repository");
    cmd->add_option("--until", o.until, "revision bounding the analysis (default HEAD)");
    cmd->add_option("--algos", o.algos, "comma-separated subset of B,AG,L,R,MA,PYD,TC");
    cmd->add_option("--tc-mode", o.tc_mode, "TC mode: chronological|unique|custom");
    cmd->add_option("--blame-count", o.blame_count,
                    "blame invocations per line for TC custom mode; -1 traces to the initial commit")
        ->each([&o](const std::string&) { o.blame_count_set = true; });
    cmd->add_option("--similarity-threshold", o.similarity,
                    "minimum line similarity for continuing a trace")
        ->each([&o](const std::string&) { o.similarity_set = true; });
    cmd->add_option("--workers", o.workers, "parallel workers (default: logical CPUs)");
    cmd->add_option("--out", o.out, "output directory for stage artifacts");
    cmd->add_flag("--emit-prompts", o.emit_prompts, "write LLM prompt files while classifying");
    cmd->add_flag("--attribution", o.attribution, "write per-line attribution JSON");
}

szz::RunConfig build_config(const CliOverrides& o) {
    szz::RunConfig config;
    if (!o.config_file.empty()) config = szz::RunConfig::from_file(o.config_file);
    // flags win over file values
    if (!o.repo.empty()) config.set("repo", o.repo);
    if (!o.until.empty()) config.set("until", o.until);
    if (!o.algos.empty()) config.set("algos", o.algos);
    if (!o.tc_mode.empty()) config.set("tc_mode", o.tc_mode);
    if (o.blame_count_set) config.set("blame_count", std::to_string(o.blame_count));
    if (o.similarity_set) config.set("similarity_threshold", std::to_string(o.similarity));
    if (o.workers >= 0) config.set("workers", std::to_string(o.workers));
    if (!o.out.empty()) config.set("out", o.out);
    if (o.emit_prompts) config.set("emit_prompts", "1");
    if (o.attribution) config.set("attribution", "1");
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"szzkit - SZZ algorithm evaluation toolkit for git histories"};
    app.require_subcommand(1);

    CliOverrides o;
    auto* mine = app.add_subcommand("mine", "extract the bug-fix/bug-inducing dataset");
    auto* run = app.add_subcommand("run", "run the selected SZZ algorithms over the dataset");
    auto* classify = app.add_subcommand("classify", "label ghosts, outcomes and failure modes");
    auto* report = app.add_subcommand("report", "compute the evaluation report");
    add_common_flags(mine, o);
    add_common_flags(run, o);
    add_common_flags(classify, o);
    add_common_flags(report, o);

    auto* fixture = app.add_subcommand("fixture", "fixture repository tools");
    std::string script_path, fixture_out;
    auto* fixture_build = fixture->add_subcommand("build", "build a repository from a script");
    fixture_build->add_option("--script", script_path, "fixture script file")->required();
    fixture_build->add_option("--out", fixture_out, "target directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fixture_build->parsed()) return szz::cmd_fixture_build(script_path, fixture_out);
        const szz::RunConfig config = build_config(o);
        if (mine->parsed()) return szz::cmd_mine(config);
        if (run->parsed()) return szz::cmd_run(config);
        if (classify->parsed()) return szz::cmd_classify(config);
        if (report->parsed()) return szz::cmd_report(config);
    } catch (const szz::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
