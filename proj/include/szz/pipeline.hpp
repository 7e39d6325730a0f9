// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "szz/fixes_miner.hpp"
#include "szz/szz_suite.hpp"
#include "szz/tc_szz.hpp"

namespace szz {

// Stage exit codes, stable and documented in the README.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRepoError = 2;
inline constexpr int kExitWriteError = 3;
inline constexpr int kExitMissingDataset = 4;
inline constexpr int kExitMissingBPredictions = 5;
inline constexpr int kExitMissingInputs = 6;

struct RunConfig {
    std::filesystem::path repo_path;
    std::string until_rev = "HEAD";
    std::vector<Algo> algorithms = {Algo::B,  Algo::AG,  Algo::L, Algo::R,
                                    Algo::MA, Algo::PYD, Algo::TC};
    TcMode tc_mode = TcMode::UniqueCommits;
    int blame_count = -1;
    double similarity_threshold = 0.75;
    std::filesystem::path output_dir = "szz-out";
    int worker_count = 0;  // 0 = logical CPU count
    bool emit_prompts = false;
    bool attribution = false;

    // Flat key=value text; '#' comments. Unknown keys are rejected.
    static RunConfig from_file(const std::filesystem::path& path);
    void set(const std::string& key, const std::string& value);
    void validate() const;  // throws Error on bad values

    int effective_workers() const;
    TcOptions tc_options() const;
    TcModeSpec tc_mode_spec() const;
    std::string config_hash() const;  // over the canonical key=value form
    std::string serialize() const;
};

// Stage entry points; each returns a process exit code and communicates
// through files in config.output_dir.
int cmd_mine(const RunConfig& config);
int cmd_run(const RunConfig& config);
int cmd_classify(const RunConfig& config);
int cmd_report(const RunConfig& config);
int cmd_fixture_build(const std::filesystem::path& script_path,
                      const std::filesystem::path& out_dir);

// Stage artifact names within the output directory.
std::filesystem::path dataset_csv_path(const RunConfig&);
std::filesystem::path abnormal_csv_path(const RunConfig&);
std::filesystem::path common_ledger_path(const RunConfig&);
std::filesystem::path predictions_csv_path(const RunConfig&, Algo);
std::filesystem::path attribution_json_path(const RunConfig&, Algo);
std::filesystem::path tc_chains_path(const RunConfig&);
std::filesystem::path ghosts_csv_path(const RunConfig&);
std::filesystem::path classification_csv_path(const RunConfig&);
std::filesystem::path prompts_dir(const RunConfig&);
std::filesystem::path report_json_path(const RunConfig&);
std::filesystem::path table_csv_path(const RunConfig&);

// File-format helpers, shared by the stages and the tests.
void write_dataset_csv(const std::filesystem::path&, const std::vector<BugFixLink>&,
                       const std::string& config_hash);
std::vector<BugFixLink> read_dataset_csv(const std::filesystem::path&, const RepoHandle&);
void write_predictions_csv(const std::filesystem::path&, const std::vector<Prediction>&,
                           const std::string& config_hash);
std::vector<Prediction> read_predictions_csv(const std::filesystem::path&);

}  // namespace szz
