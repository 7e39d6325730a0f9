// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
//
// Compares the serial reference path (workers=1) against the OpenMP-parallel
// path on generated repositories, and checks that both produce identical
// predictions before reporting timings.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "szz/fixture_forge.hpp"
#include "szz/git_facade.hpp"
#include "szz/parallel.hpp"
#include "szz/szz_suite.hpp"
#include "szz/tc_szz.hpp"

namespace {

struct Workload {
    std::filesystem::path repo_path;
    std::vector<std::string> fix_ids;
};

// Opens a fresh handle so each pass starts with cold caches.
std::vector<szz::Prediction> run_all(const Workload& w, szz::Algo algo, int workers) {
    const szz::RepoHandle repo = szz::RepoHandle::open(w.repo_path);
    std::vector<szz::Prediction> out(w.fix_ids.size());
    szz::parallel_for(w.fix_ids.size(), workers, [&](std::size_t i) {
        out[i] = szz::run_algo(repo, repo.commit(w.fix_ids[i]), algo);
    });
    return out;
}

bool equal(const std::vector<szz::Prediction>& a, const std::vector<szz::Prediction>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].fix_id != b[i].fix_id || a[i].inducing != b[i].inducing) return false;
    return true;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"szz_bench - serial vs parallel benchmark"};
    int repos = 6;
    int workers = szz::default_worker_count();
    std::uint64_t seed = 20260101;
    std::string keep_dir;
    app.add_option("--repos", repos, "number of generated repositories");
    app.add_option("--workers", workers, "parallel worker count");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--keep", keep_dir, "keep fixtures under this directory");
    CLI11_PARSE(app, argc, argv);

    const std::filesystem::path base =
        keep_dir.empty() ? std::filesystem::temp_directory_path() /
                               ("szz_bench_" + std::to_string(::getpid()))
                         : std::filesystem::path(keep_dir);

    std::vector<Workload> workloads;
    std::size_t total_fixes = 0;
    for (int r = 0; r < repos; ++r) {
        szz::RandomScriptOptions opts;
        opts.min_commits = 12;
        opts.max_commits = 25;
        const auto script = szz::random_fixture_script(seed + static_cast<std::uint64_t>(r), opts);
        const auto map = szz::build_fixture(script, base / ("repo" + std::to_string(r)));
        Workload w{map.repo_path, {}};
        for (std::size_t s = 1; s < script.steps.size(); ++s)
            w.fix_ids.push_back(map.id(script.steps[s].label));
        total_fixes += w.fix_ids.size();
        workloads.push_back(std::move(w));
    }
    std::printf("benchmarking %d repos, %zu fixes, %d workers\n", repos, total_fixes, workers);
    std::printf("%-5s %12s %12s %9s %s\n", "algo", "serial[s]", "parallel[s]", "speedup",
                "identical");

    for (szz::Algo algo : {szz::Algo::B, szz::Algo::AG, szz::Algo::MA, szz::Algo::TC}) {
        // serial reference first, on cold caches per workload ordering
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<std::vector<szz::Prediction>> serial;
        for (const auto& w : workloads) serial.push_back(run_all(w, algo, 1));
        const double serial_s = seconds_since(t0);

        const auto t1 = std::chrono::steady_clock::now();
        std::vector<std::vector<szz::Prediction>> parallel;
        for (const auto& w : workloads) parallel.push_back(run_all(w, algo, workers));
        const double parallel_s = seconds_since(t1);

        bool identical = true;
        for (std::size_t i = 0; i < workloads.size(); ++i)
            identical = identical && equal(serial[i], parallel[i]);

        std::printf("%-5s %12.3f %12.3f %8.2fx %s\n", szz::algo_name(algo).c_str(), serial_s,
                    parallel_s, parallel_s > 0 ? serial_s / parallel_s : 0.0,
                    identical ? "yes" : "NO");
        if (!identical) return 1;
    }

    if (keep_dir.empty()) std::filesystem::remove_all(base);
    return 0;
}
