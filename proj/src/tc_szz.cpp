// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/tc_szz.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "szz/errors.hpp"
#include "szz/util.hpp"

namespace szz {

double line_similarity(std::string_view a, std::string_view b) {
    const std::string ca = collapse_whitespace(a);
    const std::string cb = collapse_whitespace(b);
    if (ca.empty() && cb.empty()) return 1.0;
    const std::size_t longest = std::max(ca.size(), cb.size());
    const std::size_t dist = edit_distance(ca, cb);
    return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

std::string chain_role_name(ChainRole role) {
    switch (role) {
        case ChainRole::Previous: return "previous";
        case ChainRole::Descendant: return "descendant";
        case ChainRole::Initial: return "initial";
    }
    return "?";
}

std::vector<std::string> TraceChain::commit_ids() const {
    std::vector<std::string> out;
    out.reserve(hops.size());
    for (const auto& h : hops) out.push_back(h.commit_id);
    return out;
}

namespace {

struct Continuation {
    const FileDiff* file = nullptr;
    const LineChange* removed = nullptr;
};

// Among the removed lines of the file the blamed commit introduced the
// tracked line into, pick the best continuation candidate.
Continuation pick_continuation(const DiffSet& diff, const std::string& origin_path,
                               int origin_line, const std::string& tracked,
                               double threshold) {
    Continuation best;
    double best_sim = -1.0;
    int best_distance = 0;
    for (const auto& f : diff.files) {
        if (f.new_path != origin_path) continue;
        for (const auto& h : f.hunks) {
            for (const auto& r : h.removed) {
                const double sim = line_similarity(tracked, r.content);
                const int distance = std::abs(r.number - origin_line);
                const bool better =
                    sim > best_sim ||
                    (sim == best_sim &&
                     (distance < best_distance ||
                      (distance == best_distance && best.removed &&
                       r.number < best.removed->number)));
                if (better) {
                    best_sim = sim;
                    best_distance = distance;
                    best.removed = &r;
                    best.file = &f;
                }
            }
        }
    }
    if (best_sim < threshold) return {};
    return best;
}

}  // namespace

TraceChain trace_line(const RepoHandle& repo, const CommitRef& fix, const LineChange& line,
                      const TcOptions& options) {
    {
        const auto removed = removed_lines(repo, fix);
        if (std::find(removed.begin(), removed.end(), line) == removed.end())
            throw LineNotRemovedByFix("line '" + line.content + "' (" + line.file + ":" +
                                      std::to_string(line.number) +
                                      ") is not removed by " + fix.id);
    }

    TraceChain chain;
    chain.fix_id = fix.id;
    chain.line = line;

    CommitRef at = fix;
    std::string file = line.file;
    int lineno = line.number;
    std::set<std::tuple<std::string, std::string, int>> visited;

    while (options.max_depth < 0 ||
           chain.hops.size() < static_cast<std::size_t>(options.max_depth)) {
        BlameEntry blame;
        try {
            blame = repo.blame_line(at, file, lineno);
        } catch (const Error& e) {
            if (chain.hops.empty()) throw;
            log_warn("trace stopped at " + at.id + ":" + file + ":" + std::to_string(lineno) +
                     " (" + e.what() + ")");
            break;
        }
        if (!visited.insert({blame.origin.id, blame.origin_path, blame.origin_line}).second)
            break;  // revisited state; stop before looping
        chain.hops.push_back(ChainHop{blame.origin.id, ChainRole::Descendant, blame.content});

        if (blame.origin.parent_count == 0) break;  // root commit

        const auto diff = repo.commit_diff(blame.origin);
        const Continuation next = pick_continuation(*diff, blame.origin_path, blame.origin_line,
                                                    blame.content, options.similarity_threshold);
        if (!next.removed) break;  // the line was added fresh here

        at = blame.origin;
        file = next.file->old_path;
        lineno = next.removed->number;
    }

    if (!chain.hops.empty()) {
        if (chain.hops.size() == 1) {
            chain.hops.front().role = ChainRole::Initial;
        } else {
            chain.hops.front().role = ChainRole::Previous;
            chain.hops.back().role = ChainRole::Initial;
        }
    }
    return chain;
}

TcResult tcszz(const RepoHandle& repo, const CommitRef& fix, const TcOptions& options) {
    TcResult result;
    result.fix_id = fix.id;
    for (const auto& line : removed_lines(repo, fix)) {
        try {
            TraceChain chain = trace_line(repo, fix, line, options);
            if (!chain.hops.empty()) result.chains.push_back(std::move(chain));
        } catch (const Error& e) {
            log_warn("trace failed for " + fix.id + ":" + line.file + ":" +
                     std::to_string(line.number) + " (" + e.what() + ")");
        }
    }
    return result;
}

Prediction TcResult::to_prediction(const TcModeSpec& mode) const {
    Prediction p;
    p.fix_id = fix_id;
    p.algorithm = Algo::TC;
    for (const auto& chain : chains) {
        std::size_t take = chain.hops.size();
        if (mode.mode == TcMode::CustomBlame && mode.blame_count >= 0)
            take = std::min<std::size_t>(take, static_cast<std::size_t>(mode.blame_count));
        for (std::size_t i = 0; i < take; ++i) p.inducing.push_back(chain.hops[i].commit_id);
        if (!chain.hops.empty())
            p.per_line.emplace_back(chain.line, chain.hops.front().commit_id);
    }
    std::sort(p.inducing.begin(), p.inducing.end());
    p.inducing.erase(std::unique(p.inducing.begin(), p.inducing.end()), p.inducing.end());
    return p;
}

std::vector<std::string> TcResult::chronological_ids() const {
    std::vector<std::string> out;
    for (const auto& chain : chains)
        for (const auto& hop : chain.hops) out.push_back(hop.commit_id);
    return out;
}

Prediction tcszz_predict(const RepoHandle& repo, const CommitRef& fix, const TcModeSpec& mode,
                         const TcOptions& options) {
    return tcszz(repo, fix, options).to_prediction(mode);
}

}  // namespace szz
