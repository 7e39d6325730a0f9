// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/szz_suite.hpp"

#include <algorithm>
#include <set>

#include "szz/errors.hpp"
#include "szz/source_scan.hpp"
#include "szz/tc_szz.hpp"
#include "szz/util.hpp"

namespace szz {

std::string algo_name(Algo a) {
    switch (a) {
        case Algo::B: return "B";
        case Algo::AG: return "AG";
        case Algo::L: return "L";
        case Algo::R: return "R";
        case Algo::MA: return "MA";
        case Algo::PYD: return "PYD";
        case Algo::TC: return "TC";
    }
    return "?";
}

std::optional<Algo> algo_from_name(const std::string& name) {
    static const std::map<std::string, Algo> table = {
        {"B", Algo::B},   {"AG", Algo::AG},   {"L", Algo::L},  {"R", Algo::R},
        {"MA", Algo::MA}, {"PYD", Algo::PYD}, {"TC", Algo::TC}};
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    auto it = table.find(upper);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

bool Prediction::contains(const std::string& id) const {
    return std::binary_search(inducing.begin(), inducing.end(), id);
}

std::vector<LineChange> removed_lines(const RepoHandle& repo, const CommitRef& fix) {
    return repo.commit_diff(fix)->removed_lines();
}

namespace {

void canonicalize(Prediction& p) {
    std::sort(p.inducing.begin(), p.inducing.end());
    p.inducing.erase(std::unique(p.inducing.begin(), p.inducing.end()), p.inducing.end());
}

// Lines the PyDriller-style filter keeps: neither blank nor comment-only,
// classified with the whole parent-side file in view.
std::vector<LineChange> filtered_removed_lines(const RepoHandle& repo, const CommitRef& fix) {
    const auto lines = removed_lines(repo, fix);
    std::vector<LineChange> kept;
    kept.reserve(lines.size());

    std::map<std::string, std::vector<LineClass>> classes_by_file;
    const auto parents = [&]() -> std::vector<std::string> {
        try {
            return repo.parent_ids(fix);
        } catch (const Error&) {
            return {};
        }
    }();

    for (const auto& line : lines) {
        auto it = classes_by_file.find(line.file);
        if (it == classes_by_file.end()) {
            std::vector<LineClass> classes;
            try {
                if (!parents.empty())
                    classes = classify_source_lines(repo.file_at(repo.commit(parents[0]), line.file));
            } catch (const Error&) {
                classes.clear();  // fall back to keeping the lines
            }
            it = classes_by_file.emplace(line.file, std::move(classes)).first;
        }
        const auto& classes = it->second;
        LineClass cls = LineClass::Code;
        if (line.number >= 1 && static_cast<std::size_t>(line.number) <= classes.size())
            cls = classes[static_cast<std::size_t>(line.number - 1)];
        if (cls == LineClass::Blank || cls == LineClass::CommentOnly) continue;
        kept.push_back(line);
    }
    return kept;
}

// Finds the added line of `diff` sitting at (path, line) on the child side,
// together with its positional partner on the removed side, if any.
struct AddedLookup {
    const LineChange* added = nullptr;
    const LineChange* paired_removed = nullptr;
    const FileDiff* file = nullptr;
};

AddedLookup find_added_line(const DiffSet& diff, const std::string& path, int line) {
    AddedLookup out;
    for (const auto& f : diff.files) {
        if (f.new_path != path) continue;
        for (const auto& h : f.hunks) {
            for (std::size_t i = 0; i < h.added.size(); ++i) {
                if (h.added[i].number != line) continue;
                out.added = &h.added[i];
                out.file = &f;
                if (i < h.removed.size()) out.paired_removed = &h.removed[i];
                return out;
            }
        }
    }
    return out;
}

bool comment_only_at(const RepoHandle& repo, const CommitRef& commit, const std::string& path,
                     int line) {
    try {
        const auto classes = classify_source_lines(repo.file_at(commit, path));
        if (line >= 1 && static_cast<std::size_t>(line) <= classes.size())
            return classes[static_cast<std::size_t>(line - 1)] == LineClass::CommentOnly;
    } catch (const Error&) {
    }
    return false;
}

constexpr int kStepPastDepthLimit = 64;

// Iterated re-blame: while the blamed commit's change to the tracked line is
// one the variant ignores (cosmetic churn, and for MA-SZZ meta-changes),
// step past it by blaming again at its parent.
BlameEntry step_past_ignored(const RepoHandle& repo, BlameEntry blame, bool skip_cosmetic,
                             bool skip_meta) {
    for (int depth = 0; depth < kStepPastDepthLimit; ++depth) {
        const CommitRef& origin = blame.origin;
        if (origin.parent_count == 0) return blame;  // initial commit

        if (skip_meta) {
            const auto diff = repo.commit_diff(origin);
            const bool meta = origin.is_merge() || diff->files.empty();
            if (meta) {
                // A meta-change did not alter the file against its first
                // parent, so the same coordinates are valid there.
                try {
                    blame = repo.blame_line(origin, blame.origin_path, blame.origin_line);
                    continue;
                } catch (const Error&) {
                    return blame;
                }
            }
        }

        if (skip_cosmetic) {
            const auto diff = repo.commit_diff(origin);
            const auto lookup = find_added_line(*diff, blame.origin_path, blame.origin_line);
            if (!lookup.added) return blame;
            const bool cosmetic =
                (lookup.paired_removed &&
                 whitespace_only_delta(lookup.paired_removed->content, lookup.added->content)) ||
                comment_only_at(repo, origin, blame.origin_path, blame.origin_line);
            if (!cosmetic || !lookup.paired_removed) return blame;
            try {
                blame = repo.blame_line(origin, lookup.file->old_path,
                                        lookup.paired_removed->number);
                continue;
            } catch (const Error&) {
                return blame;
            }
        }
        return blame;
    }
    log_warn("step-past depth limit hit at " + blame.origin.id + ":" + blame.origin_path + ":" +
             std::to_string(blame.origin_line));
    return blame;
}

Prediction blame_based(const RepoHandle& repo, const CommitRef& fix, Algo algo,
                       const std::vector<LineChange>& lines, bool skip_cosmetic, bool skip_meta) {
    Prediction p;
    p.fix_id = fix.id;
    p.algorithm = algo;
    for (const auto& line : lines) {
        BlameEntry blame;
        try {
            blame = repo.blame_line(fix, line.file, line.number);
        } catch (const Error& e) {
            log_warn("blame failed for " + fix.id + ":" + line.file + ":" +
                     std::to_string(line.number) + " (" + e.what() + ")");
            continue;
        }
        if (skip_cosmetic || skip_meta)
            blame = step_past_ignored(repo, blame, skip_cosmetic, skip_meta);
        p.per_line.emplace_back(line, blame.origin.id);
        p.inducing.push_back(blame.origin.id);
    }
    canonicalize(p);
    return p;
}

// Picks the single candidate by a strict ordering; ties resolve to the
// lexicographically smallest id.
template <typename Score>
Prediction pick_one(const RepoHandle& repo, Prediction from, Algo algo, Score&& score) {
    Prediction p;
    p.fix_id = from.fix_id;
    p.algorithm = algo;
    if (from.inducing.empty()) return p;
    std::string best = from.inducing.front();
    auto best_score = score(repo.commit(best));
    for (std::size_t i = 1; i < from.inducing.size(); ++i) {
        const auto s = score(repo.commit(from.inducing[i]));
        if (s > best_score) {  // ids are already ascending, so '>' keeps the smallest id on ties
            best_score = s;
            best = from.inducing[i];
        }
    }
    p.inducing = {best};
    return p;
}

}  // namespace

Prediction bszz(const RepoHandle& repo, const CommitRef& fix) {
    return blame_based(repo, fix, Algo::B, removed_lines(repo, fix), false, false);
}

Prediction szz_pyd(const RepoHandle& repo, const CommitRef& fix) {
    return blame_based(repo, fix, Algo::PYD, filtered_removed_lines(repo, fix), false, false);
}

Prediction agszz(const RepoHandle& repo, const CommitRef& fix) {
    return blame_based(repo, fix, Algo::AG, filtered_removed_lines(repo, fix), true, false);
}

Prediction maszz(const RepoHandle& repo, const CommitRef& fix) {
    return blame_based(repo, fix, Algo::MA, filtered_removed_lines(repo, fix), true, true);
}

Prediction lszz(const RepoHandle& repo, const CommitRef& fix) {
    // Most changed lines, counted over the candidate's whole diff.
    return pick_one(repo, agszz(repo, fix), Algo::L, [&](const CommitRef& c) {
        const auto diff = repo.commit_diff(c);
        return diff->removed_count() + diff->added_count();
    });
}

Prediction rszz(const RepoHandle& repo, const CommitRef& fix) {
    return pick_one(repo, agszz(repo, fix), Algo::R,
                    [](const CommitRef& c) { return c.timestamp; });
}

Prediction run_algo(const RepoHandle& repo, const CommitRef& fix, Algo algo) {
    switch (algo) {
        case Algo::B: return bszz(repo, fix);
        case Algo::AG: return agszz(repo, fix);
        case Algo::L: return lszz(repo, fix);
        case Algo::R: return rszz(repo, fix);
        case Algo::MA: return maszz(repo, fix);
        case Algo::PYD: return szz_pyd(repo, fix);
        case Algo::TC: return tcszz_predict(repo, fix, TcModeSpec{TcMode::UniqueCommits, -1});
    }
    throw Error("unreachable algorithm tag");
}

}  // namespace szz
