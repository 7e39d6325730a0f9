// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <set>

#include "szz/errors.hpp"
#include "szz/parallel.hpp"
#include "szz/source_scan.hpp"
#include "szz/util.hpp"

namespace szz {

std::string ghost_kind_name(GhostKind k) {
    return k == GhostKind::RemoveMappingGhost ? "RemoveMappingGhost" : "AddMappingGhost";
}

std::string outcome_kind_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Success: return "Success";
        case OutcomeKind::PartialSuccess: return "PartialSuccess";
        case OutcomeKind::RemoveMG: return "RemoveMG";
        case OutcomeKind::AddMG: return "AddMG";
        case OutcomeKind::FailureWithoutMG: return "FailureWithoutMG";
    }
    return "?";
}

std::string failure_mode_name(FailureMode m) {
    switch (m) {
        case FailureMode::LineChange: return "LineChange";
        case FailureMode::FunctionBlame: return "FunctionBlame";
        case FailureMode::FunctionLog: return "FunctionLog";
        case FailureMode::WithinFile: return "WithinFile";
        case FailureMode::CrossFile: return "CrossFile";
    }
    return "?";
}

std::optional<FailureMode> failure_mode_from_name(const std::string& name) {
    for (FailureMode m : {FailureMode::LineChange, FailureMode::FunctionBlame,
                          FailureMode::FunctionLog, FailureMode::WithinFile,
                          FailureMode::CrossFile})
        if (failure_mode_name(m) == name) return m;
    return std::nullopt;
}

std::optional<GhostKind> classify_ghost(const RepoHandle& repo, const CommitRef& c,
                                        GhostSide side) {
    const auto diff = repo.commit_diff(c);
    const int removed = diff->removed_count();
    const int added = diff->added_count();
    if (side == GhostSide::AsFix) {
        if (removed == 0 && added >= 1) return GhostKind::RemoveMappingGhost;
    } else {
        if (added == 0 && removed >= 1) return GhostKind::AddMappingGhost;
    }
    return std::nullopt;
}

double GhostFrequencies::rmg_rate_over_fixes() const {
    return total_fixes == 0 ? 0.0 : static_cast<double>(rmg_fixes) / total_fixes;
}
double GhostFrequencies::amg_rate_over_all_commits() const {
    return total_commits == 0 ? 0.0 : static_cast<double>(amg_commits) / total_commits;
}
double GhostFrequencies::amg_rate_over_inducers() const {
    return total_inducer_instances == 0
               ? 0.0
               : static_cast<double>(amg_inducer_instances) / total_inducer_instances;
}

GhostFrequencies ghost_frequencies(const RepoHandle& repo, const std::vector<BugFixLink>& dataset,
                                   int workers) {
    GhostFrequencies freq;
    freq.total_fixes = static_cast<long>(dataset.size());

    const auto commits = repo.list_commits(repo.head());
    freq.total_commits = static_cast<long>(commits.size());
    std::atomic<long> amg_commits{0};
    parallel_for(commits.size(), workers, [&](std::size_t i) {
        if (classify_ghost(repo, commits[i], GhostSide::AsInducer)) ++amg_commits;
    });
    freq.amg_commits = amg_commits.load();

    std::vector<char> fix_is_rmg(dataset.size(), 0);
    std::vector<long> amg_per_fix(dataset.size(), 0);
    std::vector<char> all_amg(dataset.size(), 0);
    parallel_for(dataset.size(), workers, [&](std::size_t i) {
        const BugFixLink& link = dataset[i];
        fix_is_rmg[i] =
            classify_ghost(repo, link.fixing, GhostSide::AsFix).has_value() ? 1 : 0;
        bool all = !link.inducing.empty();
        long amg = 0;
        for (const auto& id : link.inducing) {
            if (classify_ghost(repo, repo.commit(id), GhostSide::AsInducer))
                ++amg;
            else
                all = false;
        }
        amg_per_fix[i] = amg;
        all_amg[i] = all ? 1 : 0;
    });
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        freq.rmg_fixes += fix_is_rmg[i];
        freq.amg_inducer_instances += amg_per_fix[i];
        freq.total_inducer_instances += static_cast<long>(dataset[i].inducing.size());
        if (all_amg[i] && !fix_is_rmg[i]) ++freq.fixes_failing_from_amg;
    }
    return freq;
}

OutcomeCategory categorize_outcome(const RepoHandle& repo, const BugFixLink& truth,
                                   const Prediction& predicted) {
    if (truth.fixing.id != predicted.fix_id)
        throw MismatchedFix("truth is for " + truth.fixing.id + ", prediction for " +
                            predicted.fix_id);

    std::size_t hit = 0;
    for (const auto& id : truth.inducing)
        if (predicted.contains(id)) ++hit;

    OutcomeCategory out;
    if (!truth.inducing.empty() && hit == truth.inducing.size()) {
        out.category = OutcomeKind::Success;
    } else if (hit > 0) {
        out.category = OutcomeKind::PartialSuccess;
    } else if (classify_ghost(repo, truth.fixing, GhostSide::AsFix)) {
        out.category = OutcomeKind::RemoveMG;
    } else {
        bool all_amg = !truth.inducing.empty();
        for (const auto& id : truth.inducing)
            if (!classify_ghost(repo, repo.commit(id), GhostSide::AsInducer)) {
                all_amg = false;
                break;
            }
        out.category = all_amg ? OutcomeKind::AddMG : OutcomeKind::FailureWithoutMG;
    }
    return out;
}

std::vector<FunctionSpan> extract_functions(const RepoHandle& repo, const CommitRef& c,
                                            const std::string& file) {
    const std::string content = repo.file_at(c, file);  // NoSuchPathAtCommit propagates
    const FunctionScan scan = scan_functions(content);
    std::vector<FunctionSpan> spans;
    if (!scan.balanced) {
        const int lines = static_cast<int>(split_lines(content).size());
        spans.push_back(FunctionSpan{file, file, 1, std::max(1, lines), c.id});
        return spans;
    }
    spans.reserve(scan.functions.size());
    for (const auto& f : scan.functions)
        spans.push_back(FunctionSpan{file, f.name, f.start_line, f.end_line, c.id});
    return spans;
}

namespace {

// Function spans at the fix's first parent that enclose at least one removed
// line of the fix.
std::vector<FunctionSpan> enclosing_spans(const RepoHandle& repo, const CommitRef& fix) {
    const auto parents = repo.parent_ids(fix);
    if (parents.empty()) return {};
    const CommitRef parent = repo.commit(parents[0]);

    std::map<std::string, std::vector<int>> lines_by_file;
    for (const auto& line : removed_lines(repo, fix))
        lines_by_file[line.file].push_back(line.number);

    std::vector<FunctionSpan> out;
    for (const auto& [file, lines] : lines_by_file) {
        std::vector<FunctionSpan> spans;
        try {
            spans = extract_functions(repo, parent, file);
        } catch (const Error&) {
            continue;
        }
        for (const auto& span : spans) {
            const bool covers = std::any_of(lines.begin(), lines.end(), [&](int n) {
                return n >= span.start_line && n <= span.end_line;
            });
            if (covers) out.push_back(span);
        }
    }
    return out;
}

bool any_inducer(const std::vector<CommitRef>& commits, const BugFixLink& truth) {
    return std::any_of(commits.begin(), commits.end(),
                       [&](const CommitRef& c) { return truth.has_inducer(c.id); });
}

}  // namespace

FailureProbe probe_failure_rungs(const RepoHandle& repo, const BugFixLink& truth,
                                 const TcOptions& options) {
    FailureProbe probe;
    const CommitRef& fix = truth.fixing;

    // (1) somewhere in the removed lines' change history
    const TcResult traced = tcszz(repo, fix, options);
    for (const auto& chain : traced.chains) {
        for (const auto& hop : chain.hops)
            if (truth.has_inducer(hop.commit_id)) probe.line_change = true;
    }

    // (2) one blame over every line of the enclosing functions
    const auto spans = enclosing_spans(repo, fix);
    for (const auto& span : spans) {
        if (probe.function_blame) break;
        std::shared_ptr<const std::vector<BlameEntry>> entries;
        try {
            entries = repo.blame_file(span.at_id, span.file);
        } catch (const Error&) {
            continue;
        }
        for (int n = span.start_line; n <= span.end_line; ++n) {
            if (n < 1 || static_cast<std::size_t>(n) > entries->size()) break;
            if (truth.has_inducer((*entries)[static_cast<std::size_t>(n - 1)].origin.id)) {
                probe.function_blame = true;
                break;
            }
        }
    }

    // (3) range-log over the same spans
    for (const auto& span : spans) {
        if (probe.function_log) break;
        try {
            const CommitRef parent = repo.commit(span.at_id);
            if (any_inducer(repo.log_line_range(span.file, span.start_line, span.end_line, parent),
                            truth))
                probe.function_log = true;
        } catch (const Error&) {
        }
    }

    // (4) history of any file the fix touched
    std::set<std::string> paths;
    for (const auto& f : repo.commit_diff(fix)->files) {
        if (!f.old_path.empty()) paths.insert(f.old_path);
        if (!f.new_path.empty()) paths.insert(f.new_path);
    }
    for (const auto& path : paths) {
        if (probe.within_file) break;
        try {
            if (any_inducer(repo.file_history(path, fix), truth)) probe.within_file = true;
        } catch (const Error&) {
        }
    }
    return probe;
}

FailureMode classify_failure(const RepoHandle& repo, const BugFixLink& truth,
                             const TcOptions& options) {
    const FailureProbe probe = probe_failure_rungs(repo, truth, options);
    if (probe.line_change) return FailureMode::LineChange;
    if (probe.function_blame) return FailureMode::FunctionBlame;
    if (probe.function_log) return FailureMode::FunctionLog;
    if (probe.within_file) return FailureMode::WithinFile;
    return FailureMode::CrossFile;
}

std::string scrub_commit_message(const std::string& message,
                                 const std::vector<std::string>& inducing_ids) {
    std::string out;
    for (const auto& line : split_lines(message)) {
        if (trim(line).substr(0, 6) == "Fixes:") continue;

        std::string kept;
        std::size_t i = 0;
        while (i < line.size()) {
            const auto is_hex = [](char c) {
                return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
            };
            if (!is_hex(line[i])) {
                kept.push_back(line[i++]);
                continue;
            }
            std::size_t j = i;
            while (j < line.size() && is_hex(line[j])) ++j;
            const std::string run = line.substr(i, j - i);
            const bool references_inducer =
                run.size() >= 7 && run.size() <= 40 &&
                std::any_of(inducing_ids.begin(), inducing_ids.end(), [&](const std::string& id) {
                    return id.find(run) != std::string::npos;
                });
            if (!references_inducer) kept += run;
            i = j;
        }
        out += kept;
        out.push_back('\n');
    }
    return out;
}

std::string emit_llm_prompt(FailureMode mode, const std::string& fix_message,
                            const PromptContext& context) {
    std::string message = fix_message;
    if (message.empty()) throw MissingContext("prompt needs the commit message");
    if (message.back() != '\n') message.push_back('\n');

    switch (mode) {
        case FailureMode::CrossFile:
            return message +
                   "Based on the above commit message of a bug-fixing commit, which file in the "
                   "Linux kernel could be causing this bug-fixing commit?\n";
        case FailureMode::WithinFile: {
            if (context.file.empty())
                throw MissingContext("within-file prompt needs the file name");
            if (context.function_names.empty())
                throw MissingContext("within-file prompt needs the function names");
            std::string names;
            for (const auto& n : context.function_names) names += n + "\n";
            return message +
                   "Based on the above commit message of a bug-fixing commit and function names "
                   "in file " +
                   context.file +
                   ", which function or functions could be causing this bug-fixing commit?\n" +
                   names;
        }
        case FailureMode::FunctionLog:
        case FailureMode::FunctionBlame: {
            if (context.function_code.empty())
                throw MissingContext("function prompt needs the function code");
            std::string code = context.function_code;
            if (code.back() != '\n') code.push_back('\n');
            return message +
                   "Based on the above commit message of a bug-fixing commit, please identify "
                   "the line or lines of code in the following code that could be causing this "
                   "bug-fixing commit:\n" +
                   code;
        }
        case FailureMode::LineChange:
            throw MissingContext("line-change failures are covered by the tracer; no prompt");
    }
    throw MissingContext("unknown failure mode");
}

}  // namespace szz
