// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/fixes_miner.hpp"

#include <algorithm>
#include <set>

#include "szz/errors.hpp"
#include "szz/parallel.hpp"
#include "szz/util.hpp"

namespace szz {

std::string abnormal_category_name(AbnormalCategory c) {
    switch (c) {
        case AbnormalCategory::PartialCommitId: return "PartialCommitId";
        case AbnormalCategory::NotInRepository: return "NotInRepository";
        case AbnormalCategory::Ambiguous: return "Ambiguous";
    }
    return "?";
}

bool BugFixLink::has_inducer(const std::string& id) const {
    return std::binary_search(inducing.begin(), inducing.end(), id);
}

namespace {

bool is_hex_digit(char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); }

// First maximal hex run of length >= 7 (truncated to 40), scanning left to
// right; shorter runs are skipped to prevent ambiguity.
std::optional<std::string> first_partial_id(std::string_view payload) {
    std::size_t i = 0;
    while (i < payload.size()) {
        if (!is_hex_digit(payload[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < payload.size() && is_hex_digit(payload[j])) ++j;
        if (j - i >= 7) return std::string(payload.substr(i, std::min<std::size_t>(j - i, 40)));
        i = j;
    }
    return std::nullopt;
}

// The Linux trailer format quotes the inducing commit's subject: ("...").
std::optional<std::string> quoted_subject(std::string_view payload) {
    const auto open = payload.find("(\"");
    const auto close = payload.rfind("\")");
    if (open == std::string_view::npos || close == std::string_view::npos || close <= open + 1)
        return std::nullopt;
    return std::string(payload.substr(open + 2, close - open - 2));
}

std::string partial_subcause(std::string_view payload) {
    if (payload.find("://") != std::string_view::npos) return "url";
    for (std::size_t i = 0; i < payload.size();) {
        if (!is_hex_digit(payload[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < payload.size() && is_hex_digit(payload[j])) ++j;
        if (j - i >= 1 && j - i < 7) return "short-hex";
        i = j;
    }
    return "no-id";
}

}  // namespace

std::vector<RawFixesRef> extract_fixes_annotations(const std::string& message) {
    std::vector<RawFixesRef> refs;
    for (const auto& line : split_lines(message)) {
        const std::string_view stripped = trim(line);
        // first non-blank token must be exactly `Fixes:` (case-sensitive)
        if (stripped.substr(0, 6) != "Fixes:") continue;
        if (stripped.size() > 6 && stripped[6] != ' ' && stripped[6] != '\t') continue;
        const std::string_view payload = trim(stripped.substr(6));

        RawFixesRef ref;
        ref.raw_line = std::string(stripped);
        ref.partial = first_partial_id(payload);
        ref.trailer_subject = quoted_subject(payload);
        refs.push_back(std::move(ref));
    }
    return refs;
}

LinkOutcome link_bug_inducing(const RepoHandle& repo, const RawFixesRef& ref) {
    LinkOutcome out;
    if (!ref.partial) {
        std::string_view payload = ref.raw_line;
        payload.remove_prefix(std::min<std::size_t>(6, payload.size()));
        out.abnormal = AbnormalRecord{ref.fixing_id, ref.raw_line,
                                      AbnormalCategory::PartialCommitId,
                                      partial_subcause(trim(payload))};
        return out;
    }

    const auto matches = repo.resolve_partial_id(*ref.partial);
    if (matches.empty()) {
        out.abnormal = AbnormalRecord{ref.fixing_id, ref.raw_line,
                                      AbnormalCategory::NotInRepository, "unknown-id"};
        return out;
    }
    if (matches.size() == 1) {
        out.resolved = {matches[0]};
        return out;
    }

    // Several ids share this substring; the quoted subject may single one out.
    if (ref.trailer_subject) {
        std::vector<CommitRef> by_subject;
        for (const auto& c : matches)
            if (c.subject == *ref.trailer_subject) by_subject.push_back(c);
        if (by_subject.size() == 1) {
            out.resolved = {by_subject[0]};
            return out;
        }
    }
    std::string ids;
    for (const auto& c : matches) ids += (ids.empty() ? "" : ", ") + c.id;
    throw AmbiguousRef("partial id '" + *ref.partial + "' matches several commits (" + ids +
                       ") and the trailer subject does not single one out");
}

MineResult mine_dataset(const RepoHandle& repo, const CommitRef& until, int workers) {
    // One bulk pass collects the messages that mention Fixes: at all; the
    // per-commit extraction and resolution then run in parallel.
    std::vector<std::pair<std::string, std::string>> candidates;
    repo.for_each_message(until, [&](const std::string& id, const std::string& message) {
        if (message.find("Fixes:") != std::string::npos) candidates.emplace_back(id, message);
    });

    struct PerCommit {
        std::optional<BugFixLink> link;
        std::optional<AbnormalRecord> abnormal;
        std::vector<AbnormalRecord> ambiguous;  // flagged even alongside a link
    };
    std::vector<PerCommit> scanned(candidates.size());

    parallel_for(candidates.size(), workers, [&](std::size_t i) {
        const CommitRef c = repo.commit(candidates[i].first);
        auto refs = extract_fixes_annotations(candidates[i].second);
        if (refs.empty()) return;

        std::set<std::string> inducing;
        std::vector<AbnormalRecord> failures;
        std::vector<AbnormalRecord> ambiguous;
        std::vector<RawFixesRef> kept_refs;
        for (auto& ref : refs) {
            ref.fixing_id = c.id;
            try {
                LinkOutcome outcome = link_bug_inducing(repo, ref);
                if (outcome.abnormal) {
                    failures.push_back(*outcome.abnormal);
                } else {
                    for (const auto& r : outcome.resolved)
                        if (r.id != c.id) inducing.insert(r.id);
                    kept_refs.push_back(ref);
                }
            } catch (const AmbiguousRef& e) {
                ambiguous.push_back(AbnormalRecord{c.id, ref.raw_line,
                                                   AbnormalCategory::Ambiguous, "ambiguous"});
                log_warn("ambiguous Fixes: reference in " + c.id + ": " + e.what());
            }
        }

        PerCommit& slot = scanned[i];
        slot.ambiguous = std::move(ambiguous);
        if (!inducing.empty()) {
            BugFixLink link;
            link.fixing = c;
            link.inducing.assign(inducing.begin(), inducing.end());
            link.raw_refs = std::move(kept_refs);
            slot.link = std::move(link);
        } else if (!slot.ambiguous.empty()) {
            // flagged below; the commit itself is counted through the flag
        } else if (!failures.empty()) {
            // One record per commit. Recognized-but-unresolvable ids dominate
            // pure format failures, mirroring the manual categorization.
            const AbnormalRecord* pick = &failures.front();
            for (const auto& f : failures)
                if (f.category == AbnormalCategory::NotInRepository) {
                    pick = &f;
                    break;
                }
            slot.abnormal = *pick;
        }
    });

    MineResult result;
    std::set<std::string> fixing_ids;
    std::set<std::string> inducing_ids;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        PerCommit& slot = scanned[i];
        if (slot.link) {
            fixing_ids.insert(slot.link->fixing.id);
            for (const auto& id : slot.link->inducing) inducing_ids.insert(id);
            result.dataset.push_back(std::move(*slot.link));
        }
        if (slot.abnormal) result.abnormal.push_back(std::move(*slot.abnormal));
        for (auto& a : slot.ambiguous) result.abnormal.push_back(std::move(a));
    }

    auto by_time = [&repo](const std::string& a, const std::string& b) {
        const CommitRef ca = repo.commit(a), cb = repo.commit(b);
        if (ca.timestamp != cb.timestamp) return ca.timestamp < cb.timestamp;
        return ca.id < cb.id;
    };
    std::sort(result.dataset.begin(), result.dataset.end(),
              [](const BugFixLink& a, const BugFixLink& b) {
                  if (a.fixing.timestamp != b.fixing.timestamp)
                      return a.fixing.timestamp < b.fixing.timestamp;
                  return a.fixing.id < b.fixing.id;
              });
    std::sort(result.abnormal.begin(), result.abnormal.end(),
              [&](const AbnormalRecord& a, const AbnormalRecord& b) {
                  if (a.fixing_id != b.fixing_id) return by_time(a.fixing_id, b.fixing_id);
                  return a.raw_line < b.raw_line;
              });

    std::set_intersection(fixing_ids.begin(), fixing_ids.end(), inducing_ids.begin(),
                          inducing_ids.end(), std::back_inserter(result.common_commits));
    return result;
}

}  // namespace szz
