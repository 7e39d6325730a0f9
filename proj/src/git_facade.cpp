// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/git_facade.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <mutex>
#include <queue>
#include <unordered_map>

#include "szz/errors.hpp"
#include "szz/git_runner.hpp"
#include "szz/util.hpp"

namespace szz {

namespace {

constexpr std::size_t kDiffCacheLimit = 4096;
constexpr std::size_t kBlameCacheLimit = 512;
constexpr std::size_t kContentCacheLimit = 512;

struct CommitNode {
    std::string id;
    std::int64_t timestamp = 0;
    std::string subject;
    std::vector<std::uint32_t> parents;
};

CommitRef to_ref(const CommitNode& n) {
    return CommitRef{n.id, n.timestamp, static_cast<int>(n.parents.size()), n.subject};
}

}  // namespace

int DiffSet::removed_count() const {
    int n = 0;
    for (const auto& f : files)
        for (const auto& h : f.hunks) n += static_cast<int>(h.removed.size());
    return n;
}

int DiffSet::added_count() const {
    int n = 0;
    for (const auto& f : files)
        for (const auto& h : f.hunks) n += static_cast<int>(h.added.size());
    return n;
}

std::vector<LineChange> DiffSet::removed_lines() const {
    std::vector<LineChange> out;
    for (const auto& f : files)
        for (const auto& h : f.hunks) out.insert(out.end(), h.removed.begin(), h.removed.end());
    return out;
}

struct RepoHandle::State {
    std::filesystem::path path;
    GitRunner git;
    CommitRef head;

    std::once_flag table_once;
    std::vector<CommitNode> nodes;  // sorted by id
    std::string joined_ids;         // 41-byte stride: 40 hex + '\n'

    mutable std::mutex cache_mu;
    mutable std::unordered_map<std::string, std::shared_ptr<const DiffSet>> diff_cache;
    mutable std::unordered_map<std::string, std::shared_ptr<const std::vector<BlameEntry>>>
        blame_cache;
    mutable std::unordered_map<std::string, std::shared_ptr<const std::string>> content_cache;

    explicit State(std::filesystem::path p) : path(std::move(p)), git(path) {}

    void ensure_table() {
        std::call_once(table_once, [this] { load_table(); });
    }

    void load_table() {
        const std::string raw =
            git.check({"log", "--format=%H%x00%ct%x00%P%x00%s", head.id});
        std::vector<std::array<std::string, 4>> rows;
        std::size_t pos = 0;
        while (pos < raw.size()) {
            auto eol = raw.find('\n', pos);
            if (eol == std::string::npos) eol = raw.size();
            std::string_view line(raw.data() + pos, eol - pos);
            pos = eol + 1;
            if (line.empty()) continue;
            std::array<std::string, 4> fields;
            std::size_t field = 0, start = 0;
            for (std::size_t i = 0; i <= line.size() && field < 4; ++i) {
                if (i == line.size() || line[i] == '\0') {
                    fields[field++] = std::string(line.substr(start, i - start));
                    start = i + 1;
                }
            }
            rows.push_back(std::move(fields));
        }

        nodes.reserve(rows.size());
        for (auto& r : rows) {
            CommitNode n;
            n.id = r[0];  // rows are read again below for the parent edges
            n.timestamp = std::strtoll(r[1].c_str(), nullptr, 10);
            n.subject = std::move(r[3]);
            nodes.push_back(std::move(n));
        }
        std::sort(nodes.begin(), nodes.end(),
                  [](const CommitNode& a, const CommitNode& b) { return a.id < b.id; });

        // Rows and nodes are now in different orders; reattach parent lists
        // through the sorted index.
        for (auto& r : rows) {
            const std::size_t idx = index_of(r[0]);
            for (const auto& pid : split(r[2], ' ')) {
                if (pid.empty()) continue;
                nodes[idx].parents.push_back(static_cast<std::uint32_t>(index_of(pid)));
            }
        }

        joined_ids.reserve(nodes.size() * 41);
        for (const auto& n : nodes) {
            joined_ids += n.id;
            joined_ids.push_back('\n');
        }
    }

    // Index into the sorted table; nodes.size() when absent.
    std::size_t find(const std::string& id) const {
        auto it = std::lower_bound(
            nodes.begin(), nodes.end(), id,
            [](const CommitNode& n, const std::string& key) { return n.id < key; });
        if (it == nodes.end() || it->id != id) return nodes.size();
        return static_cast<std::size_t>(it - nodes.begin());
    }

    std::size_t index_of(const std::string& id) const {
        const std::size_t idx = find(id);
        if (idx == nodes.size()) throw UnknownCommit("unknown commit " + id);
        return idx;
    }
};

RepoHandle RepoHandle::open(const std::filesystem::path& path, const std::string& rev) {
    auto state = std::make_shared<State>(path);

    if (!state->git.run({"rev-parse", "--git-dir"}).ok())
        throw NotARepo("not a git repository: " + path.string());

    CommandResult head = state->git.run({"rev-parse", "--verify", rev + "^{commit}"});
    if (!head.ok()) {
        if (rev == "HEAD") throw EmptyRepo("repository has no commits: " + path.string());
        throw UnknownCommit("cannot resolve revision '" + rev + "' in " + path.string());
    }
    std::string id(trim(head.out));

    const std::string info = state->git.check({"show", "-s", "--format=%H%x00%ct%x00%P%x00%s", id});
    const auto fields = split(std::string(trim(info)), '\0');
    if (fields.size() < 4) throw GitCommandFailed("unexpected show output for " + id);
    const auto parents = split(fields[2], ' ');
    int parent_count = 0;
    for (const auto& p : parents)
        if (!p.empty()) ++parent_count;
    state->head = CommitRef{fields[0], std::strtoll(fields[1].c_str(), nullptr, 10), parent_count,
                            fields[3]};

    RepoHandle handle;
    handle.state_ = std::move(state);
    return handle;
}

const std::filesystem::path& RepoHandle::path() const { return state_->path; }
const CommitRef& RepoHandle::head() const { return state_->head; }

std::size_t RepoHandle::commit_count() const {
    state_->ensure_table();
    return state_->nodes.size();
}

bool RepoHandle::has_commit(const std::string& id) const {
    state_->ensure_table();
    return state_->find(id) != state_->nodes.size();
}

CommitRef RepoHandle::commit(const std::string& id) const {
    state_->ensure_table();
    return to_ref(state_->nodes[state_->index_of(id)]);
}

CommitRef RepoHandle::resolve_rev(const std::string& rev) const {
    CommandResult res = state_->git.run({"rev-parse", "--verify", rev + "^{commit}"});
    if (!res.ok()) throw UnknownCommit("cannot resolve revision '" + rev + "'");
    return commit(std::string(trim(res.out)));
}

std::vector<std::string> RepoHandle::parent_ids(const CommitRef& c) const {
    state_->ensure_table();
    const auto& node = state_->nodes[state_->index_of(c.id)];
    std::vector<std::string> out;
    out.reserve(node.parents.size());
    for (auto p : node.parents) out.push_back(state_->nodes[p].id);
    return out;
}

std::string RepoHandle::message(const CommitRef& c) const {
    if (!has_commit(c.id)) throw UnknownCommit("unknown commit " + c.id);
    return state_->git.check({"show", "-s", "--format=%B", c.id});
}

void RepoHandle::for_each_message(
    const CommitRef& until,
    const std::function<void(const std::string&, const std::string&)>& fn) const {
    if (!has_commit(until.id)) throw UnknownCommit("unknown commit " + until.id);
    // NUL-separated records; commit text can never contain NUL.
    const std::string raw = state_->git.check({"log", "-z", "--format=%H%x0a%B", until.id});
    std::size_t pos = 0;
    while (pos < raw.size()) {
        auto end = raw.find('\0', pos);
        if (end == std::string::npos) end = raw.size();
        const std::string_view record(raw.data() + pos, end - pos);
        pos = end + 1;
        if (record.size() < 41) continue;
        const std::string id(record.substr(0, 40));
        const std::string body(record.substr(41));
        fn(id, body);
    }
}

std::vector<CommitRef> RepoHandle::list_commits(const CommitRef& until) const {
    state_->ensure_table();
    State& st = *state_;
    const std::size_t root = st.index_of(until.id);

    // Ancestor set of `until`.
    std::vector<char> in_set(st.nodes.size(), 0);
    std::vector<std::size_t> stack{root};
    in_set[root] = 1;
    while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        for (auto p : st.nodes[cur].parents) {
            if (!in_set[p]) {
                in_set[p] = 1;
                stack.push_back(p);
            }
        }
    }

    // Children-before-parents order: a commit becomes ready once all its
    // in-set children have been emitted; among ready commits the newest
    // timestamp wins, ties by smaller id.
    std::vector<std::uint32_t> pending_children(st.nodes.size(), 0);
    for (std::size_t i = 0; i < st.nodes.size(); ++i) {
        if (!in_set[i]) continue;
        for (auto p : st.nodes[i].parents)
            if (in_set[p]) ++pending_children[p];
    }
    auto later = [&st](std::size_t a, std::size_t b) {
        if (st.nodes[a].timestamp != st.nodes[b].timestamp)
            return st.nodes[a].timestamp < st.nodes[b].timestamp;
        return st.nodes[a].id > st.nodes[b].id;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> ready(later);
    for (std::size_t i = 0; i < st.nodes.size(); ++i)
        if (in_set[i] && pending_children[i] == 0) ready.push(i);

    std::vector<CommitRef> out;
    while (!ready.empty()) {
        const std::size_t cur = ready.top();
        ready.pop();
        out.push_back(to_ref(st.nodes[cur]));
        for (auto p : st.nodes[cur].parents) {
            if (in_set[p] && --pending_children[p] == 0) ready.push(p);
        }
    }
    return out;
}

namespace {

// Parses `git diff-tree -p -U0` output into FileDiffs.
std::vector<FileDiff> parse_unified_diff(const std::string& text) {
    std::vector<FileDiff> files;
    FileDiff* file = nullptr;
    DiffHunk* hunk = nullptr;
    int next_removed = 0, next_added = 0;

    auto strip_prefix = [](std::string_view p) -> std::string {
        if (p == "/dev/null") return "";
        if (p.size() >= 2 && (p.substr(0, 2) == "a/" || p.substr(0, 2) == "b/"))
            return std::string(p.substr(2));
        return std::string(p);
    };
    auto finish_file = [&] {
        if (!file) return;
        for (auto& h : file->hunks) {
            for (auto& lc : h.removed) lc.file = file->old_path;
            for (auto& lc : h.added) lc.file = file->new_path;
        }
        file = nullptr;
        hunk = nullptr;
    };

    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;

        if (line.rfind("diff --git ", 0) == 0) {
            finish_file();
            files.emplace_back();
            file = &files.back();
            continue;
        }
        if (!file) continue;

        // File headers (rename/---/+++) only occur before the first hunk of a
        // file; once a hunk is open, every -/+ line is content. This keeps
        // removed lines that begin with "--" from being taken for headers.
        if (line.rfind("rename from ", 0) == 0 && !hunk) {
            file->old_path = std::string(line.substr(12));
            file->renamed = true;
        } else if (line.rfind("rename to ", 0) == 0 && !hunk) {
            file->new_path = std::string(line.substr(10));
        } else if (line.rfind("--- ", 0) == 0 && !hunk) {
            file->old_path = strip_prefix(line.substr(4));
        } else if (line.rfind("+++ ", 0) == 0 && !hunk) {
            file->new_path = strip_prefix(line.substr(4));
        } else if (line.rfind("@@ -", 0) == 0) {
            // @@ -<old>[,<n>] +<new>[,<m>] @@ ...
            std::string_view rest = line.substr(4);
            const auto parse_int = [&rest]() {
                long v = 0;
                std::size_t i = 0;
                while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9')
                    v = v * 10 + (rest[i++] - '0');
                rest.remove_prefix(i);
                return v;
            };
            const long old_start = parse_int();
            if (!rest.empty() && rest[0] == ',') {
                rest.remove_prefix(1);
                parse_int();
            }
            while (!rest.empty() && (rest[0] == ' ' || rest[0] == '+')) rest.remove_prefix(1);
            const long new_start = parse_int();
            file->hunks.emplace_back();
            hunk = &file->hunks.back();
            next_removed = static_cast<int>(old_start);
            next_added = static_cast<int>(new_start);
        } else if (hunk && !line.empty() && line[0] == '-') {
            hunk->removed.push_back(
                LineChange{"", next_removed++, std::string(line.substr(1)), LineKind::Removed});
        } else if (hunk && !line.empty() && line[0] == '+') {
            hunk->added.push_back(
                LineChange{"", next_added++, std::string(line.substr(1)), LineKind::Added});
        }
        // "\ No newline" markers and mode/index/binary headers are ignored.
    }
    finish_file();
    return files;
}

}  // namespace

std::shared_ptr<const DiffSet> RepoHandle::commit_diff(const CommitRef& c) const {
    State& st = *state_;
    {
        std::lock_guard<std::mutex> lock(st.cache_mu);
        auto it = st.diff_cache.find(c.id);
        if (it != st.diff_cache.end()) return it->second;
    }
    if (!has_commit(c.id)) throw UnknownCommit("unknown commit " + c.id);

    auto diff = std::make_shared<DiffSet>();
    diff->commit = commit(c.id);
    if (!diff->commit.is_merge()) {
        const std::string out =
            st.git.check({"diff-tree", "--root", "--no-commit-id", "-r", "-p", "-U0",
                          "--find-renames=50%", "--full-index", c.id});
        diff->files = parse_unified_diff(out);
    }

    std::lock_guard<std::mutex> lock(st.cache_mu);
    if (st.diff_cache.size() >= kDiffCacheLimit) st.diff_cache.clear();
    st.diff_cache.emplace(c.id, diff);
    return diff;
}

std::shared_ptr<const std::vector<BlameEntry>> RepoHandle::blame_file(
    const std::string& rev_id, const std::string& file) const {
    State& st = *state_;
    const std::string key = rev_id + '\0' + file;
    {
        std::lock_guard<std::mutex> lock(st.cache_mu);
        auto it = st.blame_cache.find(key);
        if (it != st.blame_cache.end()) return it->second;
    }

    CommandResult res = st.git.run({"blame", "--line-porcelain", rev_id, "--", file});
    if (!res.ok()) {
        if (res.err.find("no such path") != std::string::npos ||
            res.err.find("does not exist") != std::string::npos)
            throw NoSuchPathAtCommit("no path '" + file + "' at " + rev_id);
        throw GitCommandFailed("git blame failed: " + res.err);
    }

    auto entries = std::make_shared<std::vector<BlameEntry>>();
    BlameEntry cur;
    bool have_cur = false;
    std::size_t pos = 0;
    const std::string& out = res.out;
    while (pos < out.size()) {
        auto eol = out.find('\n', pos);
        if (eol == std::string::npos) eol = out.size();
        std::string_view line(out.data() + pos, eol - pos);
        pos = eol + 1;

        if (!line.empty() && line[0] == '\t') {
            cur.content = std::string(line.substr(1));
            if (have_cur) entries->push_back(cur);
            have_cur = false;
        } else if (line.size() > 41 && line[40] == ' ' && is_hex_lower(line.substr(0, 40))) {
            cur = BlameEntry{};
            cur.origin = commit(std::string(line.substr(0, 40)));
            cur.origin_line = std::atoi(std::string(line.substr(41)).c_str());
            have_cur = true;
        } else if (line.rfind("filename ", 0) == 0) {
            cur.origin_path = std::string(line.substr(9));
        }
    }

    std::lock_guard<std::mutex> lock(st.cache_mu);
    if (st.blame_cache.size() >= kBlameCacheLimit) st.blame_cache.clear();
    st.blame_cache.emplace(key, entries);
    return entries;
}

BlameEntry RepoHandle::blame_line(const CommitRef& at, const std::string& file, int line) const {
    const auto parents = parent_ids(at);
    if (parents.empty())
        throw NoSuchPathAtCommit("commit " + at.id + " has no parent to blame at");
    auto entries = blame_file(parents[0], file);
    if (line < 1 || static_cast<std::size_t>(line) > entries->size())
        throw LineOutOfRange("line " + std::to_string(line) + " out of range for '" + file +
                             "' at " + parents[0]);
    return (*entries)[static_cast<std::size_t>(line - 1)];
}

std::vector<CommitRef> RepoHandle::log_line_range(const std::string& file, int start, int end,
                                                  const CommitRef& from) const {
    if (start < 1 || end < start)
        throw RangeInvalid("invalid line range " + std::to_string(start) + "," +
                           std::to_string(end));
    CommandResult res = state_->git.run({"log", "--no-patch", "--format=%H",
                                         "-L" + std::to_string(start) + "," +
                                             std::to_string(end) + ":" + file,
                                         from.id});
    if (!res.ok()) {
        if (res.err.find("has only") != std::string::npos)
            throw RangeInvalid("range " + std::to_string(start) + "," + std::to_string(end) +
                               " invalid for '" + file + "': " + res.err);
        throw NoSuchPathAtCommit("cannot trace '" + file + "' from " + from.id + ": " + res.err);
    }
    std::vector<CommitRef> out;
    for (const auto& line : split_lines(res.out))
        if (is_full_id(line)) out.push_back(commit(line));
    return out;
}

std::vector<CommitRef> RepoHandle::file_history(const std::string& file,
                                                const CommitRef& from) const {
    const std::string out =
        state_->git.check({"log", "--follow", "--format=%H", from.id, "--", file});
    std::vector<CommitRef> commits;
    for (const auto& line : split_lines(out))
        if (is_full_id(line)) commits.push_back(commit(line));
    if (commits.empty())
        throw NoSuchPathAtCommit("path '" + file + "' never existed below " + from.id);
    return commits;
}

std::vector<CommitRef> RepoHandle::resolve_partial_id(const std::string& partial) const {
    if (partial.size() < 7 || partial.size() > 40 || !is_hex_lower(partial))
        throw MalformedPartial("partial id must be 7-40 lowercase hex digits: '" + partial + "'");
    state_->ensure_table();
    const State& st = *state_;

    std::vector<CommitRef> out;
    std::size_t pos = 0;
    std::size_t last_idx = static_cast<std::size_t>(-1);
    while ((pos = st.joined_ids.find(partial, pos)) != std::string::npos) {
        const std::size_t idx = pos / 41;
        if (idx != last_idx) {
            out.push_back(to_ref(st.nodes[idx]));
            last_idx = idx;
        }
        pos = idx * 41 + 41;  // next record; one hit per commit is enough
    }
    return out;
}

std::string RepoHandle::file_at(const CommitRef& c, const std::string& file) const {
    State& st = *state_;
    const std::string key = c.id + '\0' + file;
    {
        std::lock_guard<std::mutex> lock(st.cache_mu);
        auto it = st.content_cache.find(key);
        if (it != st.content_cache.end()) return *it->second;
    }
    CommandResult res = st.git.run({"cat-file", "-p", c.id + ":" + file});
    if (!res.ok())
        throw NoSuchPathAtCommit("no path '" + file + "' at " + c.id + ": " + res.err);

    auto content = std::make_shared<const std::string>(std::move(res.out));
    std::lock_guard<std::mutex> lock(st.cache_mu);
    if (st.content_cache.size() >= kContentCacheLimit) st.content_cache.clear();
    st.content_cache.emplace(key, content);
    return *content;
}

}  // namespace szz
