// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/fixture_forge.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "szz/errors.hpp"
#include "szz/git_runner.hpp"
#include "szz/util.hpp"

namespace szz {

namespace {

std::string block_to_text(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out.push_back('\n');
    }
    return out;
}

std::vector<std::string> text_to_block(const std::string& text) { return split_lines(text); }

}  // namespace

std::int64_t FixtureScript::time_of_step(std::size_t index) const {
    const auto& s = steps.at(index);
    return s.author_time ? *s.author_time
                         : kFixtureEpochBase + static_cast<std::int64_t>(index) * 3600;
}

const FixtureStep& FixtureScript::step(const std::string& label) const {
    for (const auto& s : steps)
        if (s.label == label) return s;
    throw ScriptInvalid("no step labelled '" + label + "'");
}

void FixtureScript::validate() const {
    if (steps.empty()) throw ScriptInvalid("script has no steps");
    std::set<std::string> seen;
    for (const auto& s : steps) {
        if (s.label.empty() || s.label.find(' ') != std::string::npos)
            throw ScriptInvalid("bad step label '" + s.label + "'");
        if (!seen.insert(s.label).second)
            throw ScriptInvalid("duplicate step label '" + s.label + "'");
        for (const auto& p : s.parents)
            if (!seen.count(p))
                throw ScriptInvalid("step '" + s.label + "' references unknown or later parent '" +
                                    p + "'");
        for (const auto& e : s.edits)
            if (e.file.empty()) throw ScriptInvalid("empty file path in step '" + s.label + "'");
    }
}

FixtureScript FixtureScript::parse(const std::string& text) {
    FixtureScript script;
    FixtureStep* step = nullptr;
    enum class Block { None, File, Msg };
    Block block = Block::None;
    std::vector<std::string> block_lines;
    std::string block_path;

    int lineno = 0;
    for (const auto& raw : split_lines(text)) {
        ++lineno;
        const std::string_view line = raw;
        if (block != Block::None) {
            if (line == "endfile" || line == "endmsg") {
                if ((block == Block::File) != (line == "endfile"))
                    throw ScriptInvalid("mismatched block terminator at line " +
                                        std::to_string(lineno));
                if (block == Block::File)
                    step->edits.push_back(FixtureEdit{block_path, block_to_text(block_lines)});
                else
                    step->message = block_to_text(block_lines);
                block = Block::None;
                block_lines.clear();
                continue;
            }
            if (line == "|") {
                block_lines.emplace_back();
            } else if (line.rfind("| ", 0) == 0) {
                block_lines.emplace_back(line.substr(2));
            } else {
                throw ScriptInvalid("expected '| ' content line at line " + std::to_string(lineno));
            }
            continue;
        }

        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        const auto tokens = split(std::string(stripped), ' ');
        const std::string& kw = tokens[0];
        if (kw == "step") {
            if (step) throw ScriptInvalid("'step' before 'endstep' at line " + std::to_string(lineno));
            if (tokens.size() < 2) throw ScriptInvalid("'step' needs a label");
            script.steps.emplace_back();
            step = &script.steps.back();
            step->label = tokens[1];
            step->parents.assign(tokens.begin() + 2, tokens.end());
        } else if (kw == "endstep") {
            if (!step) throw ScriptInvalid("'endstep' without 'step'");
            if (step->message.empty()) step->message = step->label + "\n";
            step = nullptr;
        } else if (!step) {
            throw ScriptInvalid("directive '" + kw + "' outside a step at line " +
                                std::to_string(lineno));
        } else if (kw == "time") {
            if (tokens.size() != 2) throw ScriptInvalid("'time' needs an epoch value");
            step->author_time = std::strtoll(tokens[1].c_str(), nullptr, 10);
        } else if (kw == "file") {
            if (tokens.size() < 2) throw ScriptInvalid("'file' needs a path");
            block = Block::File;
            block_path = std::string(stripped.substr(5));
        } else if (kw == "rm") {
            if (tokens.size() < 2) throw ScriptInvalid("'rm' needs a path");
            step->edits.push_back(FixtureEdit{std::string(stripped.substr(3)), std::nullopt});
        } else if (kw == "msg") {
            block = Block::Msg;
        } else {
            throw ScriptInvalid("unknown directive '" + kw + "' at line " + std::to_string(lineno));
        }
    }
    if (step || block != Block::None) throw ScriptInvalid("unterminated step or block at end");
    script.validate();
    return script;
}

std::string FixtureScript::serialize() const {
    std::string out;
    for (const auto& s : steps) {
        out += "step " + s.label;
        for (const auto& p : s.parents) out += " " + p;
        out.push_back('\n');
        if (s.author_time) out += "time " + std::to_string(*s.author_time) + "\n";
        for (const auto& e : s.edits) {
            if (!e.content) {
                out += "rm " + e.file + "\n";
                continue;
            }
            out += "file " + e.file + "\n";
            for (const auto& l : text_to_block(*e.content))
                out += l.empty() ? "|\n" : "| " + l + "\n";
            out += "endfile\n";
        }
        out += "msg\n";
        for (const auto& l : text_to_block(s.message)) out += l.empty() ? "|\n" : "| " + l + "\n";
        out += "endmsg\n";
        out += "endstep\n";
    }
    return out;
}

const std::string& FixtureMap::id(const std::string& label) const {
    auto it = label_to_id.find(label);
    if (it == label_to_id.end()) throw ScriptInvalid("no fixture label '" + label + "'");
    return it->second;
}

std::string FixtureMap::label_of(const std::string& id) const {
    for (const auto& [label, sha] : label_to_id)
        if (sha == id) return label;
    return {};
}

FixtureMap build_fixture(const FixtureScript& script, const std::filesystem::path& dir) {
    script.validate();

    std::error_code ec;
    if (std::filesystem::exists(dir) && !std::filesystem::is_empty(dir))
        throw IoFailure("fixture directory not empty: " + dir.string());
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());

    GitRunner git(dir);
    if (!git.run({"init", "-q", "-b", "master", "."}).ok())
        throw IoFailure("git init failed in " + dir.string());

    // One fast-import stream builds the whole DAG: blobs are deduplicated,
    // each step's tree is its first parent's tree plus the step's edits, and
    // master is finally reset to the last step.
    std::string stream;
    std::unordered_map<std::string, int> blob_marks;
    std::unordered_map<std::string, int> step_marks;
    int next_mark = 1;

    auto data_block = [](const std::string& payload) {
        return "data " + std::to_string(payload.size()) + "\n" + payload;
    };

    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        const FixtureStep& s = script.steps[i];
        for (const auto& e : s.edits) {
            if (!e.content || blob_marks.count(*e.content)) continue;
            const int mark = next_mark++;
            blob_marks.emplace(*e.content, mark);
            stream += "blob\nmark :" + std::to_string(mark) + "\n" + data_block(*e.content);
        }

        std::string message = s.message.empty() ? s.label + "\n" : s.message;
        if (message.back() != '\n') message.push_back('\n');
        const std::string when = std::to_string(script.time_of_step(i)) + " +0000";

        if (s.parents.empty()) stream += "reset refs/heads/master\n";
        const int mark = next_mark++;
        step_marks.emplace(s.label, mark);
        stream += "commit refs/heads/master\nmark :" + std::to_string(mark) + "\n";
        stream += "author " + std::string(kFixtureIdentity) + " " + when + "\n";
        stream += "committer " + std::string(kFixtureIdentity) + " " + when + "\n";
        stream += data_block(message);
        for (std::size_t p = 0; p < s.parents.size(); ++p) {
            stream += (p == 0 ? "from :" : "merge :") +
                      std::to_string(step_marks.at(s.parents[p])) + "\n";
        }
        for (const auto& e : s.edits) {
            if (e.content)
                stream += "M 100644 :" + std::to_string(blob_marks.at(*e.content)) + " " + e.file +
                          "\n";
            else
                stream += "D " + e.file + "\n";
        }
    }
    stream += "reset refs/heads/master\nfrom :" +
              std::to_string(step_marks.at(script.steps.back().label)) + "\n";

    const std::filesystem::path marks_path = dir / ".git" / "fixture-marks";
    CommandResult res =
        git.run({"fast-import", "--quiet", "--export-marks=" + marks_path.string()}, stream);
    if (!res.ok()) throw IoFailure("git fast-import failed: " + res.err);

    std::ifstream marks(marks_path);
    if (!marks) throw IoFailure("cannot read marks file " + marks_path.string());
    std::unordered_map<int, std::string> mark_to_id;
    std::string line;
    while (std::getline(marks, line)) {
        // ":<mark> <sha>"
        const auto space = line.find(' ');
        if (line.size() < 3 || line[0] != ':' || space == std::string::npos) continue;
        mark_to_id[std::atoi(line.substr(1, space - 1).c_str())] = line.substr(space + 1);
    }

    FixtureMap map;
    map.repo_path = dir;
    for (const auto& [label, mark] : step_marks) {
        auto it = mark_to_id.find(mark);
        if (it == mark_to_id.end())
            throw IoFailure("fast-import did not report a commit for step '" + label + "'");
        map.label_to_id.emplace(label, it->second);
    }
    return map;
}

// ---------------------------------------------------------------------------
// Random scripts
// ---------------------------------------------------------------------------

namespace {

struct GeneratedFile {
    std::string name;
    std::vector<std::string> lines;
    std::vector<int> versions;  // parallel to lines
};

std::string unique_line(std::uint64_t uid, int version) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "value_%08llx = calibrate_threshold_step(%d);",
                  static_cast<unsigned long long>(uid), version);
    return buf;
}

}  // namespace

FixtureScript random_fixture_script(std::uint64_t seed, const RandomScriptOptions& opts) {
    std::mt19937_64 rng(seed);
    auto pick = [&rng](int lo, int hi) {
        return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    FixtureScript script;
    std::vector<GeneratedFile> files;
    std::uint64_t uid = (seed << 16) + 1;

    const int n_commits = pick(opts.min_commits, opts.max_commits);
    for (int c = 0; c < n_commits; ++c) {
        FixtureStep step;
        step.label = "c" + std::to_string(c);
        if (c > 0) step.parents = {"c" + std::to_string(c - 1)};
        step.message = step.label + ": scripted edit\n";

        std::set<std::string> touched;
        const int ops = c == 0 ? 1 : pick(1, opts.max_ops_per_commit);
        for (int op = 0; op < ops; ++op) {
            const int kind = c == 0 ? 0 : pick(0, 9);
            if (kind <= 1 || files.empty()) {  // create a file
                if (static_cast<int>(files.size()) >= opts.max_files) continue;
                GeneratedFile f;
                f.name = "f" + std::to_string(files.size()) + ".c";
                const int n_lines = pick(3, 8);
                for (int i = 0; i < n_lines; ++i) {
                    f.lines.push_back(unique_line(uid++, 0));
                    f.versions.push_back(0);
                }
                files.push_back(std::move(f));
                touched.insert(files.back().name);
            } else if (kind <= 4) {  // insert a line
                GeneratedFile& f = files[static_cast<std::size_t>(pick(0, static_cast<int>(files.size()) - 1))];
                const int at = f.lines.empty() ? 0 : pick(0, static_cast<int>(f.lines.size()));
                f.lines.insert(f.lines.begin() + at, unique_line(uid++, 0));
                f.versions.insert(f.versions.begin() + at, 0);
                touched.insert(f.name);
            } else if (kind <= 8) {  // modify a line in place
                GeneratedFile& f = files[static_cast<std::size_t>(pick(0, static_cast<int>(files.size()) - 1))];
                if (f.lines.empty()) continue;
                const int at = pick(0, static_cast<int>(f.lines.size()) - 1);
                const std::size_t idx = static_cast<std::size_t>(at);
                // keep the unique token, bump the version
                const auto token_end = f.lines[idx].find(" = ");
                const std::string token = f.lines[idx].substr(0, token_end);
                const int version = ++f.versions[idx];
                char buf[96];
                std::snprintf(buf, sizeof(buf), "%s = calibrate_threshold_step(%d);",
                              token.c_str(), version);
                f.lines[idx] = buf;
                touched.insert(f.name);
            } else {  // delete a line
                GeneratedFile& f = files[static_cast<std::size_t>(pick(0, static_cast<int>(files.size()) - 1))];
                if (f.lines.size() < 2) continue;
                const int at = pick(0, static_cast<int>(f.lines.size()) - 1);
                f.lines.erase(f.lines.begin() + at);
                f.versions.erase(f.versions.begin() + at);
                touched.insert(f.name);
            }
        }
        if (touched.empty()) {  // force an effect so no commit has an empty diff
            GeneratedFile& f = files.front();
            f.lines.push_back(unique_line(uid++, 0));
            f.versions.push_back(0);
            touched.insert(f.name);
        }
        for (const auto& name : touched) {
            for (const auto& f : files) {
                if (f.name != name) continue;
                std::string content;
                for (const auto& l : f.lines) content += l + "\n";
                step.edits.push_back(FixtureEdit{f.name, content});
            }
        }
        script.steps.push_back(std::move(step));
    }
    return script;
}

// ---------------------------------------------------------------------------
// Provenance oracle
// ---------------------------------------------------------------------------

namespace {

// Pairs of (old index, new index) of content-equal lines, via classic LCS.
std::vector<std::pair<std::size_t, std::size_t>> lcs_matches(
    const std::vector<std::string>& old_lines, const std::vector<std::string>& new_lines) {
    const std::size_t n = old_lines.size(), m = new_lines.size();
    std::vector<std::vector<std::uint32_t>> dp(n + 1, std::vector<std::uint32_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            dp[i][j] = (old_lines[i] == new_lines[j])
                           ? dp[i + 1][j + 1] + 1
                           : std::max(dp[i + 1][j], dp[i][j + 1]);
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        if (old_lines[i] == new_lines[j]) {
            matches.emplace_back(i, j);
            ++i;
            ++j;
        } else if (dp[i + 1][j] >= dp[i][j + 1]) {
            ++i;
        } else {
            ++j;
        }
    }
    return matches;
}

OracleFileState replay_file(const OracleFileState& old_state,
                            const std::vector<std::string>& new_lines,
                            const std::string& commit_id) {
    std::vector<std::string> old_lines;
    old_lines.reserve(old_state.size());
    for (const auto& lp : old_state) old_lines.push_back(lp.content);

    const auto matches = lcs_matches(old_lines, new_lines);

    OracleFileState out(new_lines.size());
    std::size_t oi = 0, nj = 0;
    // Unmatched block between two matches: the k-th removed and the k-th
    // added line count as one modified line; surplus added lines are fresh.
    auto fill_block = [&](std::size_t old_end, std::size_t new_end) {
        std::size_t k = 0;
        for (std::size_t j = nj; j < new_end; ++j, ++k) {
            out[j].content = new_lines[j];
            out[j].history.push_back(commit_id);
            if (oi + k < old_end)
                out[j].history.insert(out[j].history.end(), old_state[oi + k].history.begin(),
                                      old_state[oi + k].history.end());
        }
        oi = old_end;
        nj = new_end;
    };
    for (const auto& [mo, mn] : matches) {
        fill_block(mo, mn);
        out[mn] = old_state[mo];  // content-equal line inherits unchanged
        oi = mo + 1;
        nj = mn + 1;
    }
    fill_block(old_lines.size(), new_lines.size());
    return out;
}

}  // namespace

ProvenanceOracle ProvenanceOracle::build(const FixtureScript& script, const FixtureMap& map) {
    ProvenanceOracle oracle;
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        const FixtureStep& s = script.steps[i];
        const std::string& id = map.id(s.label);
        OracleState state;
        if (!s.parents.empty()) state = oracle.after_.at(map.id(s.parents[0]));
        oracle.first_parent_[id] = s.parents.empty() ? "" : map.id(s.parents[0]);

        for (const auto& e : s.edits) {
            if (!e.content) {
                state.files.erase(e.file);
                continue;
            }
            const auto new_lines = split_lines(*e.content);
            auto it = state.files.find(e.file);
            const OracleFileState old_state =
                it == state.files.end() ? OracleFileState{} : it->second;
            OracleFileState replayed = replay_file(old_state, new_lines, id);
            // A rewrite identical to the old content is not an edit at all.
            if (it != state.files.end() && new_lines.size() == old_state.size()) {
                bool same = true;
                for (std::size_t j = 0; j < new_lines.size() && same; ++j)
                    same = new_lines[j] == old_state[j].content;
                if (same) continue;
            }
            state.files[e.file] = std::move(replayed);
        }
        oracle.after_.emplace(id, std::move(state));
    }
    return oracle;
}

const OracleState& ProvenanceOracle::state_after(const std::string& commit_id) const {
    auto it = after_.find(commit_id);
    if (it == after_.end()) throw ScriptInvalid("oracle has no state for commit " + commit_id);
    return it->second;
}

const LineProvenance& ProvenanceOracle::removed_line_provenance(const std::string& commit_id,
                                                                const std::string& file,
                                                                int line) const {
    auto pit = first_parent_.find(commit_id);
    if (pit == first_parent_.end() || pit->second.empty())
        throw ScriptInvalid("no parent state for commit " + commit_id);
    const OracleState& state = state_after(pit->second);
    auto fit = state.files.find(file);
    if (fit == state.files.end())
        throw ScriptInvalid("oracle: no file '" + file + "' before " + commit_id);
    if (line < 1 || static_cast<std::size_t>(line) > fit->second.size())
        throw ScriptInvalid("oracle: line " + std::to_string(line) + " out of range in '" + file +
                            "'");
    return fit->second[static_cast<std::size_t>(line - 1)];
}

}  // namespace szz
