// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/pipeline.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "szz/classifier.hpp"
#include "szz/csv.hpp"
#include "szz/errors.hpp"
#include "szz/fixture_forge.hpp"
#include "szz/metrics.hpp"
#include "szz/parallel.hpp"
#include "szz/util.hpp"

namespace szz {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out.push_back('|');
        out += ids[i];
    }
    return out;
}

void write_file_or_throw(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoFailure("cannot write " + path.string());
}

std::string read_file_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string header_line(const std::string& config_hash) {
    return "# config=" + config_hash + "\n";
}

std::string tc_mode_name(TcMode mode) {
    switch (mode) {
        case TcMode::ChronologicalTrace: return "chronological";
        case TcMode::UniqueCommits: return "unique";
        case TcMode::CustomBlame: return "custom";
    }
    return "?";
}

}  // namespace

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    RunConfig config;
    const std::string text = read_file_or_throw(path);
    int lineno = 0;
    for (const auto& raw : split_lines(text)) {
        ++lineno;
        const std::string_view line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        config.set(std::string(trim(line.substr(0, eq))),
                   std::string(trim(line.substr(eq + 1))));
    }
    return config;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "repo") {
        repo_path = value;
    } else if (key == "until") {
        until_rev = value;
    } else if (key == "algos") {
        algorithms.clear();
        for (const auto& name : split(value, ',')) {
            const auto algo = algo_from_name(std::string(trim(name)));
            if (!algo) throw Error("unknown algorithm '" + name + "'");
            algorithms.push_back(*algo);
        }
    } else if (key == "tc_mode") {
        if (value == "chronological") tc_mode = TcMode::ChronologicalTrace;
        else if (value == "unique") tc_mode = TcMode::UniqueCommits;
        else if (value == "custom") tc_mode = TcMode::CustomBlame;
        else throw Error("unknown tc_mode '" + value + "'");
    } else if (key == "blame_count") {
        blame_count = std::stoi(value);
    } else if (key == "similarity_threshold") {
        similarity_threshold = std::stod(value);
    } else if (key == "out") {
        output_dir = value;
    } else if (key == "workers") {
        worker_count = std::stoi(value);
    } else if (key == "emit_prompts") {
        emit_prompts = value == "1" || value == "true";
    } else if (key == "attribution") {
        attribution = value == "1" || value == "true";
    } else {
        throw Error("unknown config key '" + key + "'");
    }
}

void RunConfig::validate() const {
    if (algorithms.empty()) throw Error("config: algorithms must be non-empty");
    if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0))
        throw Error("config: similarity_threshold must be in (0,1]");
    if (blame_count < -1 || blame_count == 0)
        throw Error("config: blame_count must be positive or -1");
    if (worker_count < 0) throw Error("config: workers must be >= 0");
}

int RunConfig::effective_workers() const {
    return worker_count > 0 ? worker_count : default_worker_count();
}

TcOptions RunConfig::tc_options() const {
    TcOptions opts;
    opts.similarity_threshold = similarity_threshold;
    return opts;
}

TcModeSpec RunConfig::tc_mode_spec() const { return TcModeSpec{tc_mode, blame_count}; }

std::string RunConfig::serialize() const {
    std::string algos;
    for (std::size_t i = 0; i < algorithms.size(); ++i)
        algos += (i ? "," : "") + algo_name(algorithms[i]);
    std::ostringstream out;
    out << "algos=" << algos << "\n"
        << "attribution=" << (attribution ? 1 : 0) << "\n"
        << "blame_count=" << blame_count << "\n"
        << "emit_prompts=" << (emit_prompts ? 1 : 0) << "\n"
        << "out=" << output_dir.string() << "\n"
        << "repo=" << repo_path.string() << "\n"
        << "similarity_threshold=" << similarity_threshold << "\n"
        << "tc_mode=" << tc_mode_name(tc_mode) << "\n"
        << "until=" << until_rev << "\n";
    return out.str();
}

std::string RunConfig::config_hash() const { return fnv1a_hex(serialize()); }

std::filesystem::path dataset_csv_path(const RunConfig& c) { return c.output_dir / "dataset.csv"; }
std::filesystem::path abnormal_csv_path(const RunConfig& c) {
    return c.output_dir / "abnormal.csv";
}
std::filesystem::path common_ledger_path(const RunConfig& c) {
    return c.output_dir / "common_hashes.txt";
}
std::filesystem::path predictions_csv_path(const RunConfig& c, Algo a) {
    return c.output_dir / ("predictions_" + algo_name(a) + ".csv");
}
std::filesystem::path attribution_json_path(const RunConfig& c, Algo a) {
    return c.output_dir / ("attribution_" + algo_name(a) + ".json");
}
std::filesystem::path tc_chains_path(const RunConfig& c) {
    return c.output_dir / "tc_chains.jsonl";
}
std::filesystem::path ghosts_csv_path(const RunConfig& c) { return c.output_dir / "ghosts.csv"; }
std::filesystem::path classification_csv_path(const RunConfig& c) {
    return c.output_dir / "classification.csv";
}
std::filesystem::path prompts_dir(const RunConfig& c) { return c.output_dir / "prompts"; }
std::filesystem::path report_json_path(const RunConfig& c) {
    return c.output_dir / "report.json";
}
std::filesystem::path table_csv_path(const RunConfig& c) { return c.output_dir / "table2.csv"; }

void write_dataset_csv(const std::filesystem::path& path, const std::vector<BugFixLink>& dataset,
                       const std::string& config_hash) {
    std::string out = header_line(config_hash);
    out += "fix_sha,inducing_shas,subject\n";
    for (const auto& link : dataset)
        out += csv_row({link.fixing.id, join_ids(link.inducing), link.fixing.subject});
    write_file_or_throw(path, out);
}

std::vector<BugFixLink> read_dataset_csv(const std::filesystem::path& path,
                                         const RepoHandle& repo) {
    const auto rows = csv_parse(read_file_or_throw(path));
    std::vector<BugFixLink> dataset;
    for (std::size_t i = 1; i < rows.size(); ++i) {  // skip header
        const auto& row = rows[i];
        if (row.size() < 2) continue;
        BugFixLink link;
        link.fixing = repo.commit(row[0]);
        for (const auto& id : split(row[1], '|'))
            if (!id.empty()) link.inducing.push_back(id);
        std::sort(link.inducing.begin(), link.inducing.end());
        dataset.push_back(std::move(link));
    }
    return dataset;
}

void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<Prediction>& predictions,
                           const std::string& config_hash) {
    std::string out = header_line(config_hash);
    out += "fix_sha,algorithm,inducing_shas\n";
    for (const auto& p : predictions)
        out += csv_row({p.fix_id, algo_name(p.algorithm), join_ids(p.inducing)});
    write_file_or_throw(path, out);
}

std::vector<Prediction> read_predictions_csv(const std::filesystem::path& path) {
    const auto rows = csv_parse(read_file_or_throw(path));
    std::vector<Prediction> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() < 3) continue;
        Prediction p;
        p.fix_id = row[0];
        const auto algo = algo_from_name(row[1]);
        if (!algo) throw Error("unknown algorithm '" + row[1] + "' in " + path.string());
        p.algorithm = *algo;
        for (const auto& id : split(row[2], '|'))
            if (!id.empty()) p.inducing.push_back(id);
        std::sort(p.inducing.begin(), p.inducing.end());
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// mine
// ---------------------------------------------------------------------------

int cmd_mine(const RunConfig& config) {
    config.validate();
    RepoHandle repo;
    CommitRef until;
    try {
        repo = RepoHandle::open(config.repo_path);
        until = repo.resolve_rev(config.until_rev);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRepoError;
    }

    const MineResult mined = mine_dataset(repo, until, config.effective_workers());

    try {
        write_dataset_csv(dataset_csv_path(config), mined.dataset, config.config_hash());

        std::string abnormal = header_line(config.config_hash());
        abnormal += "fix_sha,raw_line,category,subcause\n";
        for (const auto& rec : mined.abnormal)
            abnormal += csv_row({rec.fixing_id, rec.raw_line,
                                 abnormal_category_name(rec.category), rec.subcause});
        write_file_or_throw(abnormal_csv_path(config), abnormal);

        std::string common = header_line(config.config_hash());
        for (const auto& id : mined.common_commits) common += id + "\n";
        write_file_or_throw(common_ledger_path(config), common);
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitWriteError;
    }

    std::map<AbnormalCategory, int> by_category;
    for (const auto& rec : mined.abnormal) ++by_category[rec.category];
    std::cout << "mined " << mined.dataset.size() << " bug-fix links, " << mined.abnormal.size()
              << " abnormal (" << by_category[AbnormalCategory::PartialCommitId]
              << " PartialCommitId, " << by_category[AbnormalCategory::NotInRepository]
              << " NotInRepository, " << by_category[AbnormalCategory::Ambiguous]
              << " Ambiguous), " << mined.common_commits.size() << " common commits\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

int cmd_run(const RunConfig& config) {
    config.validate();
    if (!std::filesystem::exists(dataset_csv_path(config))) {
        std::cerr << "error: missing " << dataset_csv_path(config).string()
                  << " (run `mine` first)\n";
        return kExitMissingDataset;
    }
    RepoHandle repo;
    try {
        repo = RepoHandle::open(config.repo_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRepoError;
    }
    const auto dataset = read_dataset_csv(dataset_csv_path(config), repo);

    try {
        for (Algo algo : config.algorithms) {
            std::vector<Prediction> predictions(dataset.size());
            std::vector<TcResult> traces(algo == Algo::TC ? dataset.size() : 0);
            parallel_for(dataset.size(), config.effective_workers(), [&](std::size_t i) {
                const CommitRef& fix = dataset[i].fixing;
                if (algo == Algo::TC) {
                    traces[i] = tcszz(repo, fix, config.tc_options());
                    predictions[i] = traces[i].to_prediction(config.tc_mode_spec());
                } else {
                    predictions[i] = run_algo(repo, fix, algo);
                }
            });
            write_predictions_csv(predictions_csv_path(config, algo), predictions,
                                  config.config_hash());

            if (algo == Algo::TC) {
                std::string dump;
                for (const auto& trace : traces) {
                    for (const auto& chain : trace.chains) {
                        ordered_json j;
                        j["fix"] = chain.fix_id;
                        j["line"] = {{"file", chain.line.file},
                                     {"number", chain.line.number},
                                     {"content", chain.line.content}};
                        ordered_json hops = ordered_json::array();
                        for (const auto& hop : chain.hops)
                            hops.push_back({{"sha", hop.commit_id},
                                            {"role", chain_role_name(hop.role)},
                                            {"matched_line", hop.matched_line}});
                        j["chain"] = std::move(hops);
                        dump += j.dump() + "\n";
                    }
                }
                write_file_or_throw(tc_chains_path(config), dump);
            }

            if (config.attribution) {
                ordered_json all = ordered_json::array();
                for (const auto& p : predictions) {
                    ordered_json lines = ordered_json::array();
                    for (const auto& [line, origin] : p.per_line)
                        lines.push_back({{"file", line.file},
                                         {"number", line.number},
                                         {"content", line.content},
                                         {"origin", origin}});
                    all.push_back({{"fix", p.fix_id},
                                   {"algorithm", algo_name(p.algorithm)},
                                   {"attribution", std::move(lines)}});
                }
                ordered_json doc;
                doc["config"] = config.config_hash();
                doc["predictions"] = std::move(all);
                write_file_or_throw(attribution_json_path(config, algo), doc.dump(2) + "\n");
            }
            std::cout << "ran " << algo_name(algo) << " over " << dataset.size() << " fixes -> "
                      << predictions_csv_path(config, algo).string() << "\n";
        }
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitWriteError;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

int cmd_classify(const RunConfig& config) {
    config.validate();
    if (!std::filesystem::exists(predictions_csv_path(config, Algo::B))) {
        std::cerr << "error: missing B-SZZ predictions (run `run` with algorithm B first)\n";
        return kExitMissingBPredictions;
    }
    RepoHandle repo;
    try {
        repo = RepoHandle::open(config.repo_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRepoError;
    }
    const auto dataset = read_dataset_csv(dataset_csv_path(config), repo);

    // Ghost labels for every fix and every distinct annotated inducer.
    std::string ghosts = header_line(config.config_hash());
    ghosts += "sha,side,kind\n";
    std::set<std::string> rmg_fixes, amg_inducers, seen_inducers;
    for (const auto& link : dataset) {
        if (auto g = classify_ghost(repo, link.fixing, GhostSide::AsFix); g) {
            rmg_fixes.insert(link.fixing.id);
            ghosts += csv_row({link.fixing.id, "fix", ghost_kind_name(*g)});
        }
        for (const auto& id : link.inducing) {
            if (!seen_inducers.insert(id).second) continue;
            if (auto g = classify_ghost(repo, repo.commit(id), GhostSide::AsInducer); g) {
                amg_inducers.insert(id);
                ghosts += csv_row({id, "inducer", ghost_kind_name(*g)});
            }
        }
    }

    std::vector<Algo> algos_present;
    for (Algo algo : config.algorithms)
        if (std::filesystem::exists(predictions_csv_path(config, algo)))
            algos_present.push_back(algo);

    std::string rows;
    std::map<std::string, long> summary;
    for (Algo algo : algos_present) {
        const auto predictions = read_predictions_csv(predictions_csv_path(config, algo));
        std::vector<OutcomeCategory> outcomes(dataset.size());
        std::vector<std::optional<FailureMode>> modes(dataset.size());
        parallel_for(dataset.size(), config.effective_workers(), [&](std::size_t i) {
            const Prediction* p = nullptr;
            for (const auto& cand : predictions)
                if (cand.fix_id == dataset[i].fixing.id) {
                    p = &cand;
                    break;
                }
            Prediction empty;
            empty.fix_id = dataset[i].fixing.id;
            empty.algorithm = algo;
            outcomes[i] = categorize_outcome(repo, dataset[i], p ? *p : empty);
            if (algo == Algo::B && outcomes[i].category == OutcomeKind::FailureWithoutMG)
                modes[i] = classify_failure(repo, dataset[i], config.tc_options());
        });
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            rows += csv_row({dataset[i].fixing.id, algo_name(algo),
                             outcome_kind_name(outcomes[i].category),
                             modes[i] ? failure_mode_name(*modes[i]) : ""});
            ++summary[algo_name(algo) + "/" + outcome_kind_name(outcomes[i].category)];
        }

        if (algo == Algo::B && config.emit_prompts) {
            for (std::size_t i = 0; i < dataset.size(); ++i) {
                if (!modes[i] || *modes[i] == FailureMode::LineChange) continue;
                try {
                    const BugFixLink& link = dataset[i];
                    const std::string scrubbed =
                        scrub_commit_message(repo.message(link.fixing), link.inducing);
                    PromptContext context;
                    const auto parents = repo.parent_ids(link.fixing);
                    const CommitRef parent =
                        parents.empty() ? link.fixing : repo.commit(parents[0]);
                    const auto diff = repo.commit_diff(link.fixing);
                    std::string first_file;
                    for (const auto& f : diff->files) {
                        first_file = f.old_path.empty() ? f.new_path : f.old_path;
                        if (!first_file.empty()) break;
                    }
                    if (*modes[i] == FailureMode::WithinFile) {
                        context.file = first_file;
                        std::set<std::string> names;
                        for (const auto& span : extract_functions(repo, parent, first_file))
                            if (names.insert(span.name).second)
                                context.function_names.push_back(span.name);
                    } else if (*modes[i] == FailureMode::FunctionLog ||
                               *modes[i] == FailureMode::FunctionBlame) {
                        // all changed functions' code, at the fix's parent
                        std::string code;
                        std::set<std::string> files;
                        for (const auto& line : removed_lines(repo, link.fixing))
                            files.insert(line.file);
                        for (const auto& file : files) {
                            const auto content = split_lines(repo.file_at(parent, file));
                            for (const auto& span : extract_functions(repo, parent, file)) {
                                bool covers = false;
                                for (const auto& line : removed_lines(repo, link.fixing))
                                    if (line.file == file && line.number >= span.start_line &&
                                        line.number <= span.end_line)
                                        covers = true;
                                if (!covers) continue;
                                for (int n = span.start_line;
                                     n <= span.end_line &&
                                     static_cast<std::size_t>(n) <= content.size();
                                     ++n)
                                    code += content[static_cast<std::size_t>(n - 1)] + "\n";
                            }
                        }
                        context.function_code = code;
                    }
                    const std::string prompt = emit_llm_prompt(*modes[i], scrubbed, context);
                    write_file_or_throw(prompts_dir(config) /
                                            (link.fixing.id + "." + failure_mode_name(*modes[i]) +
                                             ".prompt.txt"),
                                        prompt);
                } catch (const MissingContext& e) {
                    log_warn("prompt skipped for " + dataset[i].fixing.id + ": " + e.what());
                }
            }
        }
    }

    try {
        write_file_or_throw(ghosts_csv_path(config), ghosts);
        std::string classification = header_line(config.config_hash());
        classification += "fix_sha,algorithm,category,failure_mode\n";
        classification += rows;
        write_file_or_throw(classification_csv_path(config), classification);
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitWriteError;
    }

    for (const auto& [key, count] : summary) std::cout << key << ": " << count << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

namespace {

// Per-year recall means; years with fewer than 200 fixes merge into the
// following year so sparse early years do not distort the series.
std::vector<double> recall_series_by_year(const std::vector<BugFixLink>& dataset,
                                          const std::vector<Prediction>& predictions) {
    std::map<int, std::pair<double, int>> by_year;  // year -> (recall sum, n)
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const std::time_t t = static_cast<std::time_t>(dataset[i].fixing.timestamp);
        std::tm tm_utc{};
        gmtime_r(&t, &tm_utc);
        const int year = tm_utc.tm_year + 1900;
        const PerFixScore s = per_fix_scores(dataset[i], predictions[i]);
        by_year[year].first += s.recall;
        by_year[year].second += 1;
    }
    std::vector<std::pair<double, int>> groups;
    for (const auto& [year, acc] : by_year) {
        if (!groups.empty() && groups.back().second < 200) {
            groups.back().first += acc.first;
            groups.back().second += acc.second;
        } else {
            groups.push_back(acc);
        }
    }
    if (groups.size() >= 2 && groups.back().second < 200) {
        groups[groups.size() - 2].first += groups.back().first;
        groups[groups.size() - 2].second += groups.back().second;
        groups.pop_back();
    }
    std::vector<double> series;
    for (const auto& [sum, n] : groups) series.push_back(n ? sum / n : 0.0);
    return series;
}

}  // namespace

int cmd_report(const RunConfig& config) {
    config.validate();
    if (!std::filesystem::exists(dataset_csv_path(config)) ||
        !std::filesystem::exists(classification_csv_path(config))) {
        std::cerr << "error: report needs dataset.csv and classification.csv\n";
        return kExitMissingInputs;
    }
    RepoHandle repo;
    try {
        repo = RepoHandle::open(config.repo_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRepoError;
    }
    const auto dataset = read_dataset_csv(dataset_csv_path(config), repo);

    std::vector<Algo> algos;
    std::map<Algo, std::vector<Prediction>> predictions;
    for (Algo algo : config.algorithms) {
        const auto path = predictions_csv_path(config, algo);
        if (!std::filesystem::exists(path)) continue;
        auto loaded = read_predictions_csv(path);
        // align with dataset order
        std::map<std::string, Prediction> by_fix;
        for (auto& p : loaded) by_fix[p.fix_id] = std::move(p);
        std::vector<Prediction> aligned;
        aligned.reserve(dataset.size());
        for (const auto& link : dataset) {
            auto it = by_fix.find(link.fixing.id);
            if (it == by_fix.end()) {
                Prediction empty;
                empty.fix_id = link.fixing.id;
                empty.algorithm = algo;
                aligned.push_back(std::move(empty));
            } else {
                aligned.push_back(std::move(it->second));
            }
        }
        algos.push_back(algo);
        predictions.emplace(algo, std::move(aligned));
    }
    if (algos.empty()) {
        std::cerr << "error: no prediction files found in " << config.output_dir.string() << "\n";
        return kExitMissingInputs;
    }

    ordered_json report;
    report["config"] = config.config_hash();

    // Table-2-style metric rows.
    ordered_json rows = ordered_json::array();
    std::map<Algo, MetricRow> metric_rows;
    for (Algo algo : algos) {
        const MetricRow row = aggregate(algo, dataset, predictions.at(algo));
        metric_rows[algo] = row;
        rows.push_back({{"algorithm", algo_name(algo)},
                        {"precision", row.precision},
                        {"recall", row.recall},
                        {"f1", row.f1},
                        {"n_fixes_recall", row.n_fixes_recall},
                        {"n_fixes_precision", row.n_fixes_precision}});
    }
    report["algorithms"] = std::move(rows);

    // Complementarity: pairwise IoU and unique contributions.
    std::map<Algo, CorrectSet> correct;
    for (Algo algo : algos) correct[algo] = correct_pairs(dataset, predictions.at(algo));
    ordered_json order = ordered_json::array();
    for (Algo algo : algos) order.push_back(algo_name(algo));
    ordered_json matrix = ordered_json::array();
    for (Algo a : algos) {
        ordered_json line = ordered_json::array();
        for (Algo b : algos) line.push_back(overlap(correct.at(a), correct.at(b)));
        matrix.push_back(std::move(line));
    }
    report["overlap"] = {{"order", std::move(order)}, {"matrix", std::move(matrix)}};

    ordered_json unique;
    for (Algo algo : algos) {
        CorrectSet others;
        for (Algo other : algos)
            if (other != algo)
                others.insert(correct.at(other).begin(), correct.at(other).end());
        const UniqueContribution uc = unique_contribution(correct.at(algo), others);
        unique[algo_name(algo)] = {
            {"numerator", uc.numerator}, {"denominator", uc.denominator}, {"ratio", uc.ratio}};
    }
    report["unique"] = std::move(unique);

    // Outcome categories from the classification stage.
    ordered_json categories;
    {
        const auto rows_csv = csv_parse(read_file_or_throw(classification_csv_path(config)));
        std::map<std::string, std::map<std::string, long>> counts;
        std::map<std::string, std::map<std::string, long>> failure_modes;
        for (std::size_t i = 1; i < rows_csv.size(); ++i) {
            if (rows_csv[i].size() < 4) continue;
            ++counts[rows_csv[i][1]][rows_csv[i][2]];
            if (!rows_csv[i][3].empty()) ++failure_modes[rows_csv[i][1]][rows_csv[i][3]];
        }
        for (const auto& [algo, per] : counts) {
            ordered_json j;
            for (const auto& [cat, n] : per) j[cat] = n;
            if (failure_modes.count(algo)) {
                ordered_json fm;
                for (const auto& [mode, n] : failure_modes.at(algo)) fm[mode] = n;
                j["failure_modes"] = std::move(fm);
            }
            categories[algo] = std::move(j);
        }
    }
    report["categories"] = std::move(categories);

    // Ghost frequencies and ablations.
    const GhostFrequencies freq = ghost_frequencies(repo, dataset, config.effective_workers());
    report["ghosts"] = {{"rmg_fixes", freq.rmg_fixes},
                        {"total_fixes", freq.total_fixes},
                        {"rmg_rate_over_fixes", freq.rmg_rate_over_fixes()},
                        {"amg_commits", freq.amg_commits},
                        {"total_commits", freq.total_commits},
                        {"amg_rate_over_all_commits", freq.amg_rate_over_all_commits()},
                        {"amg_inducer_instances", freq.amg_inducer_instances},
                        {"total_inducer_instances", freq.total_inducer_instances},
                        {"amg_rate_over_inducers", freq.amg_rate_over_inducers()},
                        {"fixes_failing_from_amg", freq.fixes_failing_from_amg}};

    std::set<std::string> rmg_fixes, amg_inducers;
    for (const auto& link : dataset) {
        if (classify_ghost(repo, link.fixing, GhostSide::AsFix)) rmg_fixes.insert(link.fixing.id);
        for (const auto& id : link.inducing)
            if (classify_ghost(repo, repo.commit(id), GhostSide::AsInducer))
                amg_inducers.insert(id);
    }
    ordered_json ablation;
    const auto ablation_rows = [&](const GhostFilter& filter) {
        ordered_json out = ordered_json::array();
        for (Algo algo : algos) {
            const MetricRow row = ghost_ablation(algo, dataset, predictions.at(algo), filter,
                                                 rmg_fixes, amg_inducers);
            out.push_back({{"algorithm", algo_name(algo)},
                           {"precision", row.precision},
                           {"recall", row.recall},
                           {"f1", row.f1}});
        }
        return out;
    };
    ablation["filter_rmg"] = ablation_rows(GhostFilter{true, false});
    ablation["filter_amg"] = ablation_rows(GhostFilter{false, true});
    ablation["filter_both"] = ablation_rows(GhostFilter{true, true});
    report["ghost_ablation"] = std::move(ablation);

    // TC-SZZ vs the rest, on per-year recall series.
    ordered_json stats;
    if (predictions.count(Algo::TC)) {
        const auto tc_series = recall_series_by_year(dataset, predictions.at(Algo::TC));
        for (Algo algo : algos) {
            if (algo == Algo::TC) continue;
            const auto other = recall_series_by_year(dataset, predictions.at(algo));
            if (tc_series.size() < 2 || other.size() != tc_series.size()) continue;
            try {
                const TTestResult t = compare_recall_series(tc_series, other);
                stats["TC_vs_" + algo_name(algo)] = {{"t_statistic", t.t_statistic},
                                                     {"p_value", t.p_value},
                                                     {"cohens_d", t.cohens_d}};
            } catch (const DegenerateVariance&) {
                stats["TC_vs_" + algo_name(algo)] = "degenerate";
            }
        }
    }
    report["stats"] = std::move(stats);

    try {
        write_file_or_throw(report_json_path(config), report.dump(2) + "\n");
        std::string table = header_line(config.config_hash());
        table += "algorithm,precision,recall,f1\n";
        char buf[128];
        for (Algo algo : algos) {
            const MetricRow& row = metric_rows.at(algo);
            std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%.4f\n", algo_name(algo).c_str(),
                          row.precision, row.recall, row.f1);
            table += buf;
        }
        write_file_or_throw(table_csv_path(config), table);
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitWriteError;
    }

    for (Algo algo : algos) {
        const MetricRow& row = metric_rows.at(algo);
        std::printf("%-4s P %.2f  R %.2f  F1 %.2f\n", algo_name(algo).c_str(), row.precision,
                    row.recall, row.f1);
    }
    return kExitOk;
}

int cmd_fixture_build(const std::filesystem::path& script_path,
                      const std::filesystem::path& out_dir) {
    try {
        const FixtureScript script = FixtureScript::parse(read_file_or_throw(script_path));
        const FixtureMap map = build_fixture(script, out_dir);
        for (const auto& step : script.steps)
            std::cout << step.label << " " << map.id(step.label) << "\n";
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRepoError;
    }
    return kExitOk;
}

}  // namespace szz
