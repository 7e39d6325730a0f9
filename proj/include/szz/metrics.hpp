// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "szz/fixes_miner.hpp"
#include "szz/szz_suite.hpp"

namespace szz {

struct PerFixScore {
    double recall = 0.0;
    std::optional<double> precision;  // undefined for empty predictions
};

// recall_i = |truth ∩ predicted| / |truth|; precision_i likewise over the
// prediction size, defined only when the prediction is non-empty.
PerFixScore per_fix_scores(const BugFixLink& truth, const Prediction& predicted);

struct MetricRow {
    Algo algorithm = Algo::B;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int n_fixes_recall = 0;     // recall denominator: all fixes
    int n_fixes_precision = 0;  // precision denominator: fixes with predictions
};

// Means over the dataset: recall over every fix (empty predictions score 0),
// precision over fixes with non-empty predictions, F1 as the harmonic mean
// of the two. Summation runs in dataset order, so results are bit-stable
// for any worker count.
MetricRow aggregate(Algo algorithm, const std::vector<BugFixLink>& dataset,
                    const std::vector<Prediction>& predictions);

struct GhostFilter {
    bool drop_rmg_fixes = false;
    bool drop_amg_inducers = false;
};

// Recomputes the aggregate after removing Remove-Mapping-Ghost fixes and/or
// Add-Mapping-Ghost inducers from the truth; fixes whose truth becomes empty
// are dropped entirely.
MetricRow ghost_ablation(Algo algorithm, const std::vector<BugFixLink>& dataset,
                         const std::vector<Prediction>& predictions, const GhostFilter& filter,
                         const std::set<std::string>& rmg_fix_ids,
                         const std::set<std::string>& amg_inducer_ids);

// (fix, inducer) pairs an algorithm got right.
using CorrectSet = std::set<std::pair<std::string, std::string>>;

CorrectSet correct_pairs(const std::vector<BugFixLink>& dataset,
                         const std::vector<Prediction>& predictions);

// Intersection over union; two empty sets count as fully overlapping.
double overlap(const CorrectSet& a, const CorrectSet& b);

struct UniqueContribution {
    long numerator = 0;
    long denominator = 0;
    double ratio = 0.0;
};

UniqueContribution unique_contribution(const CorrectSet& mine, const CorrectSet& others);

struct TTestResult {
    double t_statistic = 0.0;
    double p_value = 1.0;
    double cohens_d = 0.0;
};

// Two-sample pooled-variance t test (two-sided p) with the matching pooled-SD
// Cohen's d. Throws DegenerateVariance when both samples are constant with
// equal means. Inputs with |skewness| > 2 are logged as a warning.
TTestResult compare_recall_series(std::span<const double> a, std::span<const double> b);

double sample_skewness(std::span<const double> xs);

// Regularized incomplete beta function I_x(a, b); exposed for the tests.
double incomplete_beta(double a, double b, double x);

}  // namespace szz
