// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "szz/errors.hpp"
#include "szz/util.hpp"

namespace szz {

PerFixScore per_fix_scores(const BugFixLink& truth, const Prediction& predicted) {
    if (truth.fixing.id != predicted.fix_id)
        throw MismatchedFix("truth is for " + truth.fixing.id + ", prediction for " +
                            predicted.fix_id);
    std::size_t hit = 0;
    for (const auto& id : truth.inducing)
        if (predicted.contains(id)) ++hit;

    PerFixScore score;
    score.recall = truth.inducing.empty()
                       ? 0.0
                       : static_cast<double>(hit) / static_cast<double>(truth.inducing.size());
    if (!predicted.inducing.empty())
        score.precision = static_cast<double>(hit) / static_cast<double>(predicted.inducing.size());
    return score;
}

namespace {

const Prediction& prediction_for(const std::vector<Prediction>& predictions,
                                 const std::string& fix_id) {
    for (const auto& p : predictions)
        if (p.fix_id == fix_id) return p;
    throw MismatchedFix("no prediction for fix " + fix_id);
}

MetricRow aggregate_impl(Algo algorithm, const std::vector<BugFixLink>& dataset,
                         const std::vector<Prediction>& predictions) {
    MetricRow row;
    row.algorithm = algorithm;
    double recall_sum = 0.0, precision_sum = 0.0;
    for (const auto& link : dataset) {
        const Prediction& p = prediction_for(predictions, link.fixing.id);
        const PerFixScore s = per_fix_scores(link, p);
        recall_sum += s.recall;
        ++row.n_fixes_recall;
        if (s.precision) {
            precision_sum += *s.precision;
            ++row.n_fixes_precision;
        }
    }
    row.recall = row.n_fixes_recall ? recall_sum / row.n_fixes_recall : 0.0;
    row.precision = row.n_fixes_precision ? precision_sum / row.n_fixes_precision : 0.0;
    row.f1 = (row.precision + row.recall) > 0.0
                 ? 2.0 * row.precision * row.recall / (row.precision + row.recall)
                 : 0.0;
    return row;
}

}  // namespace

MetricRow aggregate(Algo algorithm, const std::vector<BugFixLink>& dataset,
                    const std::vector<Prediction>& predictions) {
    return aggregate_impl(algorithm, dataset, predictions);
}

MetricRow ghost_ablation(Algo algorithm, const std::vector<BugFixLink>& dataset,
                         const std::vector<Prediction>& predictions, const GhostFilter& filter,
                         const std::set<std::string>& rmg_fix_ids,
                         const std::set<std::string>& amg_inducer_ids) {
    std::vector<BugFixLink> kept;
    kept.reserve(dataset.size());
    for (const auto& link : dataset) {
        if (filter.drop_rmg_fixes && rmg_fix_ids.count(link.fixing.id)) continue;
        BugFixLink copy = link;
        if (filter.drop_amg_inducers) {
            std::erase_if(copy.inducing,
                          [&](const std::string& id) { return amg_inducer_ids.count(id) > 0; });
            if (copy.inducing.empty()) continue;
        }
        kept.push_back(std::move(copy));
    }
    return aggregate_impl(algorithm, kept, predictions);
}

CorrectSet correct_pairs(const std::vector<BugFixLink>& dataset,
                         const std::vector<Prediction>& predictions) {
    CorrectSet out;
    for (const auto& link : dataset) {
        const Prediction& p = prediction_for(predictions, link.fixing.id);
        for (const auto& id : link.inducing)
            if (p.contains(id)) out.emplace(link.fixing.id, id);
    }
    return out;
}

double overlap(const CorrectSet& a, const CorrectSet& b) {
    if (a.empty() && b.empty()) return 1.0;  // degenerate IoU, by convention
    std::size_t inter = 0;
    for (const auto& pair : a) inter += b.count(pair);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

UniqueContribution unique_contribution(const CorrectSet& mine, const CorrectSet& others) {
    UniqueContribution out;
    for (const auto& pair : mine)
        if (!others.count(pair)) ++out.numerator;
    std::size_t inter = 0;
    for (const auto& pair : mine) inter += others.count(pair);
    out.denominator = static_cast<long>(mine.size() + others.size() - inter);
    out.ratio = out.denominator == 0 ? 0.0
                                     : static_cast<double>(out.numerator) /
                                           static_cast<double>(out.denominator);
    return out;
}

namespace {

// Continued-fraction evaluation of the incomplete beta function
// (Lentz's algorithm, as in the standard numerical recipes).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double mean_of(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs, double mean) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double sample_skewness(std::span<const double> xs) {
    if (xs.size() < 3) return 0.0;
    const double n = static_cast<double>(xs.size());
    const double mean = mean_of(xs);
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 == 0.0) return 0.0;
    return m3 / std::pow(m2, 1.5);
}

TTestResult compare_recall_series(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw DegenerateVariance("both samples need at least two values");

    if (std::fabs(sample_skewness(a)) > 2.0 || std::fabs(sample_skewness(b)) > 2.0)
        log_warn("recall series is strongly skewed; the t test may be unreliable");

    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double m1 = mean_of(a);
    const double m2 = mean_of(b);
    const double v1 = sample_variance(a, m1);
    const double v2 = sample_variance(b, m2);
    const double df = n1 + n2 - 2.0;
    const double pooled_var = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / df;
    const double pooled_sd = std::sqrt(pooled_var);

    if (pooled_sd == 0.0) {
        if (m1 == m2)
            throw DegenerateVariance("both samples constant with equal means; d undefined");
        TTestResult degenerate;
        degenerate.t_statistic = m1 > m2 ? HUGE_VAL : -HUGE_VAL;
        degenerate.p_value = 0.0;
        degenerate.cohens_d = m1 > m2 ? HUGE_VAL : -HUGE_VAL;
        return degenerate;
    }

    TTestResult result;
    result.t_statistic = (m1 - m2) / (pooled_sd * std::sqrt(1.0 / n1 + 1.0 / n2));
    result.cohens_d = (m1 - m2) / pooled_sd;
    const double t2 = result.t_statistic * result.t_statistic;
    result.p_value = incomplete_beta(df / 2.0, 0.5, df / (df + t2));
    return result;
}

}  // namespace szz
