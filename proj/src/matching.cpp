// SPDX-License-Identifier: Apache-2.0

#include "vtg/matching.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vtg/errors.hpp"

namespace vtg {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw InvalidArgument("cosine similarity of vectors with dimensions " + std::to_string(a.size()) + " and " +
                              std::to_string(b.size()));
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): identical inputs then give exactly 1.
    return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

ScoreMatrix build_score_matrix(std::span<const CaptionSet> caption_sets, const Query& query, Embedder& embedder,
                               std::span<const Granularity> rows) {
    std::vector<Granularity> ordered;
    for (Granularity g : kAllGranularities) {
        if (std::find(rows.begin(), rows.end(), g) != rows.end()) {
            ordered.push_back(g);
        }
    }
    if (ordered.empty()) {
        throw InvalidArgument("score matrix needs at least one granularity row");
    }

    std::vector<TimeInterval> cols;
    cols.reserve(caption_sets.size());
    for (const auto& set : caption_sets) {
        if (!cols.empty() && set.segment.start() < cols.back().start()) {
            throw InvalidArgument("caption sets must be sorted by segment start");
        }
        for (Granularity g : ordered) {
            if (!set.covers(g)) {
                throw InvalidArgument("caption set for " + set.segment.to_string() + " lacks granularity " +
                                      std::string(name(g)));
            }
        }
        cols.push_back(set.segment);
    }

    ScoreMatrix matrix(ordered, cols);
    if (cols.empty()) {
        return matrix;
    }
    const auto query_vec = embedder.embed(query.text());
    for (std::size_t j = 0; j < caption_sets.size(); ++j) {
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            const auto& text = caption_sets[j].captions.at(ordered[i]);
            const auto caption_vec = embedder.embed(text);
            matrix.set(i, j, cosine_similarity(caption_vec, query_vec));
        }
    }
    return matrix;
}

std::vector<double> normalize_by_max(std::span<const double> scores) {
    std::vector<double> out(scores.size(), 0.0);
    double peak = 0.0;
    for (double s : scores) {
        peak = std::max(peak, s);
    }
    if (peak <= 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = scores[i] > 0.0 ? scores[i] / peak : 0.0;
    }
    return out;
}

namespace {

std::vector<double> row_of(const ScoreMatrix& m, std::size_t r) {
    std::vector<double> row(m.col_count());
    for (std::size_t j = 0; j < m.col_count(); ++j) {
        row[j] = m.at(r, j);
    }
    return row;
}

} // namespace

ClipScores fuse(const ScoreMatrix& matrix, FusionMethod method) {
    const std::size_t n = matrix.row_count();
    const std::size_t m = matrix.col_count();
    if (m == 0) {
        throw InvalidArgument("cannot fuse a matrix without clips");
    }
    if (n == 0) {
        throw InvalidArgument("cannot fuse a matrix without granularity rows");
    }

    std::vector<double> combined(m, 0.0);
    switch (method) {
    case FusionMethod::BaselineActionOnly: {
        const auto r = matrix.row_of(Granularity::Action);
        if (!r) {
            throw InvalidArgument("baseline fusion needs the action granularity row");
        }
        combined = row_of(matrix, *r);
        break;
    }
    case FusionMethod::NormalizeAfterSum:
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                combined[j] += matrix.at(i, j);
            }
        }
        break;
    case FusionMethod::SumAfterNormalize:
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = normalize_by_max(row_of(matrix, i));
            for (std::size_t j = 0; j < m; ++j) {
                combined[j] += row[j];
            }
        }
        break;
    case FusionMethod::NormalizeAfterRowMax: {
        std::size_t best_row = 0;
        double best = matrix.at(0, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (matrix.at(i, j) > best) {
                    best = matrix.at(i, j);
                    best_row = i;
                }
            }
        }
        combined = row_of(matrix, best_row);
        break;
    }
    case FusionMethod::NormalizeAfterColumnMax:
        for (std::size_t j = 0; j < m; ++j) {
            double peak = matrix.at(0, j);
            for (std::size_t i = 1; i < n; ++i) {
                peak = std::max(peak, matrix.at(i, j));
            }
            combined[j] = peak;
        }
        break;
    }
    return ClipScores{matrix.cols(), normalize_by_max(combined)};
}

TimeInterval select_moment(const ClipScores& scores, double threshold) {
    const auto& clips = scores.clips;
    const auto& s = scores.scores;
    if (clips.empty()) {
        throw InvalidArgument("cannot select a moment from an empty clip list");
    }
    if (clips.size() != s.size()) {
        throw InvalidArgument("clip and score counts differ");
    }
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw InvalidArgument("selection threshold must be within (0, 1]");
    }

    std::size_t best_begin = 0;
    std::size_t best_len = 0;
    double best_mean = 0.0;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] < threshold) {
            ++i;
            continue;
        }
        std::size_t j = i;
        double sum = 0.0;
        while (j < s.size() && s[j] >= threshold) {
            sum += s[j];
            ++j;
        }
        const std::size_t len = j - i;
        const double mean = sum / static_cast<double>(len);
        // Runs are visited by increasing start, so strict comparisons keep the earliest.
        if (len > best_len || (len == best_len && mean > best_mean)) {
            best_begin = i;
            best_len = len;
            best_mean = mean;
        }
        i = j;
    }

    if (best_len == 0) {
        const auto peak = std::max_element(s.begin(), s.end());
        return clips[static_cast<std::size_t>(peak - s.begin())];
    }

    double start = clips[best_begin].start();
    double end = clips[best_begin].end();
    for (std::size_t k = best_begin; k < best_begin + best_len; ++k) {
        start = std::min(start, clips[k].start());
        end = std::max(end, clips[k].end());
    }
    return TimeInterval(start, end);
}

} // namespace vtg
