// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "vtg/core.hpp"
#include "vtg/providers.hpp"

namespace vtg {

/// dot(a, b) / (|a| |b|), clamped to [-1, 1]. A zero-norm operand yields 0.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Rows follow the fixed granularity order restricted to `rows`; columns
/// follow the caption sets. Entry (i, j) is the cosine between the query
/// and clip j's caption for granularity i. The query is embedded once.
ScoreMatrix build_score_matrix(std::span<const CaptionSet> caption_sets, const Query& query, Embedder& embedder,
                               std::span<const Granularity> rows = kAllGranularities);

/// Scales a score vector so its maximum is 1. Negative entries carry no
/// evidence and become 0; a vector without positive entries becomes all 0.
std::vector<double> normalize_by_max(std::span<const double> scores);

/// Collapses the granularity x clip matrix into one score per clip:
///
///   (1) the Action row;
///   (2) column sums;
///   (3) each row divided by its own max, then column sums;
///   (4) the row holding the global maximum (lowest row on ties);
///   (5) column maxima.
///
/// Every method finishes with normalize_by_max.
ClipScores fuse(const ScoreMatrix& matrix, FusionMethod method);

/// Longest run of consecutive clips scoring >= threshold, reported as the
/// span from the run's earliest start to its latest end. Ties prefer the
/// higher mean score, then the earlier start. With no clip at or above the
/// threshold, the single best clip (earliest on ties) is returned.
TimeInterval select_moment(const ClipScores& scores, double threshold);

} // namespace vtg
