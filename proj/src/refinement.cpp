// SPDX-License-Identifier: Apache-2.0

#include "vtg/refinement.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "vtg/errors.hpp"

namespace vtg {

void PipelineConfig::validate() const {
    if (clip_count < 1) {
        throw InvalidArgument("clip count must be at least 1");
    }
    if (!(window.wide > 0.0) || !(window.step > 0.0)) {
        throw InvalidArgument("window width and step must be positive");
    }
    if (!(refine_gate_iou > 0.0 && refine_gate_iou <= 1.0)) {
        throw InvalidArgument("refinement IoU gate must be within (0, 1]");
    }
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw InvalidArgument("threshold must be within (0, 1]");
    }
    if (granularities.empty()) {
        throw InvalidArgument("at least one granularity is required");
    }
    if (fusion == FusionMethod::BaselineActionOnly &&
        std::find(granularities.begin(), granularities.end(), Granularity::Action) == granularities.end()) {
        throw InvalidArgument("baseline fusion needs the action granularity");
    }
}

Grounder::Grounder(PipelineConfig config, CaptionProvider& captioner, Embedder& embedder)
    : config_(std::move(config)), captioner_(captioner), embedder_(embedder) {
    config_.validate();
}

ClipScores Grounder::score_segments(const VideoMeta& video, const Query& query,
                                    const std::vector<TimeInterval>& segments) const {
    std::vector<CaptionSet> sets;
    sets.reserve(segments.size());
    for (const auto& segment : segments) {
        sets.push_back(caption_segment_all(captioner_, video.video_id, segment, config_.granularities));
    }
    try {
        const auto matrix = build_score_matrix(sets, query, embedder_, config_.granularities);
        return fuse(matrix, config_.fusion);
    } catch (const InvalidArgument& e) {
        throw InvalidArgument("video '" + video.video_id + "': " + e.what());
    }
}

CoarseResult Grounder::ground_coarse(const VideoMeta& video, const Query& query) const {
    auto scores = score_segments(video, query, split_equal(video, config_.clip_count));
    auto moment = select_moment(scores, config_.threshold);
    return {moment, std::move(scores)};
}

TimeInterval Grounder::refine_moment(const VideoMeta& video, const Query& query, const TimeInterval& coarse) const {
    if (coarse.end() > video.duration + 1e-9) {
        throw InvalidArgument("coarse moment " + coarse.to_string() + " lies outside video '" + video.video_id + "'");
    }
    std::vector<TimeInterval> qualifying;
    for (const auto& window : generate_windows(video.duration, config_.window, config_.flush_tail)) {
        if (temporal_iou(window, coarse) > config_.refine_gate_iou) {
            qualifying.push_back(window);
        }
    }
    if (qualifying.empty()) {
        return coarse;
    }
    std::stable_sort(qualifying.begin(), qualifying.end(),
                     [](const TimeInterval& a, const TimeInterval& b) { return a.start() < b.start(); });
    return select_moment(score_segments(video, query, qualifying), config_.threshold);
}

MomentPrediction Grounder::ground(const VideoMeta& video, const Query& query) const {
    auto coarse = ground_coarse(video, query);
    TimeInterval moment = coarse.moment;
    if (config_.refine) {
        moment = refine_moment(video, query, coarse.moment);
    }
    if (moment.end() > video.duration + 1e-9) {
        throw InternalError("grounded moment " + moment.to_string() + " exceeds duration of video '" +
                            video.video_id + "'");
    }
    return MomentPrediction{video.video_id,   query,
                            moment,           coarse.moment,
                            config_.fusion,   std::move(coarse.scores.scores),
                            config_.refine};
}

std::vector<GroundingOutcome> ground_all(const Grounder& grounder, std::span<const GroundingJob> jobs, int workers,
                                         const ProgressFn& progress) {
    if (workers < 1) {
        throw InvalidArgument("worker count must be at least 1");
    }
    std::vector<GroundingOutcome> outcomes(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    auto work = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                outcomes[i].prediction = grounder.ground(jobs[i].video, jobs[i].query);
            } catch (...) {
                outcomes[i].error = std::current_exception();
            }
            const auto finished = ++done;
            if (progress) {
                progress(finished, jobs.size());
            }
        }
    };

    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(workers), jobs.size());
    if (threads <= 1) {
        work();
        return outcomes;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(work);
    }
    pool.clear();
    return outcomes;
}

} // namespace vtg
