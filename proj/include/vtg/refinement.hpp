// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vtg/core.hpp"
#include "vtg/matching.hpp"
#include "vtg/providers.hpp"
#include "vtg/segmentation.hpp"

namespace vtg {

struct PipelineConfig {
    int clip_count = 5;
    WindowSpec window{10.0, 5.0};
    /// Windows must overlap the coarse moment with IoU strictly above this.
    double refine_gate_iou = 0.7;
    double threshold = 0.8;
    FusionMethod fusion = FusionMethod::NormalizeAfterColumnMax;
    bool refine = true;
    bool flush_tail = false;
    /// Instructions to caption with; single entries give the per-instruction ablation.
    std::vector<Granularity> granularities{kAllGranularities.begin(), kAllGranularities.end()};

    void validate() const;
};

struct CoarseResult {
    TimeInterval moment;
    ClipScores scores;
};

/// Coarse-to-fine grounding over a captioner/embedder pair. Holds no
/// per-query state, so one instance may serve many threads.
class Grounder {
public:
    Grounder(PipelineConfig config, CaptionProvider& captioner, Embedder& embedder);

    /// Equal split into clip_count clips, caption, match, fuse, select.
    CoarseResult ground_coarse(const VideoMeta& video, const Query& query) const;

    /// Re-scores sliding windows whose IoU with `coarse` clears the gate and
    /// selects over them in start order. Returns `coarse` when no window
    /// qualifies.
    TimeInterval refine_moment(const VideoMeta& video, const Query& query, const TimeInterval& coarse) const;

    MomentPrediction ground(const VideoMeta& video, const Query& query) const;

    const PipelineConfig& config() const noexcept { return config_; }

private:
    ClipScores score_segments(const VideoMeta& video, const Query& query,
                              const std::vector<TimeInterval>& segments) const;

    PipelineConfig config_;
    CaptionProvider& captioner_;
    Embedder& embedder_;
};

struct GroundingJob {
    VideoMeta video;
    Query query;
};

/// Exactly one of `prediction` / `error` is set.
struct GroundingOutcome {
    std::optional<MomentPrediction> prediction;
    std::exception_ptr error;
};

/// Called after each finished job with (finished, total); may run on any worker.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Grounds every job on `workers` threads. Outcomes come back in job order
/// and do not depend on the worker count.
std::vector<GroundingOutcome> ground_all(const Grounder& grounder, std::span<const GroundingJob> jobs, int workers,
                                         const ProgressFn& progress = {});

} // namespace vtg
