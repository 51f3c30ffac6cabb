// SPDX-License-Identifier: Apache-2.0

#include "vtg/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vtg/errors.hpp"

namespace vtg {

namespace {

// Slack for boundary comparisons on decimal second values, e.g. (30.3 - 10) / 0.1.
constexpr double kBoundaryEps = 1e-9;

void check_spec(const WindowSpec& spec) {
    if (!std::isfinite(spec.wide) || spec.wide <= 0.0) {
        throw InvalidArgument("window width must be positive");
    }
    if (!std::isfinite(spec.step) || spec.step <= 0.0) {
        throw InvalidArgument("window step must be positive");
    }
}

} // namespace

std::vector<TimeInterval> split_equal(const VideoMeta& video, int m) {
    if (m < 1) {
        throw InvalidArgument("clip count must be at least 1, got " + std::to_string(m));
    }
    const double clip = video.duration / m;
    std::vector<TimeInterval> clips;
    clips.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double start = i * clip;
        const double end = (i + 1 == m) ? video.duration : (i + 1) * clip;
        clips.emplace_back(start, end);
    }
    return clips;
}

long window_count(double duration, const WindowSpec& spec) {
    check_spec(spec);
    if (spec.wide >= duration) {
        return 1;
    }
    return static_cast<long>(std::floor((duration - spec.wide) / spec.step + kBoundaryEps)) + 1;
}

std::vector<TimeInterval> generate_windows(double duration, const WindowSpec& spec, bool flush_tail) {
    check_spec(spec);
    if (!std::isfinite(duration) || duration <= 0.0) {
        throw InvalidArgument("duration must be positive");
    }
    if (spec.wide >= duration) {
        return {TimeInterval(0.0, duration)};
    }

    const long k = window_count(duration, spec);
    std::vector<TimeInterval> windows;
    windows.reserve(static_cast<std::size_t>(k) + 1);
    for (long i = 0; i < k; ++i) {
        const double start = static_cast<double>(i) * spec.step;
        // Absorb float drift so the last window never pokes past the video.
        const double end = std::min(start + spec.wide, duration);
        windows.emplace_back(start, end);
    }
    if (flush_tail && windows.back().end() < duration - kBoundaryEps) {
        windows.emplace_back(duration - spec.wide, duration);
    }
    return windows;
}

} // namespace vtg
