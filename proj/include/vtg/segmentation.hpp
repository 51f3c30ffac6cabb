// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "vtg/core.hpp"

namespace vtg {

/// Sliding-window geometry in seconds.
struct WindowSpec {
    double wide = 10.0;
    double step = 5.0;
};

/// Splits the video into m contiguous clips of length duration / m. The last
/// clip ends exactly at the duration.
std::vector<TimeInterval> split_equal(const VideoMeta& video, int m);

/// Sliding windows [(i-1)*step, (i-1)*step + wide) for i = 1..k with
/// k = floor((duration - wide) / step) + 1.
///
/// When wide >= duration a single window covering the whole video is
/// returned. With flush_tail, a final [duration - wide, duration) window is
/// appended if the regular windows stop short of the end.
std::vector<TimeInterval> generate_windows(double duration, const WindowSpec& spec, bool flush_tail);

/// Number of regular windows for wide < duration.
long window_count(double duration, const WindowSpec& spec);

} // namespace vtg
