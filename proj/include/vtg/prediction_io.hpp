// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vtg/core.hpp"

namespace vtg {

/// {"video_id","query","ts","te","coarse_ts","coarse_te","fusion","refined"}, in that order.
nlohmann::ordered_json prediction_to_json(const MomentPrediction& prediction);

/// One JSON line without the trailing newline.
std::string prediction_line(const MomentPrediction& prediction);

/// A prediction as read back from a JSON-lines file.
struct PredictionRecord {
    std::string video_id;
    std::string query;
    TimeInterval moment;
    std::optional<TimeInterval> coarse_moment;
    std::optional<int> fusion;
    bool refined = false;
    std::size_t line = 0;
};

PredictionRecord parse_prediction(const nlohmann::json& j);

/// Throws IoError when unreadable and FormatError naming the line on bad records.
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);

} // namespace vtg
