// SPDX-License-Identifier: Apache-2.0

#include "vtg/prediction_io.hpp"

#include <fstream>

#include "vtg/errors.hpp"

namespace vtg {

nlohmann::ordered_json prediction_to_json(const MomentPrediction& p) {
    nlohmann::ordered_json j;
    j["video_id"] = p.video_id;
    j["query"] = p.query.text();
    j["ts"] = p.moment.start();
    j["te"] = p.moment.end();
    j["coarse_ts"] = p.coarse_moment.start();
    j["coarse_te"] = p.coarse_moment.end();
    j["fusion"] = fusion_id(p.fusion_method);
    j["refined"] = p.refined;
    return j;
}

std::string prediction_line(const MomentPrediction& prediction) { return prediction_to_json(prediction).dump(); }

PredictionRecord parse_prediction(const nlohmann::json& j) {
    PredictionRecord r{j.at("video_id").get<std::string>(), j.at("query").get<std::string>(),
                       TimeInterval(j.at("ts").get<double>(), j.at("te").get<double>()),
                       std::nullopt, std::nullopt, false, 0};
    if (j.contains("coarse_ts") && j.contains("coarse_te")) {
        r.coarse_moment.emplace(j["coarse_ts"].get<double>(), j["coarse_te"].get<double>());
    }
    if (j.contains("fusion")) {
        r.fusion = j["fusion"].get<int>();
    }
    if (j.contains("refined")) {
        r.refined = j["refined"].get<bool>();
    }
    return r;
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read predictions '" + path.string() + "'");
    }
    std::vector<PredictionRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (normalize_whitespace(line).empty()) {
            continue;
        }
        try {
            auto record = parse_prediction(nlohmann::json::parse(line));
            record.line = line_no;
            out.push_back(std::move(record));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const InvalidArgument& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

} // namespace vtg
