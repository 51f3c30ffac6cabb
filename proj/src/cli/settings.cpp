// SPDX-License-Identifier: Apache-2.0

#include "settings.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "vtg/errors.hpp"

namespace vtg::cli {

namespace {

const std::set<std::string>& known_config_keys() {
    static const std::set<std::string> keys = {
        "provider",    "endpoint",    "cache",       "fixtures",      "fusion",   "threshold",
        "clips",       "window_wide", "window_step", "refine_gate",   "instructions", "refine",
        "flush_tail",  "workers",     "out",         "format",        "durations", "allow_partial",
        "timeout",     "retries",     "oracle_fraction", "mock_strict"};
    return keys;
}

nlohmann::json read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path.string() + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("config file '" + path.string() + "': " + e.what());
    }
    if (!j.is_object()) {
        throw InvalidArgument("config file '" + path.string() + "' must hold a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known_config_keys().contains(key)) {
            throw InvalidArgument("config file '" + path.string() + "': unknown key '" + key + "'");
        }
    }
    return j;
}

/// flag value, else config value, else the current (default) value.
template <typename T>
void merge(T& target, const std::optional<T>& flag, const nlohmann::json& config, const char* key) {
    if (flag) {
        target = *flag;
        return;
    }
    if (config.contains(key)) {
        try {
            target = config.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
        }
    }
}

} // namespace

std::vector<Granularity> parse_granularity_list(const std::string& text) {
    std::vector<Granularity> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = normalize_whitespace(item);
        if (item.empty()) {
            continue;
        }
        const auto g = parse_granularity(item);
        if (std::find(out.begin(), out.end(), g) == out.end()) {
            out.push_back(g);
        }
    }
    if (out.empty()) {
        throw InvalidArgument("instruction list '" + text + "' names no granularity");
    }
    return out;
}

RunSettings resolve_settings(const RawOptions& raw) {
    RunSettings s;
    nlohmann::json config = nlohmann::json::object();
    if (raw.config) {
        s.config_file = *raw.config;
        config = read_config(*s.config_file);
    }

    std::string provider = "mock";
    merge(provider, raw.provider, config, "provider");
    s.provider.kind = parse_provider_kind(provider);

    std::string text;
    if (raw.endpoint || config.contains("endpoint")) {
        merge(text, raw.endpoint, config, "endpoint");
        s.provider.endpoint = text;
    }
    if (raw.cache || config.contains("cache")) {
        merge(text, raw.cache, config, "cache");
        s.provider.cache_path = text;
    }
    if (raw.fixtures || config.contains("fixtures")) {
        merge(text, raw.fixtures, config, "fixtures");
        s.provider.fixtures = text;
    }
    merge(s.provider.timeout_seconds, raw.timeout, config, "timeout");
    merge(s.provider.max_retries, raw.retries, config, "retries");
    merge(s.provider.oracle_fraction, raw.oracle_fraction, config, "oracle_fraction");
    merge(s.provider.mock_strict, raw.mock_lenient ? std::optional<bool>(false) : std::nullopt, config, "mock_strict");

    int fusion = fusion_id(s.pipeline.fusion);
    merge(fusion, raw.fusion, config, "fusion");
    s.pipeline.fusion = fusion_from_id(fusion);
    merge(s.pipeline.threshold, raw.threshold, config, "threshold");
    merge(s.pipeline.clip_count, raw.clips, config, "clips");
    merge(s.pipeline.window.wide, raw.window_wide, config, "window_wide");
    merge(s.pipeline.window.step, raw.window_step, config, "window_step");
    merge(s.pipeline.refine_gate_iou, raw.refine_gate, config, "refine_gate");
    merge(s.pipeline.refine, raw.no_refine ? std::optional<bool>(false) : std::nullopt, config, "refine");
    merge(s.pipeline.flush_tail, raw.flush_tail ? std::optional<bool>(true) : std::nullopt, config, "flush_tail");
    if (raw.instructions || config.contains("instructions")) {
        merge(text, raw.instructions, config, "instructions");
        s.pipeline.granularities = parse_granularity_list(text);
    }

    merge(s.workers, raw.workers, config, "workers");
    std::string format(to_string(s.format));
    merge(format, raw.format, config, "format");
    s.format = parse_annotation_format(format);
    if (raw.durations || config.contains("durations")) {
        merge(text, raw.durations, config, "durations");
        s.durations = text;
    }
    if (raw.out || config.contains("out")) {
        merge(text, raw.out, config, "out");
        s.out = text;
    }
    merge(s.allow_partial, raw.allow_partial ? std::optional<bool>(true) : std::nullopt, config, "allow_partial");

    if (s.workers < 1) {
        throw InvalidArgument("--workers must be at least 1");
    }
    s.pipeline.validate();
    s.provider.validate();
    return s;
}

nlohmann::ordered_json settings_to_json(const RunSettings& s) {
    nlohmann::ordered_json pipeline;
    pipeline["clips"] = s.pipeline.clip_count;
    pipeline["window_wide"] = s.pipeline.window.wide;
    pipeline["window_step"] = s.pipeline.window.step;
    pipeline["refine_gate"] = s.pipeline.refine_gate_iou;
    pipeline["threshold"] = s.pipeline.threshold;
    pipeline["fusion"] = fusion_id(s.pipeline.fusion);
    pipeline["refine"] = s.pipeline.refine;
    pipeline["flush_tail"] = s.pipeline.flush_tail;
    auto& names = pipeline["instructions"] = nlohmann::ordered_json::array();
    for (Granularity g : s.pipeline.granularities) {
        names.push_back(std::string(name(g)));
    }

    nlohmann::ordered_json provider;
    provider["kind"] = std::string(to_string(s.provider.kind));
    provider["endpoint"] = s.provider.endpoint ? nlohmann::ordered_json(*s.provider.endpoint) : nullptr;
    provider["cache"] = s.provider.cache_path ? nlohmann::ordered_json(s.provider.cache_path->string()) : nullptr;
    provider["timeout"] = s.provider.timeout_seconds;
    provider["retries"] = s.provider.max_retries;
    if (s.provider.kind == ProviderKind::Mock) {
        provider["fixtures"] = s.provider.fixtures ? nlohmann::ordered_json(s.provider.fixtures->string()) : nullptr;
        provider["oracle_fraction"] = s.provider.oracle_fraction;
        provider["mock_strict"] = s.provider.mock_strict;
    }

    nlohmann::ordered_json j;
    j["pipeline"] = pipeline;
    j["provider"] = provider;
    j["workers"] = s.workers;
    j["format"] = std::string(to_string(s.format));
    j["allow_partial"] = s.allow_partial;
    return j;
}

std::map<std::string, double> load_durations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read durations file '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto content = buffer.str();

    std::map<std::string, double> out;
    const auto first = content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && content[first] == '{') {
        try {
            const auto j = nlohmann::json::parse(content);
            for (const auto& [id, seconds] : j.items()) {
                out[id] = seconds.get<double>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("durations file '" + path.string() + "': " + e.what());
        }
    } else {
        std::istringstream lines(content);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(lines, line)) {
            ++line_no;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream fields(line);
            std::string id;
            double seconds = 0.0;
            if (!(fields >> id)) {
                continue;
            }
            if (!(fields >> seconds)) {
                if (line_no == 1) {
                    continue; // header row
                }
                throw FormatError("durations file '" + path.string() + "' line " + std::to_string(line_no) +
                                  ": expected '<video_id> <seconds>'");
            }
            out[id] = seconds;
        }
    }
    for (const auto& [id, seconds] : out) {
        if (!(seconds > 0.0)) {
            throw FormatError("durations file '" + path.string() + "': video '" + id + "' has non-positive duration");
        }
    }
    return out;
}

} // namespace vtg::cli
