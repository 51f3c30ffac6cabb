// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "vtg/evaluation.hpp"
#include "vtg/providers.hpp"
#include "vtg/refinement.hpp"

namespace vtg::cli {

/// Flag values as parsed (command line or CHATVTG_* environment). Unset
/// optionals fall back to the config file, then to built-in defaults.
struct RawOptions {
    std::optional<std::string> config;
    std::optional<std::string> provider;
    std::optional<std::string> endpoint;
    std::optional<std::string> cache;
    std::optional<std::string> fixtures;
    std::optional<int> fusion;
    std::optional<double> threshold;
    std::optional<int> clips;
    std::optional<double> window_wide;
    std::optional<double> window_step;
    std::optional<double> refine_gate;
    std::optional<std::string> instructions;
    bool no_refine = false;
    bool flush_tail = false;
    std::optional<int> workers;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::string> durations;
    bool allow_partial = false;
    std::optional<double> timeout;
    std::optional<int> retries;
    std::optional<double> oracle_fraction;
    bool mock_lenient = false;
};

struct RunSettings {
    PipelineConfig pipeline;
    ProviderConfig provider;
    int workers = 1;
    AnnotationFormat format = AnnotationFormat::Jsonl;
    std::optional<std::filesystem::path> durations;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> config_file;
    bool allow_partial = false;
};

/// Merges flags > config file > defaults and validates the result.
RunSettings resolve_settings(const RawOptions& raw);

/// The merged configuration as recorded in run manifests.
nlohmann::ordered_json settings_to_json(const RunSettings& settings);

/// Video durations from a JSON object {"id": seconds} or from
/// "<id> <seconds>" / "<id>,<seconds>" lines.
std::map<std::string, double> load_durations(const std::filesystem::path& path);

/// Comma-separated granularity keywords, e.g. "action,place".
std::vector<Granularity> parse_granularity_list(const std::string& text);

} // namespace vtg::cli
