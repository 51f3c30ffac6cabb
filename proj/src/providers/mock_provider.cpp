// SPDX-License-Identifier: Apache-2.0

#include "vtg/mock_provider.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "vtg/errors.hpp"

namespace vtg {

namespace {

constexpr std::array<std::string_view, 24> kStopWords = {
    "a",  "an",  "the", "of",   "in",   "on",   "at",  "to",  "and", "or", "is",   "are",
    "be", "was", "it",  "its",  "this", "that", "for", "with", "as", "by", "from", "s"};

bool is_stop_word(std::string_view token) {
    return std::find(kStopWords.begin(), kStopWords.end(), token) != kStopWords.end();
}

bool is_token_byte(unsigned char c) {
    if (c >= 0x80) {
        return true;
    }
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

} // namespace

std::vector<std::string> mock_tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && !is_stop_word(current)) {
            tokens.push_back(current);
        }
        current.clear();
    };
    for (unsigned char c : text) {
        if (!is_token_byte(c)) {
            flush();
            continue;
        }
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<unsigned char>(c - 'A' + 'a');
        }
        current.push_back(static_cast<char>(c));
    }
    flush();
    return tokens;
}

std::uint64_t MockEmbedder::token_hash(std::string_view token) noexcept {
    std::uint64_t h = kMockEmbedSeed;
    for (unsigned char c : token) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

EmbeddingVector MockEmbedder::compute(std::string_view text) {
    EmbeddingVector v(kMockEmbedDim, 0.0);
    for (const auto& token : mock_tokenize(text)) {
        v[token_hash(token) % kMockEmbedDim] += 1.0;
    }
    double norm_sq = 0.0;
    for (double x : v) {
        norm_sq += x * x;
    }
    if (norm_sq > 0.0) {
        const double norm = std::sqrt(norm_sq);
        for (double& x : v) {
            x /= norm;
        }
    }
    return v;
}

void MockCaptionProvider::add_fixture(const std::string& video_id, const TimeInterval& segment,
                                      Granularity g, std::string caption) {
    fixtures_[{video_id, segment.start_ms(), segment.end_ms(), g}] = std::move(caption);
}

void MockCaptionProvider::add_oracle(const std::string& video_id, const TimeInterval& interval,
                                     std::string query) {
    oracle_[video_id].push_back({interval, std::move(query)});
}

void MockCaptionProvider::load_fixtures(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open mock fixtures '" + path.string() + "'");
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (normalize_whitespace(line).empty()) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            const auto video_id = j.at("video_id").get<std::string>();
            const TimeInterval span(j.at("start").get<double>(), j.at("end").get<double>());
            if (j.contains("query")) {
                add_oracle(video_id, span, j.at("query").get<std::string>());
            } else {
                add_fixture(video_id, span, parse_granularity(j.at("granularity").get<std::string>()),
                            j.at("caption").get<std::string>());
            }
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const InvalidArgument& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

std::string MockCaptionProvider::caption(const CaptionRequest& request) {
    const FixtureKey key{request.video_id, request.segment.start_ms(), request.segment.end_ms(),
                         request.granularity};
    if (auto it = fixtures_.find(key); it != fixtures_.end()) {
        return it->second;
    }

    if (auto it = oracle_.find(request.video_id); it != oracle_.end()) {
        const OracleEntry* best = nullptr;
        double best_cover = 0.0;
        for (const auto& entry : it->second) {
            const double cover = interval_intersection(request.segment, entry.interval) / request.segment.length();
            if (cover > options_.oracle_fraction && cover > best_cover) {
                best = &entry;
                best_cover = cover;
            }
        }
        return best != nullptr ? best->query : std::string(filler(request.granularity));
    }

    if (options_.strict) {
        throw CacheMiss("mock captioner has no fixture for " + request.describe());
    }
    return std::string(filler(request.granularity));
}

std::string_view MockCaptionProvider::filler(Granularity g) noexcept {
    switch (g) {
    case Granularity::Action: return "nothing notable happens";
    case Granularity::Place: return "unremarkable surroundings";
    case Granularity::Dressing: return "plain attire";
    case Granularity::Emotion: return "neutral expression";
    case Granularity::Interaction: return "no interaction visible";
    }
    return "";
}

} // namespace vtg
