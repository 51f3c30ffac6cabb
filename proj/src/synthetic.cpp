// SPDX-License-Identifier: Apache-2.0

#include "vtg/synthetic.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <random>

#include <json.hpp>

#include "vtg/errors.hpp"

namespace vtg {

namespace {

constexpr std::array<std::string_view, 20> kQueries = {
    "person opens a door",
    "person sits down on a couch",
    "a person pours coffee into a cup",
    "person washes dishes at the sink",
    "a person reads a book",
    "person throws a pillow",
    "someone closes the window",
    "a person holds a broom",
    "person puts groceries on the table",
    "a person laughs at the phone",
    "person takes a towel",
    "someone eats a sandwich",
    "person switches off the light",
    "a person watches television",
    "person fixes a doorknob",
    "someone drinks from a bottle",
    "person sneezes into a tissue",
    "a person tidies up a shelf",
    "person grabs a bag",
    "someone walks through the doorway",
};

/// (duration, ground-truth start) pairs: 5 clips of 8, 9 or 12 s each, with a
/// grid-aligned 10 s ground truth that contains or is contained by one clip.
struct Layout {
    double duration;
    double start;
};

constexpr std::array<Layout, 8> kLayouts = {{
    {40.0, 0.0},  {40.0, 15.0}, {40.0, 30.0}, {45.0, 0.0},
    {45.0, 35.0}, {60.0, 0.0},  {60.0, 25.0}, {60.0, 50.0},
}};

constexpr double kMomentLength = 10.0;

} // namespace

std::span<const std::string_view> synthetic_queries() noexcept { return kQueries; }

std::vector<GroundTruthAnnotation> make_oracle_corpus(std::size_t videos, std::uint64_t seed) {
    if (videos == 0) {
        throw InvalidArgument("corpus needs at least one video");
    }
    std::mt19937_64 rng(seed);
    std::vector<GroundTruthAnnotation> corpus;
    corpus.reserve(videos);
    for (std::size_t i = 0; i < videos; ++i) {
        // Raw modulo keeps the draw identical across standard libraries.
        const auto& layout = kLayouts[rng() % kLayouts.size()];
        const auto query = kQueries[i % kQueries.size()];
        char id[32];
        std::snprintf(id, sizeof id, "synth%03zu", i);
        corpus.push_back({id, TimeInterval(layout.start, layout.start + kMomentLength), Query(std::string(query)),
                          layout.duration});
    }
    return corpus;
}

void write_corpus_jsonl(std::span<const GroundTruthAnnotation> corpus, const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write corpus '" + path.string() + "'");
    }
    for (const auto& a : corpus) {
        nlohmann::ordered_json j;
        j["video_id"] = a.video_id;
        j["start"] = a.interval.start();
        j["end"] = a.interval.end();
        j["query"] = a.query.text();
        if (a.duration) {
            j["duration"] = *a.duration;
        }
        out << j.dump() << '\n';
    }
}

} // namespace vtg
