// SPDX-License-Identifier: Apache-2.0

// Writes the synthetic oracle corpus used by the end-to-end tests.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vtg/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write a synthetic oracle-mode annotation corpus"};
    std::string out;
    std::size_t videos = 20;
    std::uint64_t seed = 7;
    app.add_option("--out", out, "output JSONL path")->required();
    app.add_option("--videos", videos, "number of videos")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "layout RNG seed");
    CLI11_PARSE(app, argc, argv);

    try {
        vtg::write_corpus_jsonl(vtg::make_oracle_corpus(videos, seed), out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << out << "\n";
    return 0;
}
