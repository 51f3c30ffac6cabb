// SPDX-License-Identifier: Apache-2.0

#include "vtg/cli.hpp"

#include <cctype>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "vtg/errors.hpp"

#ifndef VTG_VERSION
#define VTG_VERSION "dev"
#endif

namespace vtg::cli {

namespace {

std::string env_name(const std::string& flag) {
    std::string out = "CHATVTG_";
    for (char c : flag) {
        out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

template <typename T>
void option(CLI::App* app, const std::string& flag, T& target, const std::string& help) {
    app->add_option("--" + flag, target, help)->envname(env_name(flag));
}

void flag(CLI::App* app, const std::string& name, bool& target, const std::string& help) {
    app->add_flag("--" + name, target, help)->envname(env_name(name));
}

void add_common(CLI::App* app, RawOptions& raw) {
    option(app, "config", raw.config, "JSON config file with flat keys");
    option(app, "provider", raw.provider, "caption/embedding backend: mock, file or http");
    option(app, "endpoint", raw.endpoint, "provider base URL (http)");
    option(app, "cache", raw.cache, "cache directory");
    option(app, "fixtures", raw.fixtures, "mock fixture JSONL");
    option(app, "fusion", raw.fusion, "fusion method 1-5 (default 5)");
    option(app, "threshold", raw.threshold, "selection threshold on normalized scores (default 0.8)");
    option(app, "clips", raw.clips, "number of equal clips in the coarse pass (default 5)");
    option(app, "window-wide", raw.window_wide, "refinement window length in seconds (default 10)");
    option(app, "window-step", raw.window_step, "refinement window stride in seconds (default 5)");
    option(app, "refine-gate", raw.refine_gate, "minimum IoU between a window and the coarse moment (default 0.7)");
    option(app, "instructions", raw.instructions, "comma-separated granularities, e.g. action,place");
    flag(app, "no-refine", raw.no_refine, "skip the refinement pass");
    flag(app, "flush-tail", raw.flush_tail, "add a window ending at the video end");
    option(app, "workers", raw.workers, "parallel grounding workers (default 1)");
    option(app, "out", raw.out, "output directory");
    option(app, "format", raw.format, "annotation format: jsonl or charades_sta");
    option(app, "durations", raw.durations, "video durations file (JSON object or '<id> <seconds>' lines)");
    flag(app, "allow-partial", raw.allow_partial, "tolerate predictions and annotations that do not join");
    option(app, "timeout", raw.timeout, "http timeout in seconds (default 30)");
    option(app, "retries", raw.retries, "http attempts per request (default 3)");
    option(app, "oracle-fraction", raw.oracle_fraction, "mock oracle coverage cutoff (default 0.5)");
    flag(app, "mock-lenient", raw.mock_lenient, "mock captioner answers filler instead of failing on unknown segments");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zero-shot video temporal grounding from captions", args.empty() ? "chatvtg" : args.front()};
    app.set_version_flag("--version", VTG_VERSION);
    app.require_subcommand(1);

    RawOptions raw;
    GroundArgs ground_args;
    BatchArgs batch_args;
    EvaluateArgs eval_args;
    AblateArgs ablate_args;

    auto* ground = app.add_subcommand("ground", "ground one query in one video");
    ground->add_option("--video-id", ground_args.video_id, "video identifier")->required();
    ground->add_option("--duration", ground_args.duration, "video duration in seconds")->required();
    ground->add_option("--query", ground_args.query, "natural-language query")->required();
    add_common(ground, raw);

    auto* batch = app.add_subcommand("batch", "ground every query of an annotation file");
    batch->add_option("annotations", batch_args.annotations, "annotation file")->required();
    add_common(batch, raw);

    auto* eval = app.add_subcommand("evaluate", "score predictions against annotations");
    eval->add_option("predictions", eval_args.predictions, "predictions JSONL")->required();
    eval->add_option("annotations", eval_args.annotations, "annotation file")->required();
    eval->add_option("--per-query", eval_args.per_query_csv, "write per-query IoU CSV here");
    add_common(eval, raw);

    auto* ablate = app.add_subcommand("ablate", "run the ablation grid over an annotation file");
    ablate->add_option("annotations", ablate_args.annotations, "annotation file")->required();
    add_common(ablate, raw);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    if (args.empty()) {
        argv.push_back("chatvtg");
    }
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* failed = &app;
        for (auto* sub : {ground, batch, eval, ablate}) {
            if (sub->parsed()) {
                failed = sub;
            }
        }
        err << failed->help();
        return kExitInvalidArgs;
    }

    try {
        const auto settings = resolve_settings(raw);
        if (ground->parsed()) {
            return cmd_ground(settings, ground_args, out, err);
        }
        if (batch->parsed()) {
            return cmd_batch(settings, batch_args, out, err);
        }
        if (eval->parsed()) {
            return cmd_evaluate(settings, eval_args, out, err);
        }
        return cmd_ablate(settings, ablate_args, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(std::current_exception());
    }
}

} // namespace vtg::cli
