// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "vtg/cli.hpp"
#include "vtg/errors.hpp"
#include "vtg/prediction_io.hpp"

#ifndef VTG_VERSION
#define VTG_VERSION "dev"
#endif

namespace vtg::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

int exit_code_for(const std::exception_ptr& error) {
    try {
        std::rethrow_exception(error);
    } catch (const ProviderUnavailable&) {
        return kExitProviderFailure;
    } catch (const CacheMiss&) {
        return kExitProviderFailure;
    } catch (const InternalError&) {
        return kExitInternal;
    } catch (const EvaluationError&) {
        return kExitEvaluation;
    } catch (const InvalidArgument&) {
        return kExitInvalidArgs;
    } catch (const IoError&) {
        return kExitInvalidArgs;
    } catch (const FormatError&) {
        return kExitInvalidArgs;
    } catch (const std::filesystem::filesystem_error&) {
        return kExitInvalidArgs;
    } catch (...) {
        return kExitInternal;
    }
}

namespace {

std::string message_of(const std::exception_ptr& error) {
    try {
        std::rethrow_exception(error);
    } catch (const std::exception& e) {
        return e.what();
    } catch (...) {
        return "unknown error";
    }
}

class StageClock {
public:
    void lap(const std::string& stage) {
        const auto now = std::chrono::steady_clock::now();
        timings_[stage] = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }
    const ordered_json& timings() const { return timings_; }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    ordered_json timings_ = ordered_json::object();
};

/// Writes through a temporary file so readers never see a torn output.
void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    const auto tmp = fs::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write '" + tmp.string() + "'");
        }
        out << content;
        if (!out.flush()) {
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

ordered_json manifest_base(const RunSettings& settings, const std::string& command) {
    ordered_json m;
    m["tool"] = "chatvtg";
    m["version"] = VTG_VERSION;
    m["command"] = command;
    m["settings"] = settings_to_json(settings);
    if (settings.config_file) {
        m["config_file"] = settings.config_file->string();
    }
    return m;
}

void write_manifest(const fs::path& dir, const ordered_json& manifest) {
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

struct LoadedCorpus {
    AnnotationSet annotations;
    std::vector<GroundingJob> jobs;
};

LoadedCorpus load_corpus(const RunSettings& settings, const std::string& path, std::ostream& err) {
    LoadedCorpus corpus{load_annotations(path, settings.format), {}};
    auto& anns = corpus.annotations;
    for (const auto& r : anns.rejects) {
        err << "warning: " << path << ":" << r.line << " rejected: " << r.reason << "\n";
    }
    if (anns.annotations.empty()) {
        throw InvalidArgument("annotation file '" + path + "' holds no usable annotations");
    }

    std::map<std::string, double> durations;
    if (settings.durations) {
        durations = load_durations(*settings.durations);
    }
    std::vector<std::string> missing;
    for (const auto& a : anns.annotations) {
        std::optional<double> duration = a.duration;
        if (auto it = durations.find(a.video_id); it != durations.end()) {
            duration = it->second;
        }
        if (!duration) {
            if (std::find(missing.begin(), missing.end(), a.video_id) == missing.end()) {
                missing.push_back(a.video_id);
            }
            continue;
        }
        if (a.interval.end() > *duration) {
            err << "warning: annotation for '" << a.video_id << "' ends at " << a.interval.end()
                << " s, past the video duration " << *duration << " s\n";
        }
        corpus.jobs.push_back({VideoMeta(a.video_id, *duration), a.query});
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 10; ++i) {
            list += (i ? ", " : "") + missing[i];
        }
        throw InvalidArgument(std::to_string(missing.size()) + " videos have no known duration (" + list +
                              (missing.size() > 10 ? ", ..." : "") + "); pass --durations");
    }
    return corpus;
}

Providers providers_for(const RunSettings& settings, std::span<const GroundTruthAnnotation> oracle) {
    if (settings.provider.kind == ProviderKind::Mock) {
        return make_providers(settings.provider, oracle);
    }
    return make_providers(settings.provider);
}

ProgressFn progress_printer(std::ostream& err, const std::string& label) {
    auto mutex = std::make_shared<std::mutex>();
    return [&err, label, mutex](std::size_t done, std::size_t total) {
        const std::size_t step = std::max<std::size_t>(1, total / 10);
        if (done % step == 0 || done == total) {
            std::lock_guard lock(*mutex);
            err << "[" << label << "] " << done << "/" << total << " queries grounded\n";
        }
    };
}

PredictionRecord to_record(const MomentPrediction& p) {
    return {p.video_id, p.query.text(), p.moment, p.coarse_moment, fusion_id(p.fusion_method), p.refined, 0};
}

} // namespace

int cmd_ground(const RunSettings& settings, const GroundArgs& args, std::ostream& out, std::ostream&) {
    const VideoMeta video(args.video_id, args.duration);
    const Query query(args.query);
    auto providers = make_providers(settings.provider);
    const Grounder grounder(settings.pipeline, *providers.captioner, *providers.embedder);
    const auto prediction = grounder.ground(video, query);

    auto j = prediction_to_json(prediction);
    j["per_clip_scores"] = prediction.per_clip_scores;
    out << j.dump() << "\n";
    return kExitOk;
}

int cmd_batch(const RunSettings& settings, const BatchArgs& args, std::ostream& out, std::ostream& err) {
    if (!settings.out) {
        throw InvalidArgument("batch requires --out DIR");
    }
    StageClock clock;
    auto corpus = load_corpus(settings, args.annotations, err);
    auto providers = providers_for(settings, corpus.annotations.annotations);
    const Grounder grounder(settings.pipeline, *providers.captioner, *providers.embedder);
    clock.lap("load");

    const auto outcomes = ground_all(grounder, corpus.jobs, settings.workers, progress_printer(err, "batch"));
    clock.lap("ground");

    std::string lines;
    std::size_t written = 0;
    ordered_json failures = ordered_json::array();
    std::exception_ptr first_error;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].prediction) {
            lines += prediction_line(*outcomes[i].prediction) + "\n";
            ++written;
            continue;
        }
        if (!first_error) {
            first_error = outcomes[i].error;
        }
        ordered_json f;
        f["index"] = i;
        f["video_id"] = corpus.jobs[i].video.video_id;
        f["query"] = corpus.jobs[i].query.text();
        f["error"] = message_of(outcomes[i].error);
        failures.push_back(f);
    }
    const auto predictions_path = *settings.out / "predictions.jsonl";
    write_file(predictions_path, lines);
    clock.lap("write");

    auto manifest = manifest_base(settings, "batch");
    manifest["inputs"] = {{"annotations", args.annotations},
                          {"durations", settings.durations ? ordered_json(settings.durations->string()) : nullptr}};
    manifest["outputs"] = {{"predictions", predictions_path.string()}};
    manifest["complete"] = failures.empty();
    manifest["counts"] = {{"annotations", corpus.jobs.size()},
                          {"predictions", written},
                          {"rejected_lines", corpus.annotations.rejects.size()}};
    manifest["failures"] = failures;
    manifest["timings_ms"] = clock.timings();
    write_manifest(*settings.out, manifest);

    if (first_error) {
        err << "error: " << failures.size() << " of " << corpus.jobs.size()
            << " queries failed; partial predictions kept in " << predictions_path.string() << "\n"
            << "error: " << message_of(first_error) << "\n";
        return exit_code_for(first_error);
    }
    out << predictions_path.string() << "\n";
    return kExitOk;
}

int cmd_evaluate(const RunSettings& settings, const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
    StageClock clock;
    const auto report = evaluate(args.predictions, args.annotations, settings.format, {settings.allow_partial});
    clock.lap("evaluate");
    for (const auto& w : report.warnings) {
        err << "warning: " << w << "\n";
    }
    if (!report.unmatched_predictions.empty() || !report.unmatched_annotations.empty()) {
        err << "warning: " << report.unmatched_predictions.size() << " unmatched predictions, "
            << report.unmatched_annotations.size() << " unmatched annotations (--allow-partial)\n";
    }
    err << report_table(report);

    const auto json = report_json(report);
    out << json.dump(2) << "\n";

    std::ostringstream csv;
    if (args.per_query_csv || settings.out) {
        write_per_query_csv(report, csv);
    }
    if (args.per_query_csv) {
        write_file(*args.per_query_csv, csv.str());
    }
    if (settings.out) {
        write_file(*settings.out / "report.json", json.dump(2) + "\n");
        write_file(*settings.out / "report.txt", report_table(report));
        write_file(*settings.out / "per_query.csv", csv.str());
        auto manifest = manifest_base(settings, "evaluate");
        manifest["inputs"] = {{"predictions", args.predictions}, {"annotations", args.annotations}};
        manifest["outputs"] = {{"report", (*settings.out / "report.json").string()}};
        manifest["complete"] = true;
        manifest["timings_ms"] = clock.timings();
        write_manifest(*settings.out, manifest);
    }
    return kExitOk;
}

namespace {

struct AblationRow {
    std::string section;
    std::string setting;
    PipelineConfig config;
};

std::vector<AblationRow> ablation_grid(const PipelineConfig& base) {
    std::vector<AblationRow> rows;
    for (FusionMethod m : kAllFusionMethods) {
        auto c = base;
        c.fusion = m;
        c.granularities.assign(kAllGranularities.begin(), kAllGranularities.end());
        rows.push_back({"fusion", "(" + std::to_string(fusion_id(m)) + ")", c});
    }
    for (int clips : {3, 5, 10, 20}) {
        auto c = base;
        c.clip_count = clips;
        rows.push_back({"clips", std::to_string(clips), c});
    }
    for (auto [wide, step] : {std::pair{20.0, 5.0}, std::pair{10.0, 5.0}, std::pair{10.0, 2.0}}) {
        auto c = base;
        c.window = {wide, step};
        char label[32];
        std::snprintf(label, sizeof label, "(%g, %g)", wide, step);
        rows.push_back({"window", label, c});
    }
    for (Granularity g : kAllGranularities) {
        auto c = base;
        c.granularities = {g};
        c.fusion = FusionMethod::NormalizeAfterColumnMax;
        std::string label(name(g));
        label[0] = static_cast<char>(label[0] - 'a' + 'A');
        rows.push_back({"instruction", label, c});
    }
    for (bool refine : {false, true}) {
        auto c = base;
        c.refine = refine;
        rows.push_back({"refine", refine ? "Coarse-to-Fine" : "Baseline", c});
    }
    return rows;
}

std::string_view section_title(const std::string& section) {
    if (section == "fusion") return "Fusion method";
    if (section == "clips") return "Clip Num.";
    if (section == "window") return "Slide window";
    if (section == "instruction") return "Instruction";
    return "Refinement";
}

} // namespace

int cmd_ablate(const RunSettings& settings, const AblateArgs& args, std::ostream& out, std::ostream& err) {
    StageClock clock;
    auto corpus = load_corpus(settings, args.annotations, err);
    auto providers = providers_for(settings, corpus.annotations.annotations);
    clock.lap("load");

    const auto grid = ablation_grid(settings.pipeline);
    ordered_json rows = ordered_json::array();
    std::string table;
    std::string current_section;
    char buf[160];
    for (const auto& row : grid) {
        const Grounder grounder(row.config, *providers.captioner, *providers.embedder);
        const auto outcomes = ground_all(grounder, corpus.jobs, settings.workers);
        std::vector<PredictionRecord> records;
        records.reserve(outcomes.size());
        for (const auto& o : outcomes) {
            if (!o.prediction) {
                std::rethrow_exception(o.error);
            }
            records.push_back(to_record(*o.prediction));
        }
        const auto report = evaluate(records, corpus.annotations.annotations, {settings.allow_partial});
        err << "[ablate] " << row.section << " " << row.setting << " done\n";

        ordered_json r;
        r["section"] = row.section;
        r["setting"] = row.setting;
        r["n"] = report.n;
        r["miou"] = report.mean_iou;
        r["recall"] = report_json(report)["recall"];
        rows.push_back(r);

        if (row.section != current_section) {
            current_section = row.section;
            std::snprintf(buf, sizeof buf, "%s%-16s %8s %8s %8s %8s\n", table.empty() ? "" : "\n",
                          std::string(section_title(row.section)).c_str(), "mIoU", "R@0.3", "R@0.5", "R@0.7");
            table += buf;
        }
        std::snprintf(buf, sizeof buf, "%-16s %8.2f %8.2f %8.2f %8.2f\n", row.setting.c_str(), report.mean_iou * 100.0,
                      report.recall_at.at(0.3) * 100.0, report.recall_at.at(0.5) * 100.0,
                      report.recall_at.at(0.7) * 100.0);
        table += buf;
    }
    clock.lap("grid");

    ordered_json result;
    result["n_queries"] = corpus.jobs.size();
    result["rows"] = rows;
    out << table;

    if (settings.out) {
        write_file(*settings.out / "ablation.json", result.dump(2) + "\n");
        write_file(*settings.out / "ablation.txt", table);
        auto manifest = manifest_base(settings, "ablate");
        manifest["inputs"] = {{"annotations", args.annotations}};
        manifest["outputs"] = {{"ablation", (*settings.out / "ablation.json").string()}};
        manifest["complete"] = true;
        manifest["counts"] = {{"annotations", corpus.jobs.size()}, {"rows", rows.size()}};
        manifest["timings_ms"] = clock.timings();
        write_manifest(*settings.out, manifest);
    }
    return kExitOk;
}

} // namespace vtg::cli
