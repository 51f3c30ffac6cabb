// SPDX-License-Identifier: Apache-2.0

#include "vtg/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "vtg/errors.hpp"

namespace vtg {

AnnotationFormat parse_annotation_format(std::string_view text) {
    if (text == "charades_sta") return AnnotationFormat::CharadesSta;
    if (text == "jsonl") return AnnotationFormat::Jsonl;
    throw InvalidArgument("unknown annotation format '" + std::string(text) + "' (expected charades_sta or jsonl)");
}

std::string_view to_string(AnnotationFormat format) noexcept {
    return format == AnnotationFormat::CharadesSta ? "charades_sta" : "jsonl";
}

namespace {

constexpr double kMaxRejectFraction = 0.10;

std::optional<double> parse_number(std::string_view token) {
    double value = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        return std::nullopt;
    }
    return value;
}

GroundTruthAnnotation parse_charades_line(const std::string& line) {
    const auto sep = line.find("##");
    if (sep == std::string::npos) {
        throw FormatError("missing '##' separator");
    }
    std::istringstream head(line.substr(0, sep));
    std::string video_id;
    std::string start_tok;
    std::string end_tok;
    std::string extra;
    if (!(head >> video_id >> start_tok >> end_tok) || (head >> extra)) {
        throw FormatError("expected '<video_id> <start> <end>' before '##'");
    }
    const auto start = parse_number(start_tok);
    const auto end = parse_number(end_tok);
    if (!start || !end) {
        throw FormatError("non-numeric timestamp");
    }
    auto sentence = normalize_whitespace(std::string_view(line).substr(sep + 2));
    if (sentence.empty()) {
        throw FormatError("empty query sentence");
    }
    return {video_id, TimeInterval(*start, *end), Query(std::move(sentence)), std::nullopt};
}

GroundTruthAnnotation parse_jsonl_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
        GroundTruthAnnotation a{j.at("video_id").get<std::string>(),
                                TimeInterval(j.at("start").get<double>(), j.at("end").get<double>()),
                                Query(j.at("query").get<std::string>()), std::nullopt};
        if (a.video_id.empty()) {
            throw FormatError("empty video_id");
        }
        if (j.contains("duration")) {
            const double d = j["duration"].get<double>();
            if (!(d > 0.0)) {
                throw FormatError("non-positive duration");
            }
            a.duration = d;
        }
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(e.what());
    }
}

} // namespace

AnnotationSet parse_annotations(std::istream& in, AnnotationFormat format, const std::string& source) {
    AnnotationSet set;
    std::string line;
    std::size_t line_no = 0;
    std::size_t content_lines = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (normalize_whitespace(line).empty()) {
            continue;
        }
        ++content_lines;
        try {
            auto a = format == AnnotationFormat::CharadesSta ? parse_charades_line(line) : parse_jsonl_line(line);
            if (a.exceeds_duration()) {
                ++set.over_duration;
            }
            set.annotations.push_back(std::move(a));
        } catch (const Error& e) {
            set.rejects.push_back({line_no, e.what(), line});
        }
    }
    if (content_lines > 0 &&
        static_cast<double>(set.rejects.size()) > kMaxRejectFraction * static_cast<double>(content_lines)) {
        const auto& first = set.rejects.front();
        throw FormatError(source + ": " + std::to_string(set.rejects.size()) + " of " + std::to_string(content_lines) +
                          " lines are malformed (first at line " + std::to_string(first.line) + ": " + first.reason +
                          ")");
    }
    return set;
}

AnnotationSet load_annotations(const std::filesystem::path& path, AnnotationFormat format) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read annotations '" + path.string() + "'");
    }
    return parse_annotations(in, format, path.string());
}

double recall_at_iou(std::span<const IntervalPair> pairs, double threshold) {
    if (pairs.empty()) {
        throw InvalidArgument("recall needs at least one prediction/ground-truth pair");
    }
    const auto hits = std::count_if(pairs.begin(), pairs.end(), [&](const IntervalPair& p) {
        return temporal_iou(p.prediction, p.truth) >= threshold;
    });
    return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double mean_iou(std::span<const IntervalPair> pairs) {
    if (pairs.empty()) {
        throw InvalidArgument("mean IoU needs at least one prediction/ground-truth pair");
    }
    double sum = 0.0;
    for (const auto& p : pairs) {
        sum += temporal_iou(p.prediction, p.truth);
    }
    return sum / static_cast<double>(pairs.size());
}

namespace {

using JoinKey = std::pair<std::string, std::string>;

std::string describe_key(const JoinKey& key, const TimeInterval& span) {
    return key.first + " \"" + key.second + "\" " + span.to_string();
}

std::string summarize(const std::vector<std::string>& items) {
    std::string out;
    const std::size_t shown = std::min<std::size_t>(items.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
        out += "\n  " + items[i];
    }
    if (items.size() > shown) {
        out += "\n  ... and " + std::to_string(items.size() - shown) + " more";
    }
    return out;
}

bool interval_less(const TimeInterval& a, const TimeInterval& b) {
    return std::make_pair(a.start(), a.end()) < std::make_pair(b.start(), b.end());
}

} // namespace

EvalReport evaluate(std::span<const PredictionRecord> predictions, std::span<const GroundTruthAnnotation> annotations,
                    const EvaluateOptions& options) {
    if (predictions.empty()) {
        throw EvaluationError("no predictions to evaluate");
    }
    if (annotations.empty()) {
        throw EvaluationError("no annotations to evaluate against");
    }

    std::map<JoinKey, std::vector<TimeInterval>> truths;
    for (const auto& a : annotations) {
        truths[{a.video_id, normalize_whitespace(a.query.text())}].push_back(a.interval);
    }
    std::map<JoinKey, std::vector<TimeInterval>> preds;
    for (const auto& p : predictions) {
        preds[{p.video_id, normalize_whitespace(p.query)}].push_back(p.moment);
    }

    EvalReport report;
    for (auto& [key, gt] : truths) {
        std::stable_sort(gt.begin(), gt.end(), interval_less);
        if (gt.size() > 1) {
            report.warnings.push_back("duplicate annotation key " + key.first + " \"" + key.second + "\" (" +
                                      std::to_string(gt.size()) + " entries) matched positionally");
        }
        auto found = preds.find(key);
        std::vector<TimeInterval> empty;
        auto& pr = found != preds.end() ? found->second : empty;
        std::stable_sort(pr.begin(), pr.end(), interval_less);
        const std::size_t paired = std::min(gt.size(), pr.size());
        for (std::size_t i = 0; i < paired; ++i) {
            report.per_query.push_back({key.first, key.second, pr[i], gt[i], temporal_iou(pr[i], gt[i])});
        }
        for (std::size_t i = paired; i < gt.size(); ++i) {
            report.unmatched_annotations.push_back(describe_key(key, gt[i]));
        }
        for (std::size_t i = paired; i < pr.size(); ++i) {
            report.unmatched_predictions.push_back(describe_key(key, pr[i]));
        }
    }
    for (const auto& [key, pr] : preds) {
        if (!truths.contains(key)) {
            for (const auto& span : pr) {
                report.unmatched_predictions.push_back(describe_key(key, span));
            }
        }
    }

    const bool has_unmatched = !report.unmatched_predictions.empty() || !report.unmatched_annotations.empty();
    if (has_unmatched && !options.allow_partial) {
        throw EvaluationError(std::to_string(report.unmatched_predictions.size()) + " unmatched predictions and " +
                              std::to_string(report.unmatched_annotations.size()) + " unmatched annotations" +
                              (report.unmatched_predictions.empty() ? "" : "\nunmatched predictions:" + summarize(report.unmatched_predictions)) +
                              (report.unmatched_annotations.empty() ? "" : "\nunmatched annotations:" + summarize(report.unmatched_annotations)));
    }
    if (report.per_query.empty()) {
        throw EvaluationError("no prediction matched any annotation");
    }

    std::vector<IntervalPair> pairs;
    pairs.reserve(report.per_query.size());
    for (const auto& q : report.per_query) {
        pairs.push_back({q.prediction, q.truth});
    }
    report.n = pairs.size();
    for (double t : kRecallThresholds) {
        report.recall_at[t] = recall_at_iou(pairs, t);
    }
    report.mean_iou = mean_iou(pairs);
    return report;
}

EvalReport evaluate(const std::filesystem::path& predictions_path, const std::filesystem::path& annotations_path,
                    AnnotationFormat format, const EvaluateOptions& options) {
    const auto predictions = read_predictions(predictions_path);
    auto annotations = load_annotations(annotations_path, format);
    auto report = evaluate(predictions, annotations.annotations, options);
    for (const auto& r : annotations.rejects) {
        report.warnings.push_back(annotations_path.string() + ":" + std::to_string(r.line) + " rejected: " + r.reason);
    }
    return report;
}

namespace {

std::string threshold_key(double t) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f", t);
    return buf;
}

} // namespace

nlohmann::ordered_json report_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["n"] = report.n;
    nlohmann::ordered_json recall = nlohmann::ordered_json::object();
    for (const auto& [t, r] : report.recall_at) {
        recall[threshold_key(t)] = r;
    }
    j["recall"] = recall;
    j["miou"] = report.mean_iou;
    return j;
}

std::string report_table(const EvalReport& report) {
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-8s %8s %8s %8s %8s\n", "n", "mIoU", "R@0.3", "R@0.5", "R@0.7");
    out += buf;
    auto pct = [&](double t) {
        auto it = report.recall_at.find(t);
        return it == report.recall_at.end() ? 0.0 : it->second * 100.0;
    };
    std::snprintf(buf, sizeof buf, "%-8zu %8.2f %8.2f %8.2f %8.2f\n", report.n, report.mean_iou * 100.0, pct(0.3),
                  pct(0.5), pct(0.7));
    out += buf;
    return out;
}

void write_per_query_csv(const EvalReport& report, std::ostream& out) {
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') {
                q += '"';
            }
            q += c;
        }
        return q + "\"";
    };
    out << "video_id,query,pred_start,pred_end,gt_start,gt_end,tiou\n";
    char buf[160];
    for (const auto& q : report.per_query) {
        std::snprintf(buf, sizeof buf, ",%.3f,%.3f,%.3f,%.3f,%.6f\n", q.prediction.start(), q.prediction.end(),
                      q.truth.start(), q.truth.end(), q.iou);
        out << quote(q.video_id) << ',' << quote(q.query) << buf;
    }
}

} // namespace vtg
