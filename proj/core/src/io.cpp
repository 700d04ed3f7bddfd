#include "qrec/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "qrec/errors.hpp"

namespace qrec {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t");
    return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

double parse_score(std::size_t line, const std::string& field, const std::string& cell) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end) {
        throw ParseError(line, field, "'" + cell + "' is not a number");
    }
    if (!std::isfinite(value)) {
        throw ParseError(line, field, "score must be finite");
    }
    return value;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::string> default_labels(const char* prefix, std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = prefix + std::to_string(i + 1);
    return labels;
}

std::vector<std::string> labels_or_default(const std::vector<std::string>& labels,
                                           const char* prefix, std::size_t n) {
    return labels.empty() ? default_labels(prefix, n) : labels;
}

void require_csv_safe(const std::vector<std::string>& labels, const char* what) {
    for (const auto& label : labels) {
        if (label.find_first_of(",\"\r\n") != std::string::npos) {
            throw IoError(std::string(what) + " label '" + label +
                          "' contains characters the CSV format cannot carry");
        }
    }
}

bool is_json_path(const std::filesystem::path& path) {
    return path.extension() == ".json";
}

/// Accumulates the index sets of a long-form dataset in first-appearance
/// order (or as pinned by the explicit "subjects"/"videos" arrays).
struct DatasetBuilder {
    std::vector<std::string> subjects, videos, contents;
    std::map<std::string, std::size_t> subject_index, video_index, content_index;
    std::vector<std::size_t> video_content;
    bool pinned = false;

    std::size_t subject(const std::string& name, std::size_t record) {
        const auto it = subject_index.find(name);
        if (it != subject_index.end()) return it->second;
        if (pinned) throw ParseError(record, "subject", "unknown subject '" + name + "'");
        subject_index.emplace(name, subjects.size());
        subjects.push_back(name);
        return subjects.size() - 1;
    }

    std::size_t content(const std::string& name) {
        const auto it = content_index.find(name);
        if (it != content_index.end()) return it->second;
        content_index.emplace(name, contents.size());
        contents.push_back(name);
        return contents.size() - 1;
    }

    std::size_t video(const std::string& name, const std::string* content_name,
                      std::size_t record) {
        const auto it = video_index.find(name);
        if (it != video_index.end()) {
            const std::size_t e = it->second;
            if (content_name) {
                const auto cit = content_index.find(*content_name);
                if (cit == content_index.end() || cit->second != video_content[e]) {
                    throw ParseError(record, "content",
                                     "video '" + name + "' listed with two different contents");
                }
            }
            return e;
        }
        if (pinned) throw ParseError(record, "video", "unknown video '" + name + "'");
        if (!content_name) {
            throw ParseError(record, "content",
                             "first record of video '" + name + "' must name its content");
        }
        video_index.emplace(name, videos.size());
        videos.push_back(name);
        video_content.push_back(content(*content_name));
        return videos.size() - 1;
    }
};

ScoreMatrix load_dataset_csv(const std::string& text) {
    std::vector<std::pair<std::size_t, std::string>> lines;  // (1-based number, content)
    {
        std::size_t number = 0;
        std::string line;
        std::istringstream in(text);
        while (std::getline(in, line)) {
            ++number;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim(line).empty()) continue;
            lines.emplace_back(number, line);
        }
    }
    if (lines.empty()) throw ParseError(1, "header", "empty dataset file");

    const std::vector<std::string> header = split_csv(lines.front().second);
    if (header.size() < 3) {
        throw ParseError(lines.front().first, "header",
                         "expected 'video,content,<subject labels...>'");
    }
    std::vector<std::string> subjects(header.begin() + 2, header.end());
    for (std::size_t s = 0; s < subjects.size(); ++s) {
        if (subjects[s].empty()) {
            throw ParseError(lines.front().first, "header", "empty subject label");
        }
        for (std::size_t t = 0; t < s; ++t) {
            if (subjects[t] == subjects[s]) {
                throw ParseError(lines.front().first, "header",
                                 "duplicate subject label '" + subjects[s] + "'");
            }
        }
    }

    const std::size_t S = subjects.size();
    std::vector<std::string> videos, contents;
    std::map<std::string, std::size_t> video_index, content_index;
    std::vector<std::size_t> content_of;
    std::vector<double> scores;
    std::vector<std::uint8_t> present;

    for (std::size_t row = 1; row < lines.size(); ++row) {
        const auto& [number, line] = lines[row];
        const std::vector<std::string> cells = split_csv(line);
        if (cells.size() != S + 2) {
            throw ParseError(number, "row",
                             "expected " + std::to_string(S + 2) + " cells, got " +
                                 std::to_string(cells.size()));
        }
        const std::string& video = cells[0];
        const std::string& content = cells[1];
        if (video.empty()) throw ParseError(number, "video", "empty video label");
        if (content.empty()) throw ParseError(number, "content", "empty content label");
        if (!video_index.emplace(video, videos.size()).second) {
            throw ParseError(number, "video", "duplicate video label '" + video + "'");
        }
        videos.push_back(video);
        const auto [it, inserted] = content_index.emplace(content, contents.size());
        if (inserted) contents.push_back(content);
        content_of.push_back(it->second);
        for (std::size_t s = 0; s < S; ++s) {
            const std::string& cell = cells[2 + s];
            if (cell.empty() || cell == "*") {
                scores.push_back(0.0);
                present.push_back(0);
            } else {
                scores.push_back(parse_score(number, subjects[s], cell));
                present.push_back(1);
            }
        }
    }
    if (videos.empty()) throw ParseError(lines.front().first, "header", "no data rows");

    const std::size_t E = videos.size();
    const std::size_t C = contents.size();
    Labels labels{std::move(videos), std::move(subjects), std::move(contents)};
    return ScoreMatrix(E, S, std::move(scores), std::move(present), std::move(content_of), C,
                       std::move(labels));
}

ScoreMatrix load_dataset_json(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, "json", e.what());
    }
    if (!root.is_object()) throw ParseError(0, "json", "expected a top-level object");
    if (root.contains("format") && root["format"] != "qrec-dataset") {
        throw ParseError(0, "format", "not a qrec dataset file");
    }
    if (!root.contains("records") || !root["records"].is_array()) {
        throw ParseError(0, "records", "missing 'records' array");
    }

    DatasetBuilder builder;
    if (root.contains("subjects")) {
        for (const auto& entry : root["subjects"]) {
            if (!entry.is_string()) throw ParseError(0, "subjects", "subject names are strings");
            builder.subject(entry.get<std::string>(), 0);
        }
    }
    if (root.contains("videos")) {
        std::size_t index = 0;
        for (const auto& entry : root["videos"]) {
            ++index;
            if (!entry.is_object() || !entry.contains("name") || !entry.contains("content")) {
                throw ParseError(index, "videos", "video entries need 'name' and 'content'");
            }
            const std::string content = entry["content"].get<std::string>();
            builder.video(entry["name"].get<std::string>(), &content, index);
        }
    }
    builder.pinned = root.contains("subjects") && root.contains("videos");

    struct Cell {
        std::size_t e, s;
        double score;
    };
    std::vector<Cell> cells;
    std::size_t record_number = 0;
    for (const auto& record : root["records"]) {
        ++record_number;
        if (!record.is_object() || !record.contains("video") || !record.contains("subject") ||
            !record.contains("score")) {
            throw ParseError(record_number, "records",
                             "records need 'video', 'subject' and 'score'");
        }
        if (!record["score"].is_number()) {
            throw ParseError(record_number, "score", "score must be a number");
        }
        std::optional<std::string> content;
        if (record.contains("content")) content = record["content"].get<std::string>();
        const std::size_t e = builder.video(record["video"].get<std::string>(),
                                            content ? &*content : nullptr, record_number);
        const std::size_t s = builder.subject(record["subject"].get<std::string>(),
                                              record_number);
        cells.push_back({e, s, record["score"].get<double>()});
    }

    const std::size_t E = builder.videos.size();
    const std::size_t S = builder.subjects.size();
    if (E == 0 || S == 0) throw ParseError(0, "records", "dataset has no videos or subjects");
    std::vector<double> scores(E * S, 0.0);
    std::vector<std::uint8_t> present(E * S, 0);
    for (const Cell& cell : cells) {
        const std::size_t i = cell.e * S + cell.s;
        if (present[i]) {
            throw ParseError(0, "records",
                             "duplicate record for video '" + builder.videos[cell.e] +
                                 "', subject '" + builder.subjects[cell.s] + "'");
        }
        scores[i] = cell.score;
        present[i] = 1;
    }

    Labels labels{builder.videos, builder.subjects, builder.contents};
    return ScoreMatrix(E, S, std::move(scores), std::move(present), builder.video_content,
                       builder.contents.size(), std::move(labels));
}

ordered_json config_to_json(const SolverConfig& cfg) {
    ordered_json j;
    j["alpha"] = cfg.alpha;
    j["stop_threshold"] = cfg.stop_threshold;
    j["max_iterations"] = cfg.max_iterations;
    j["gauge"] = std::string(gauge_name(cfg.gauge));
    j["variance_floor"] = cfg.variance_floor;
    return j;
}

SolverConfig config_from_json(const ordered_json& j) {
    SolverConfig cfg;
    cfg.alpha = j.at("alpha").get<double>();
    cfg.stop_threshold = j.at("stop_threshold").get<double>();
    cfg.max_iterations = j.at("max_iterations").get<std::size_t>();
    const auto gauge = parse_gauge(j.at("gauge").get<std::string>());
    if (!gauge) throw ParseError(0, "gauge", "unknown gauge mode");
    cfg.gauge = *gauge;
    cfg.variance_floor = j.at("variance_floor").get<double>();
    return cfg;
}

ordered_json ci_to_json(double halfwidth) {
    if (std::isinf(halfwidth)) return "inf";
    return halfwidth;
}

double ci_from_json(const ordered_json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw ParseError(0, "ci95", "expected a number or 'inf'");
    }
    return j.get<double>();
}

}  // namespace

ScoreMatrix load_dataset(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    return is_json_path(path) ? load_dataset_json(text) : load_dataset_csv(text);
}

void save_dataset(const ScoreMatrix& m, const std::filesystem::path& path) {
    const std::vector<std::string> videos = labels_or_default(m.labels().videos, "v",
                                                              m.video_count());
    const std::vector<std::string> subjects = labels_or_default(m.labels().subjects, "s",
                                                                m.subject_count());
    const std::vector<std::string> contents = labels_or_default(m.labels().contents, "c",
                                                                m.content_count());
    if (is_json_path(path)) {
        ordered_json root;
        root["format"] = "qrec-dataset";
        root["subjects"] = subjects;
        root["videos"] = ordered_json::array();
        for (std::size_t e = 0; e < m.video_count(); ++e) {
            root["videos"].push_back({{"name", videos[e]},
                                      {"content", contents[m.content_of(e)]}});
        }
        root["records"] = ordered_json::array();
        for (std::size_t e = 0; e < m.video_count(); ++e) {
            for (std::size_t s = 0; s < m.subject_count(); ++s) {
                if (!m.present(e, s)) continue;
                root["records"].push_back({{"video", videos[e]},
                                           {"subject", subjects[s]},
                                           {"content", contents[m.content_of(e)]},
                                           {"score", m.score(e, s)}});
            }
        }
        write_file(path, root.dump(2) + "\n");
        return;
    }

    require_csv_safe(videos, "video");
    require_csv_safe(subjects, "subject");
    require_csv_safe(contents, "content");
    std::string out = "video,content";
    for (const auto& subject : subjects) out += "," + subject;
    out += "\n";
    for (std::size_t e = 0; e < m.video_count(); ++e) {
        out += videos[e] + "," + contents[m.content_of(e)];
        for (std::size_t s = 0; s < m.subject_count(); ++s) {
            out += ",";
            out += m.present(e, s) ? format_double(m.score(e, s)) : "*";
        }
        out += "\n";
    }
    write_file(path, out);
}

RecoveryResult run_recovery(const ScoreMatrix& m, MethodId method, const SolverConfig& cfg) {
    RecoveryResult result;
    result.method = method;
    result.config = cfg;
    result.units = method == MethodId::ZsSrMos ? "z-score" : "score";
    result.video_labels = labels_or_default(m.labels().videos, "v", m.video_count());
    result.subject_labels = labels_or_default(m.labels().subjects, "s", m.subject_count());
    result.content_labels = labels_or_default(m.labels().contents, "c", m.content_count());

    if (method == MethodId::Mle) {
        const ParamEstimates estimates = solve(m, cfg);
        result.scores = estimates.params.x;
        result.ci_halfwidth = estimates.ci_halfwidth.x;
        MleDetails details;
        details.bias = estimates.params.b;
        details.bias_ci = estimates.ci_halfwidth.b;
        details.inconsistency = estimates.params.v;
        details.inconsistency_ci = estimates.ci_halfwidth.v;
        details.ambiguity = estimates.params.a;
        details.ambiguity_ci = estimates.ci_halfwidth.a;
        details.iterations = estimates.iterations_used;
        details.converged = estimates.converged;
        details.final_delta_x = estimates.final_delta_x;
        result.mle = std::move(details);
        return result;
    }

    MosResult baseline;
    switch (method) {
        case MethodId::Mos: baseline = mos(m); break;
        case MethodId::SrMos: baseline = sr_mos(m); break;
        case MethodId::ZsSrMos: baseline = zs_sr_mos(m); break;
        case MethodId::Mle: break;  // handled above
    }
    result.scores = std::move(baseline.scores);
    result.ci_halfwidth = std::move(baseline.ci_halfwidth);
    return result;
}

void save_results(const RecoveryResult& result, const std::filesystem::path& path) {
    ordered_json root;
    root["format"] = "qrec-results";
    root["method"] = std::string(method_name(result.method));
    root["units"] = result.units;
    root["config"] = config_to_json(result.config);
    root["videos"] = ordered_json::array();
    for (std::size_t e = 0; e < result.scores.size(); ++e) {
        root["videos"].push_back({{"name", result.video_labels[e]},
                                  {"score", result.scores[e]},
                                  {"ci95", ci_to_json(result.ci_halfwidth[e])}});
    }
    if (result.mle) {
        const MleDetails& d = *result.mle;
        root["subjects"] = ordered_json::array();
        for (std::size_t s = 0; s < d.bias.size(); ++s) {
            root["subjects"].push_back({{"name", result.subject_labels[s]},
                                        {"bias", d.bias[s]},
                                        {"bias_ci95", ci_to_json(d.bias_ci[s])},
                                        {"inconsistency", d.inconsistency[s]},
                                        {"inconsistency_ci95", ci_to_json(d.inconsistency_ci[s])}});
        }
        root["contents"] = ordered_json::array();
        for (std::size_t c = 0; c < d.ambiguity.size(); ++c) {
            root["contents"].push_back({{"name", result.content_labels[c]},
                                        {"ambiguity", d.ambiguity[c]},
                                        {"ambiguity_ci95", ci_to_json(d.ambiguity_ci[c])}});
        }
        root["iterations"] = d.iterations;
        root["converged"] = d.converged;
        root["final_delta_x"] = d.final_delta_x;
    }
    write_file(path, root.dump(2) + "\n");
}

RecoveryResult load_results(const std::filesystem::path& path) {
    ordered_json root;
    try {
        root = ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, "json", e.what());
    }
    if (!root.is_object() || root.value("format", "") != "qrec-results") {
        throw ParseError(0, "format", "not a qrec results file");
    }
    RecoveryResult result;
    const auto method = parse_method(root.at("method").get<std::string>());
    if (!method) throw ParseError(0, "method", "unknown method");
    result.method = *method;
    result.units = root.at("units").get<std::string>();
    result.config = config_from_json(root.at("config"));
    for (const auto& video : root.at("videos")) {
        result.video_labels.push_back(video.at("name").get<std::string>());
        result.scores.push_back(video.at("score").get<double>());
        result.ci_halfwidth.push_back(ci_from_json(video.at("ci95")));
    }
    if (root.contains("subjects")) {
        MleDetails d;
        for (const auto& subject : root.at("subjects")) {
            result.subject_labels.push_back(subject.at("name").get<std::string>());
            d.bias.push_back(subject.at("bias").get<double>());
            d.bias_ci.push_back(ci_from_json(subject.at("bias_ci95")));
            d.inconsistency.push_back(subject.at("inconsistency").get<double>());
            d.inconsistency_ci.push_back(ci_from_json(subject.at("inconsistency_ci95")));
        }
        for (const auto& content : root.at("contents")) {
            result.content_labels.push_back(content.at("name").get<std::string>());
            d.ambiguity.push_back(content.at("ambiguity").get<double>());
            d.ambiguity_ci.push_back(ci_from_json(content.at("ambiguity_ci95")));
        }
        d.iterations = root.at("iterations").get<std::size_t>();
        d.converged = root.at("converged").get<bool>();
        d.final_delta_x = root.at("final_delta_x").get<double>();
        result.mle = std::move(d);
    }
    return result;
}

void save_rejection(const RejectionResult& rejection, const ScoreMatrix& m,
                    const std::filesystem::path& path) {
    const std::vector<std::string> subjects = labels_or_default(m.labels().subjects, "s",
                                                                m.subject_count());
    ordered_json root;
    root["format"] = "qrec-rejection";
    root["rejected"] = ordered_json::array();
    for (const std::size_t s : rejection.rejected) root["rejected"].push_back(subjects[s]);
    root["subjects"] = ordered_json::array();
    for (std::size_t s = 0; s < m.subject_count(); ++s) {
        root["subjects"].push_back({{"name", subjects[s]},
                                    {"p", rejection.p[s]},
                                    {"q", rejection.q[s]},
                                    {"rejected", rejection.is_rejected(s)}});
    }
    write_file(path, root.dump(2) + "\n");
}

void export_plot_data(const std::vector<ExperimentReport>& reports,
                      const std::filesystem::path& path) {
    struct Row {
        std::string method;
        double condition, mean, sd;
        int completed, dropped;
    };
    std::vector<Row> rows;
    for (const ExperimentReport& report : reports) {
        for (std::size_t i = 0; i < report.condition_axis.size(); ++i) {
            rows.push_back({std::string(method_name(report.method)), report.condition_axis[i],
                            report.rmse_mean[i], report.rmse_std[i], report.completed[i],
                            report.dropped[i]});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& lhs, const Row& rhs) {
        return std::tie(lhs.method, lhs.condition) < std::tie(rhs.method, rhs.condition);
    });

    std::string out = "method,condition,rmse_mean,rmse_std,repetitions,dropped\n";
    for (const Row& row : rows) {
        out += row.method + "," + format_double(row.condition) + "," +
               format_double(row.mean) + "," + format_double(row.sd) + "," +
               std::to_string(row.completed) + "," + std::to_string(row.dropped) + "\n";
    }
    write_file(path, out);
}

}  // namespace qrec
