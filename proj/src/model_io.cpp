#include "domainlens/model_io.hpp"

#include "domainlens/error.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace domainlens {

using nlohmann::json;

namespace {

Label label_from_string(std::string_view s) {
    if (s == "info") return Label::Info;
    if (s == "disinfo") return Label::Disinfo;
    if (s == "unlabeled") return Label::Unlabeled;
    throw data_error("ModelFormat", "unknown label '" + std::string(s) + "'");
}

json summary_json(const std::optional<MetricSummary>& s) {
    if (!s) return nullptr;
    return {{"mean", s->mean}, {"min", s->min}, {"max", s->max}, {"defined", s->defined}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json text_channel_json(const FittedTextChannel& t) {
    json j;
    j["vocabulary"] = vocabulary_to_json(t.vocab, &t.maxima);
    j["selected"] = t.selected;
    j["selection_coef"] = t.selection_coef;
    j["selection_converged"] = t.selection_converged;
    return j;
}

FittedTextChannel text_channel_from_json(const json& j, TextChannel channel) {
    FittedTextChannel t;
    t.channel = channel;
    t.vocab = vocabulary_from_json(j.at("vocabulary"), &t.maxima);
    t.selected = j.at("selected").get<std::vector<std::size_t>>();
    t.selection_coef = j.at("selection_coef").get<std::vector<double>>();
    t.selection_converged = j.at("selection_converged").get<bool>();
    for (std::size_t c : t.selected)
        if (c >= t.vocab.size()) throw data_error("ModelFormat", "selected column outside vocabulary");
    if (t.maxima.values.size() != t.vocab.size()) throw data_error("ModelFormat", "norm stats do not match vocabulary");
    return t;
}

json channels_json(const ChannelSet& c) { return {{"meta", c.meta}, {"content", c.content}, {"link", c.link}}; }

ChannelSet channels_from_json(const json& j) {
    return {j.at("meta").get<bool>(), j.at("content").get<bool>(), j.at("link").get<bool>()};
}

std::string percent(const std::optional<MetricSummary>& s) {
    if (!s) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", s->mean * 100.0);
    return buf;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json to_json(const SvmHyperparams& hp) {
    return {{"C", hp.C}, {"penalty", to_string(hp.penalty)}, {"kernel", "linear"}, {"tolerance", hp.tolerance},
            {"max_iter", hp.max_iter}};
}

SvmHyperparams hyperparams_from_json(const json& j) {
    SvmHyperparams hp;
    hp.C = j.at("C").get<double>();
    hp.penalty = penalty_from_string(j.at("penalty").get<std::string>());
    hp.tolerance = j.value("tolerance", hp.tolerance);
    hp.max_iter = j.value("max_iter", hp.max_iter);
    return hp;
}

json to_json(const Metrics& m) {
    return {{"accuracy", m.accuracy},
            {"precision", optional_json(m.precision)},
            {"recall", optional_json(m.recall)},
            {"f1", optional_json(m.f1)},
            {"confusion", {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"fn", m.confusion.fn}, {"tn", m.confusion.tn}}}};
}

json to_json(const EvalReport& r) {
    json j;
    j["name"] = r.name;
    j["n_splits"] = r.n_splits;
    j["split_fraction"] = r.train_frac;
    j["seed"] = r.seed;
    j["n_rows"] = r.n_rows;
    j["n_disinfo"] = r.n_disinfo;
    j["hyperparams"] = to_json(r.hyperparams);
    j["nonconverged_fits"] = r.nonconverged_fits;
    j["metrics"] = {{"accuracy", summary_json(r.accuracy)},
                    {"precision", summary_json(r.precision)},
                    {"recall", summary_json(r.recall)},
                    {"f1", summary_json(r.f1)}};
    json splits = json::array();
    for (const auto& m : r.per_split) splits.push_back(to_json(m));
    j["per_split"] = std::move(splits);
    return j;
}

std::string eval_table(std::span<const EvalReport> reports) {
    const std::size_t first_width = 11;
    std::size_t width = 9;
    for (const auto& r : reports) width = std::max(width, r.name.size() + 2);
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.insert(0, w - s.size(), ' ');
        return s;
    };
    std::ostringstream out;
    out << std::string(first_width, ' ');
    for (const auto& r : reports) out << pad(r.name, width);
    out << '\n';
    const std::pair<const char*, std::optional<MetricSummary> EvalReport::*> rows[] = {
        {"accuracy", &EvalReport::accuracy},
        {"precision", &EvalReport::precision},
        {"recall", &EvalReport::recall},
        {"F1", &EvalReport::f1},
    };
    for (const auto& [label, member] : rows) {
        std::string head = label;
        head.resize(first_width, ' ');
        out << head;
        for (const auto& r : reports) out << pad(percent(r.*member), width);
        out << '\n';
    }
    return out.str();
}

json to_json(const DeployedModel& m) {
    json j;
    j["version"] = kModelFormatVersion;
    j["channels"] = channels_json(m.pipeline.channels);
    json vocab = json::object();
    if (m.pipeline.meta) vocab["meta"] = text_channel_json(*m.pipeline.meta);
    if (m.pipeline.content) vocab["content"] = text_channel_json(*m.pipeline.content);
    j["text_channels"] = std::move(vocab);
    json cols = json::array();
    for (const auto& c : m.classifier.columns) cols.push_back({{"channel", to_string(c.channel)}, {"name", c.name}});
    j["selected_cols"] = std::move(cols);
    j["weights"] = m.classifier.weights;
    j["bias"] = m.classifier.bias;
    j["hyperparams"] = to_json(m.classifier.hyperparams);
    j["converged"] = m.classifier.converged;
    j["training"] = {{"seed", m.seed}};
    return j;
}

DeployedModel deployed_model_from_json(const json& j) {
    try {
        if (j.at("version").get<int>() != kModelFormatVersion)
            throw data_error("ModelFormat", "unsupported model version " + j.at("version").dump());
        DeployedModel m;
        m.pipeline.channels = channels_from_json(j.at("channels"));
        const auto& tc = j.at("text_channels");
        if (m.pipeline.channels.meta) m.pipeline.meta = text_channel_from_json(tc.at("meta"), TextChannel::Meta);
        if (m.pipeline.channels.content)
            m.pipeline.content = text_channel_from_json(tc.at("content"), TextChannel::Content);
        for (const auto& c : j.at("selected_cols"))
            m.classifier.columns.push_back(
                {feature_channel_from_string(c.at("channel").get<std::string>()), c.at("name").get<std::string>()});
        m.classifier.weights = j.at("weights").get<std::vector<double>>();
        m.classifier.bias = j.at("bias").get<double>();
        m.classifier.hyperparams = hyperparams_from_json(j.at("hyperparams"));
        m.classifier.converged = j.value("converged", true);
        m.seed = j.at("training").at("seed").get<std::uint64_t>();
        if (m.classifier.weights.size() != m.classifier.columns.size())
            throw data_error("ModelFormat", "weights and selected_cols differ in length");
        if (m.pipeline.columns() != m.classifier.columns)
            throw data_error("ModelFormat", "selected_cols do not match the fitted channels");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("ModelFormat", e.what());
    }
}

json to_json(const Dataset& ds) {
    json samples = json::array();
    for (const auto& s : ds.samples)
        samples.push_back({{"domain", s.domain},
                           {"label", to_string(s.label)},
                           {"meta_tokens", s.meta_tokens},
                           {"content_tokens", s.content_tokens},
                           {"link", {s.link.d_in, s.link.d_out, s.link.t_ratio}}});
    return {{"version", 1}, {"samples", std::move(samples)}};
}

Dataset dataset_from_json(const json& j) {
    try {
        Dataset ds;
        for (const auto& s : j.at("samples")) {
            DomainSample d;
            d.domain = s.at("domain").get<std::string>();
            d.label = label_from_string(s.at("label").get<std::string>());
            d.meta_tokens = s.at("meta_tokens").get<std::vector<std::string>>();
            d.content_tokens = s.at("content_tokens").get<std::vector<std::string>>();
            const auto& l = s.at("link");
            d.link = {l.at(0).get<double>(), l.at(1).get<double>(), l.at(2).get<double>()};
            ds.samples.push_back(std::move(d));
        }
        return ds;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("DatasetFormat", e.what());
    }
}

std::string feature_matrix_csv(const FeatureMatrix& X) {
    std::string out = "domain,label";
    for (const auto& c : X.cols()) {
        out += ',';
        out += to_string(c.channel);
        out += ':';
        out += c.name;
    }
    out += '\n';
    for (std::size_t r = 0; r < X.n_rows(); ++r) {
        out += X.rows()[r];
        out += X.labels()[r] == 1 ? ",disinfo" : ",info";
        for (double v : X.row(r)) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

FeatureMatrix parse_feature_matrix_csv(std::string_view csv) {
    auto split = [](std::string_view line) {
        std::vector<std::string_view> parts;
        std::size_t pos = 0;
        for (;;) {
            auto comma = line.find(',', pos);
            parts.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return parts;
    };
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        auto nl = csv.find('\n', pos);
        auto line = csv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (lines.empty()) throw data_error("MalformedRow", "line 1: missing header");
    auto header = split(lines[0]);
    if (header.size() < 2 || header[0] != "domain" || header[1] != "label")
        throw data_error("MalformedRow", "line 1: expected domain,label,... header");
    std::vector<ColumnDescriptor> cols;
    for (std::size_t i = 2; i < header.size(); ++i) {
        auto colon = header[i].find(':');
        if (colon == std::string_view::npos) throw data_error("MalformedRow", "line 1: column without channel");
        cols.push_back({feature_channel_from_string(header[i].substr(0, colon)), std::string(header[i].substr(colon + 1))});
    }
    std::vector<std::string> rows;
    std::vector<double> values;
    std::vector<int> labels;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        auto parts = split(lines[l]);
        if (parts.size() != header.size())
            throw data_error("MalformedRow", "line " + std::to_string(l + 1) + ": wrong field count");
        rows.emplace_back(parts[0]);
        if (parts[1] == "disinfo") labels.push_back(1);
        else if (parts[1] == "info") labels.push_back(0);
        else throw data_error("MalformedRow", "line " + std::to_string(l + 1) + ": bad label");
        for (std::size_t i = 2; i < parts.size(); ++i) {
            double v = 0.0;
            auto res = std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), v);
            if (res.ec != std::errc() || res.ptr != parts[i].data() + parts[i].size())
                throw data_error("MalformedRow", "line " + std::to_string(l + 1) + ": bad number");
            values.push_back(v);
        }
    }
    return FeatureMatrix(std::move(rows), std::move(cols), std::move(values), std::move(labels));
}

NetworkMap parse_network_map(std::string_view csv) {
    NetworkMap out;
    std::istringstream in{std::string(csv)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != "domain,network") throw data_error("MalformedRow", "line 1: expected domain,network header");
            continue;
        }
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw data_error("MalformedRow", "line " + std::to_string(lineno));
        std::string domain = normalize_domain_key(line.substr(0, comma));
        if (!out.emplace(domain, line.substr(comma + 1)).second) throw data_error("DuplicateDomain", domain);
    }
    return out;
}

std::string network_map_csv(const NetworkMap& networks) {
    std::string out = "domain,network\n";
    for (const auto& [d, n] : networks) out += d + ',' + n + '\n';
    return out;
}

}  // namespace domainlens
