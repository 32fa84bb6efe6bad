#include "domainlens/feature_matrix.hpp"

#include "domainlens/error.hpp"

#include <cmath>

namespace domainlens {

std::string_view to_string(FeatureChannel c) {
    switch (c) {
        case FeatureChannel::Meta: return "meta";
        case FeatureChannel::Content: return "content";
        default: return "link";
    }
}

FeatureChannel feature_channel_from_string(std::string_view s) {
    if (s == "meta") return FeatureChannel::Meta;
    if (s == "content") return FeatureChannel::Content;
    if (s == "link" || s == "hyperlinks") return FeatureChannel::Link;
    throw config_error("InvalidArgument", "unknown feature channel '" + std::string(s) + "'");
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> rows, std::vector<ColumnDescriptor> cols,
                             std::vector<double> values, std::vector<int> labels)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.size() != rows_.size() * cols_.size() || labels_.size() != rows_.size())
        throw invariant_error("ShapeMismatch", std::to_string(rows_.size()) + " rows x " + std::to_string(cols_.size()) +
                                                   " cols vs " + std::to_string(values_.size()) + " values and " +
                                                   std::to_string(labels_.size()) + " labels");
    for (double v : values_)
        if (!(v >= 0.0 && v <= 1.0)) throw invariant_error("OutOfRange", "feature value " + std::to_string(v));
    for (int l : labels_)
        if (l != 0 && l != 1) throw invariant_error("OutOfRange", "label " + std::to_string(l));
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> idx) const {
    std::vector<std::string> rows;
    std::vector<double> values;
    std::vector<int> labels;
    rows.reserve(idx.size());
    values.reserve(idx.size() * cols_.size());
    for (std::size_t i : idx) {
        rows.push_back(rows_.at(i));
        labels.push_back(labels_[i]);
        auto r = row(i);
        values.insert(values.end(), r.begin(), r.end());
    }
    return FeatureMatrix(std::move(rows), cols_, std::move(values), std::move(labels));
}

FeatureMatrix FeatureMatrix::select_cols(std::span<const std::size_t> idx) const {
    std::vector<ColumnDescriptor> cols;
    for (std::size_t c : idx) cols.push_back(cols_.at(c));
    std::vector<double> values;
    values.reserve(rows_.size() * idx.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (std::size_t c : idx) values.push_back(at(r, c));
    return FeatureMatrix(rows_, std::move(cols), std::move(values), labels_);
}

FeatureMatrix amalgamate(std::span<const FeatureMatrix> parts) {
    if (parts.empty()) return {};
    const auto& keys = parts.front().rows();
    std::vector<ColumnDescriptor> cols;
    for (const auto& p : parts) {
        if (p.rows() != keys) throw data_error("RowKeyMismatch", "channel matrices disagree on row keys or order");
        if (p.labels() != parts.front().labels()) throw data_error("RowKeyMismatch", "channel matrices disagree on labels");
        cols.insert(cols.end(), p.cols().begin(), p.cols().end());
    }
    std::vector<double> values;
    values.reserve(keys.size() * cols.size());
    for (std::size_t r = 0; r < keys.size(); ++r)
        for (const auto& p : parts) {
            auto row = p.row(r);
            values.insert(values.end(), row.begin(), row.end());
        }
    return FeatureMatrix(keys, std::move(cols), std::move(values), parts.front().labels());
}

FeatureMatrix amalgamate(const FeatureMatrix& meta, const FeatureMatrix& content, const FeatureMatrix& link) {
    const FeatureMatrix parts[] = {meta, content, link};
    return amalgamate(std::span<const FeatureMatrix>(parts));
}

}  // namespace domainlens
