#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace domainlens {

enum class FeatureChannel { Meta, Content, Link };

std::string_view to_string(FeatureChannel c);
FeatureChannel feature_channel_from_string(std::string_view s);

struct ColumnDescriptor {
    FeatureChannel channel = FeatureChannel::Meta;
    std::string name;  // term, or d_in / d_out / t_ratio

    bool operator==(const ColumnDescriptor&) const = default;
};

// Dense row-major matrix of per-domain features in [0,1], with row keys,
// column provenance and binary labels (0 = info, 1 = disinfo).
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    // Throws Invariant/ShapeMismatch or Invariant/OutOfRange.
    FeatureMatrix(std::vector<std::string> rows, std::vector<ColumnDescriptor> cols, std::vector<double> values,
                  std::vector<int> labels);

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return cols_.size(); }
    const std::vector<std::string>& rows() const { return rows_; }
    const std::vector<ColumnDescriptor>& cols() const { return cols_; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<double>& values() const { return values_; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_.size(), cols_.size()}; }
    double at(std::size_t r, std::size_t c) const { return values_[r * cols_.size() + c]; }

    FeatureMatrix select_rows(std::span<const std::size_t> idx) const;
    FeatureMatrix select_cols(std::span<const std::size_t> idx) const;

    bool operator==(const FeatureMatrix&) const = default;

private:
    std::vector<std::string> rows_;
    std::vector<ColumnDescriptor> cols_;
    std::vector<double> values_;
    std::vector<int> labels_;
};

// Column-wise concatenation in argument order. Throws Data/RowKeyMismatch
// unless every matrix has identical row keys in identical order.
FeatureMatrix amalgamate(std::span<const FeatureMatrix> parts);
FeatureMatrix amalgamate(const FeatureMatrix& meta, const FeatureMatrix& content, const FeatureMatrix& link);

}  // namespace domainlens
