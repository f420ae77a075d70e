#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace skewlab {

// Fixed-width numeric dataset with binary labels. Label 1 is the
// majority class by convention, label 0 the minority class.
struct Dataset {
    int dim = 0;
    std::vector<double> features;  // row-major, rows() * dim values
    std::vector<int> labels;       // each 0 or 1
    size_t n_class1 = 0;
    size_t n_class0 = 0;

    Dataset() = default;
    explicit Dataset(int dim) : dim(dim) {}

    size_t rows() const { return labels.size(); }

    std::span<const double> row(size_t i) const {
        return {features.data() + i * static_cast<size_t>(dim), static_cast<size_t>(dim)};
    }

    void add_row(std::span<const double> x, int label);

    /// New dataset holding the given rows, in the given order.
    Dataset subset(std::span<const size_t> rows) const;

    bool operator==(const Dataset&) const = default;
};

// CSV round trip. Header is f0[,f1,...],label; features are written
// with 17 significant digits so load(save(ds)) == ds exactly; label is
// 0 or 1; LF line endings.
void save_dataset(const Dataset& ds, const std::filesystem::path& path);

/// Throws std::runtime_error naming the offending line on malformed input.
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace skewlab
