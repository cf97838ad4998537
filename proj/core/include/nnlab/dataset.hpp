#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nnlab {

// Normalized classification data: inputs in [0,1], one-hot targets.
struct Dataset {
    std::string name;
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;
    std::vector<std::size_t> class_counts;

    std::size_t size() const { return inputs.size(); }
    std::size_t n_inputs() const { return inputs.empty() ? 0 : inputs.front().size(); }
    std::size_t n_classes() const { return class_counts.size(); }
    std::size_t target_class(std::size_t row) const;
};

enum class ColumnKind { Numeric, Categorical, Class, Ignore };

struct ColumnSpec {
    ColumnKind kind = ColumnKind::Numeric;
    std::string name;
    // Categorical: pinned category order; empty = discover (sorted unique).
    std::vector<std::string> categories;
    // Categorical: append one extra input that is 1 iff the value is missing.
    // Default keeps missing values as an all-zeros one-hot pattern.
    bool missing_indicator = false;
    // Class: pinned label order; empty = discover (sorted unique).
    std::vector<std::string> classes;
};

struct SchemaSpec {
    std::string name;
    std::string missing_marker = "?";
    std::vector<ColumnSpec> columns;

    void validate() const; // exactly one class column, >= 1 feature column
    // Input width implied by the schema alone; empty if any categorical
    // column leaves its categories to be discovered from data.
    std::optional<std::size_t> input_width() const;
};

struct LoadStats {
    std::size_t rows_read = 0;
    std::size_t rows_dropped_missing_class = 0;
    std::size_t input_width = 0;
};

SchemaSpec schema_from_json(const std::string& text);
SchemaSpec load_schema(const std::filesystem::path& path);

// Delimited text (comma or whitespace). Numeric columns min-max normalized to
// [0,1] over non-missing entries; constant columns map to 0.0; missing
// numerics get the column's post-normalization mean. Rows whose class value
// is missing are dropped.
Dataset load_csv(const std::filesystem::path& path, const SchemaSpec& schema,
                 LoadStats* stats = nullptr);

enum class SyntheticKind { Xor, Blobs };

// xor: the 4 XOR patterns repeated to n rows. blobs: two clusters at
// (0.25,0.25) and (0.75,0.75), sigma 0.08, clamped to [0,1], balanced classes.
Dataset gen_synthetic(SyntheticKind kind, std::size_t n, std::uint64_t seed);

// Largest class share in percent.
double majority_fraction(const Dataset& d);

// Canonical dump: feature columns then one-hot target columns.
void write_normalized_csv(std::ostream& out, const Dataset& d);

Dataset subset(const Dataset& d, std::span<const std::size_t> rows);

} // namespace nnlab
