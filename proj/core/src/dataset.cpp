#include "nnlab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nnlab/errors.hpp"
#include "nnlab/util.hpp"

namespace nnlab {

using nlohmann::json;

std::size_t Dataset::target_class(std::size_t row) const {
    const auto& t = targets[row];
    std::size_t best = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i] > t[best]) best = i;
    }
    return best;
}

void SchemaSpec::validate() const {
    std::size_t n_class = 0, n_feature = 0;
    for (const auto& c : columns) {
        switch (c.kind) {
        case ColumnKind::Class: ++n_class; break;
        case ColumnKind::Numeric:
        case ColumnKind::Categorical: ++n_feature; break;
        case ColumnKind::Ignore: break;
        }
    }
    if (n_class != 1) throw ConfigError("schema: exactly one class column required");
    if (n_feature < 1) throw ConfigError("schema: at least one feature column required");
}

std::optional<std::size_t> SchemaSpec::input_width() const {
    std::size_t width = 0;
    for (const auto& c : columns) {
        if (c.kind == ColumnKind::Numeric) {
            width += 1;
        } else if (c.kind == ColumnKind::Categorical) {
            if (c.categories.empty()) return std::nullopt;
            width += c.categories.size() + (c.missing_indicator ? 1 : 0);
        }
    }
    return width;
}

SchemaSpec schema_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("schema json: ") + e.what());
    }
    SchemaSpec s;
    try {
        s.name = j.value("name", "");
        s.missing_marker = j.value("missing", "?");
        for (const json& jc : j.at("columns")) {
            ColumnSpec c;
            const std::string kind = jc.at("kind").get<std::string>();
            if (kind == "numeric") {
                c.kind = ColumnKind::Numeric;
            } else if (kind == "categorical") {
                c.kind = ColumnKind::Categorical;
            } else if (kind == "class") {
                c.kind = ColumnKind::Class;
            } else if (kind == "ignore") {
                c.kind = ColumnKind::Ignore;
            } else {
                throw DataError("schema json: unknown column kind '" + kind + "'");
            }
            c.name = jc.value("name", "");
            if (jc.contains("categories")) {
                c.categories = jc.at("categories").get<std::vector<std::string>>();
            }
            c.missing_indicator = jc.value("missing_indicator", false);
            if (jc.contains("classes")) {
                c.classes = jc.at("classes").get<std::vector<std::string>>();
            }
            s.columns.push_back(std::move(c));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("schema json: ") + e.what());
    }
    s.validate();
    return s;
}

SchemaSpec load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open schema file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return schema_from_json(text);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokenize(const std::string& line, bool comma) {
    std::vector<std::string> out;
    if (comma) {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
        if (!line.empty() && line.back() == ',') out.push_back("");
    } else {
        std::stringstream ss(line);
        std::string tok;
        while (ss >> tok) out.push_back(tok);
    }
    return out;
}

double parse_number(const std::string& tok, std::size_t col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw DataError("column " + std::to_string(col) + ": cannot parse numeric value '" + tok +
                        "'");
    }
}

} // namespace

Dataset load_csv(const std::filesystem::path& path, const SchemaSpec& schema, LoadStats* stats) {
    schema.validate();
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path.string());

    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool comma = false, sniffed = false;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (!sniffed) {
            comma = t.find(',') != std::string::npos;
            sniffed = true;
        }
        auto toks = tokenize(t, comma);
        if (toks.size() != schema.columns.size()) {
            throw DataError(path.string() + ": row " + std::to_string(rows.size() + 1) + " has " +
                            std::to_string(toks.size()) + " fields, schema expects " +
                            std::to_string(schema.columns.size()));
        }
        rows.push_back(std::move(toks));
    }
    if (rows.empty()) throw DataError("empty dataset file: " + path.string());

    const std::size_t n_cols = schema.columns.size();
    const std::string& missing = schema.missing_marker;

    // Class labels: pinned or discovered (sorted). Rows with a missing class
    // value are dropped up front so column statistics ignore them too.
    std::size_t class_col = 0;
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (schema.columns[c].kind == ColumnKind::Class) class_col = c;
    }
    std::vector<std::string> class_labels = schema.columns[class_col].classes;
    if (class_labels.empty()) {
        std::set<std::string> seen;
        for (const auto& r : rows) {
            if (r[class_col] != missing) seen.insert(r[class_col]);
        }
        class_labels.assign(seen.begin(), seen.end());
    }
    if (class_labels.empty()) throw DataError("class column has no labels");
    std::map<std::string, std::size_t> class_index;
    for (std::size_t i = 0; i < class_labels.size(); ++i) class_index[class_labels[i]] = i;

    std::size_t dropped = 0;
    std::vector<std::vector<std::string>> kept;
    kept.reserve(rows.size());
    for (auto& r : rows) {
        if (r[class_col] == missing) {
            ++dropped;
            continue;
        }
        if (!class_index.count(r[class_col])) {
            throw DataError("unknown class label '" + r[class_col] + "'");
        }
        kept.push_back(std::move(r));
    }
    if (kept.empty()) throw DataError("no usable rows in " + path.string());

    // Per-column encoders resolved from the kept rows.
    struct NumericStats {
        double min = 0, max = 0, imputed = 0;
        bool constant = false;
    };
    std::map<std::size_t, NumericStats> numeric_stats;
    std::map<std::size_t, std::map<std::string, std::size_t>> category_index;
    std::map<std::size_t, std::size_t> category_width;

    for (std::size_t c = 0; c < n_cols; ++c) {
        const ColumnSpec& spec = schema.columns[c];
        if (spec.kind == ColumnKind::Numeric) {
            double mn = 0, mx = 0, sum = 0;
            std::size_t n = 0;
            for (const auto& r : kept) {
                if (r[c] == missing) continue;
                const double v = parse_number(r[c], c);
                if (n == 0) {
                    mn = mx = v;
                } else {
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                }
                ++n;
            }
            if (n == 0) throw DataError("column " + std::to_string(c) + ": all values missing");
            NumericStats st;
            st.min = mn;
            st.max = mx;
            st.constant = (mn == mx);
            // imputation value = mean of the normalized non-missing entries
            if (!st.constant) {
                for (const auto& r : kept) {
                    if (r[c] == missing) continue;
                    sum += (parse_number(r[c], c) - mn) / (mx - mn);
                }
                st.imputed = sum / static_cast<double>(n);
            }
            numeric_stats[c] = st;
        } else if (spec.kind == ColumnKind::Categorical) {
            std::vector<std::string> cats = spec.categories;
            if (cats.empty()) {
                std::set<std::string> seen;
                for (const auto& r : kept) {
                    if (r[c] != missing) seen.insert(r[c]);
                }
                cats.assign(seen.begin(), seen.end());
            }
            if (cats.empty()) throw DataError("column " + std::to_string(c) + ": all values missing");
            auto& idx = category_index[c];
            for (std::size_t i = 0; i < cats.size(); ++i) idx[cats[i]] = i;
            category_width[c] = cats.size() + (spec.missing_indicator ? 1 : 0);
        }
    }

    Dataset d;
    d.name = schema.name.empty() ? path.stem().string() : schema.name;
    d.class_counts.assign(class_labels.size(), 0);

    for (const auto& r : kept) {
        std::vector<double> input;
        for (std::size_t c = 0; c < n_cols; ++c) {
            const ColumnSpec& spec = schema.columns[c];
            switch (spec.kind) {
            case ColumnKind::Ignore:
                break;
            case ColumnKind::Numeric: {
                const NumericStats& st = numeric_stats[c];
                if (st.constant) {
                    input.push_back(0.0);
                } else if (r[c] == missing) {
                    input.push_back(st.imputed);
                } else {
                    input.push_back((parse_number(r[c], c) - st.min) / (st.max - st.min));
                }
                break;
            }
            case ColumnKind::Categorical: {
                const auto& idx = category_index[c];
                const std::size_t width = category_width[c];
                std::vector<double> onehot(width, 0.0);
                if (r[c] == missing) {
                    if (spec.missing_indicator) onehot[width - 1] = 1.0;
                } else {
                    auto it = idx.find(r[c]);
                    if (it == idx.end()) {
                        throw DataError("column " + std::to_string(c) + ": unknown category '" +
                                        r[c] + "'");
                    }
                    onehot[it->second] = 1.0;
                }
                input.insert(input.end(), onehot.begin(), onehot.end());
                break;
            }
            case ColumnKind::Class:
                break;
            }
        }
        const std::size_t cls = class_index.at(r[class_col]);
        std::vector<double> target(class_labels.size(), 0.0);
        target[cls] = 1.0;
        d.class_counts[cls] += 1;
        d.inputs.push_back(std::move(input));
        d.targets.push_back(std::move(target));
    }

    if (stats) {
        stats->rows_read = rows.size();
        stats->rows_dropped_missing_class = dropped;
        stats->input_width = d.n_inputs();
    }
    return d;
}

Dataset gen_synthetic(SyntheticKind kind, std::size_t n, std::uint64_t seed) {
    if (n < 4) throw ConfigError("gen_synthetic: n must be >= 4");
    Dataset d;
    d.class_counts.assign(2, 0);
    if (kind == SyntheticKind::Xor) {
        d.name = "xor";
        static constexpr double patterns[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        static constexpr std::size_t labels[4] = {0, 1, 1, 0};
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t p = i % 4;
            d.inputs.push_back({patterns[p][0], patterns[p][1]});
            std::vector<double> t(2, 0.0);
            t[labels[p]] = 1.0;
            d.class_counts[labels[p]] += 1;
            d.targets.push_back(std::move(t));
        }
    } else {
        d.name = "blobs";
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 0.08);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t cls = i % 2;
            const double cx = cls == 0 ? 0.25 : 0.75;
            const double cy = cls == 0 ? 0.25 : 0.75;
            const double x = std::clamp(cx + noise(rng), 0.0, 1.0);
            const double y = std::clamp(cy + noise(rng), 0.0, 1.0);
            d.inputs.push_back({x, y});
            std::vector<double> t(2, 0.0);
            t[cls] = 1.0;
            d.class_counts[cls] += 1;
            d.targets.push_back(std::move(t));
        }
    }
    return d;
}

double majority_fraction(const Dataset& d) {
    if (d.size() == 0) throw ConfigError("majority_fraction: empty dataset");
    const std::size_t top = *std::max_element(d.class_counts.begin(), d.class_counts.end());
    return 100.0 * static_cast<double>(top) / static_cast<double>(d.size());
}

void write_normalized_csv(std::ostream& out, const Dataset& d) {
    for (std::size_t i = 0; i < d.n_inputs(); ++i) out << "x" << i << ',';
    for (std::size_t i = 0; i < d.n_classes(); ++i) {
        out << "y" << i << (i + 1 < d.n_classes() ? "," : "");
    }
    out << '\n';
    for (std::size_t r = 0; r < d.size(); ++r) {
        for (double v : d.inputs[r]) out << format_double(v) << ',';
        for (std::size_t i = 0; i < d.targets[r].size(); ++i) {
            out << format_double(d.targets[r][i]) << (i + 1 < d.targets[r].size() ? "," : "");
        }
        out << '\n';
    }
}

Dataset subset(const Dataset& d, std::span<const std::size_t> rows) {
    Dataset out;
    out.name = d.name;
    out.class_counts.assign(d.n_classes(), 0);
    for (std::size_t r : rows) {
        out.inputs.push_back(d.inputs.at(r));
        out.targets.push_back(d.targets.at(r));
        out.class_counts[d.target_class(r)] += 1;
    }
    return out;
}

} // namespace nnlab
