#include "skewlab/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace skewlab {

void Dataset::add_row(std::span<const double> x, int label) {
    if (static_cast<int>(x.size()) != dim) {
        throw std::invalid_argument("add_row: expected " + std::to_string(dim) + " features, got " +
                                    std::to_string(x.size()));
    }
    if (label != 0 && label != 1) {
        throw std::invalid_argument("add_row: label must be 0 or 1");
    }
    features.insert(features.end(), x.begin(), x.end());
    labels.push_back(label);
    if (label == 1) {
        ++n_class1;
    } else {
        ++n_class0;
    }
}

Dataset Dataset::subset(std::span<const size_t> rows) const {
    Dataset out(dim);
    out.features.reserve(rows.size() * static_cast<size_t>(dim));
    out.labels.reserve(rows.size());
    for (size_t r : rows) {
        out.add_row(row(r), labels[r]);
    }
    return out;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    for (int j = 0; j < ds.dim; ++j) {
        out << 'f' << j << ',';
    }
    out << "label\n";
    char buf[64];
    for (size_t i = 0; i < ds.rows(); ++i) {
        const auto r = ds.row(i);
        for (int j = 0; j < ds.dim; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", r[j]);
            out << buf << ',';
        }
        out << ds.labels[i] << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

namespace {

[[noreturn]] void malformed(const std::filesystem::path& path, size_t line, const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    size_t lineno = 0;

    if (!std::getline(in, line)) {
        malformed(path, 1, "empty file");
    }
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv(line);
    if (header.size() < 2 || header.back() != "label") {
        malformed(path, lineno, "header must be f0[,f1,...],label");
    }
    const int dim = static_cast<int>(header.size()) - 1;
    for (int j = 0; j < dim; ++j) {
        if (header[j] != "f" + std::to_string(j)) {
            malformed(path, lineno, "unexpected header column '" + header[j] + "'");
        }
    }

    Dataset ds(dim);
    std::vector<double> row(dim);
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == EOF) break;  // trailing newline
        auto fields = split_csv(line);
        if (fields.size() != static_cast<size_t>(dim) + 1) {
            malformed(path, lineno,
                      "expected " + std::to_string(dim + 1) + " columns, got " +
                          std::to_string(fields.size()));
        }
        for (int j = 0; j < dim; ++j) {
            const std::string& tok = fields[j];
            char* end = nullptr;
            errno = 0;
            double val = std::strtod(tok.c_str(), &end);
            if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE) {
                malformed(path, lineno, "non-numeric feature '" + tok + "'");
            }
            row[j] = val;
        }
        const std::string& lab = fields[dim];
        if (lab != "0" && lab != "1") {
            malformed(path, lineno, "label must be 0 or 1, got '" + lab + "'");
        }
        ds.add_row(row, lab == "1" ? 1 : 0);
    }
    return ds;
}

}  // namespace skewlab
