#include "skewlab/experiment_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace skewlab {

using ordered_json = nlohmann::ordered_json;

namespace {

const char* regimen_name(const Regimen& r) {
    return r.kind == Regimen::Kind::stratified_cv ? "stratified_cv" : "balanced_test";
}

ordered_json params_json(const DomainSpec& domain) {
    ordered_json p;
    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BackboneSpec>) {
                p["c"] = spec.c;
                p["s"] = spec.s;
                p["b"] = spec.b;
            } else if constexpr (std::is_same_v<T, OverlapSpec>) {
                p["k"] = spec.k;
                p["minority_frac"] = spec.minority_frac;
                p["total"] = spec.total;
            } else {
                p["v"] = spec.v;
                p["b"] = spec.b;
            }
        },
        domain);
    return p;
}

std::string format_double(double x, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, x);
    return buf;
}

}  // namespace

std::string result_to_json_line(const ExperimentResult& result) {
    ordered_json j;
    j["family"] = family_name(family_of(result.domain));
    j["params"] = params_json(result.domain);
    j["regimen"] = regimen_name(result.regimen);
    if (result.regimen.kind == Regimen::Kind::stratified_cv) {
        j["cv_folds"] = result.regimen.folds;
    }
    j["depth"] = result.depth;
    j["seed"] = result.seed;
    if (!result.error.empty()) {
        j["error"] = result.error;
        return j.dump();
    }
    j["hidden_units"] = result.hidden_units;
    const MetricBundle mean = result.mean();
    const MetricBundle sd = result.stddev();
    ordered_json metrics;
    for (const auto& [name, field] : kMetricFields) {
        ordered_json entry;
        entry["mean"] = mean.*field;
        if (result.folds.size() >= 2) {
            entry["std"] = sd.*field;
        }
        metrics[name] = entry;
    }
    j["metrics"] = metrics;
    ordered_json fold_g = ordered_json::array();
    for (const auto& f : result.folds) fold_g.push_back(f.gmean_macro);
    j["fold_gmean_macro"] = fold_g;
    ordered_json audit = ordered_json::array();
    for (const auto& a : result.audit) {
        audit.push_back({{"hidden_units", a.hidden_units}, {"gmean_macro", a.gmean_macro}});
    }
    j["audit"] = audit;
    j["train_steps"] = result.train_steps;
    return j.dump();
}

void write_results_jsonl(const std::filesystem::path& path,
                         std::span<const ExperimentResult> results) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    for (const auto& r : results) {
        out << result_to_json_line(r) << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

ResultRow to_result_row(const ExperimentResult& result) {
    ResultRow row;
    row.family = family_name(family_of(result.domain));
    row.regimen = regimen_name(result.regimen);
    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BackboneSpec>) {
                row.size = spec.s;
                row.level = spec.c;
                row.balance = spec.b;
            } else if constexpr (std::is_same_v<T, OverlapSpec>) {
                row.level = spec.k;
                row.balance = spec.minority_frac;
            } else {
                row.level = spec.v;
                row.balance = spec.b;
            }
        },
        result.domain);
    row.depth = result.depth;
    row.hidden_units = result.hidden_units;
    row.seed = result.seed;
    row.failed = !result.error.empty();
    row.gmean_macro = row.failed ? 0.0 : result.mean_gmean_macro();
    return row;
}

std::vector<ResultRow> read_results_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::vector<ResultRow> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": corrupt JSON line: " + e.what());
        }
        try {
            ResultRow row;
            row.family = j.at("family").get<std::string>();
            row.regimen = j.at("regimen").get<std::string>();
            const auto& p = j.at("params");
            if (row.family == "backbone") {
                row.size = p.at("s").get<int>();
                row.level = p.at("c").get<int>();
                row.balance = p.at("b").get<double>();
            } else if (row.family == "overlap") {
                row.level = p.at("k").get<int>();
                row.balance = p.at("minority_frac").get<double>();
            } else if (row.family == "gaussian_backbone") {
                row.level = p.at("v").get<int>();
                row.balance = p.at("b").get<double>();
            } else {
                throw std::runtime_error("unknown family '" + row.family + "'");
            }
            row.depth = j.at("depth").get<int>();
            row.seed = j.at("seed").get<uint64_t>();
            if (j.contains("error")) {
                row.failed = true;
            } else {
                row.hidden_units = j.at("hidden_units").get<int>();
                row.gmean_macro = j.at("metrics").at("gmean_macro").at("mean").get<double>();
            }
            rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return rows;
}

std::vector<SummaryRow> summarize(std::span<const ResultRow> rows) {
    using Key = std::tuple<std::string, std::string, int, int, int, double>;
    std::map<Key, std::vector<double>> groups;
    for (const auto& r : rows) {
        if (r.failed) continue;
        groups[{r.family, r.regimen, r.size, r.depth, r.level, r.balance}].push_back(
            r.gmean_macro);
    }
    std::vector<SummaryRow> out;
    out.reserve(groups.size());
    for (const auto& [key, values] : groups) {
        SummaryRow s;
        std::tie(s.family, s.regimen, s.size, s.depth, s.level, s.balance) = key;
        s.runs = static_cast<int>(values.size());
        double sum = 0.0;
        for (double v : values) sum += v;
        s.gmean_mean = sum / static_cast<double>(values.size());
        if (values.size() >= 2) {
            double ss = 0.0;
            for (double v : values) {
                const double d = v - s.gmean_mean;
                ss += d * d;
            }
            s.gmean_std = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
        out.push_back(s);
    }
    return out;
}

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << "family,regimen,size,depth,level,balance,gmean_macro,gmean_macro_std,runs\n";
    for (const auto& r : rows) {
        out << r.family << ',' << r.regimen << ',';
        if (r.family == "backbone") out << r.size;
        out << ',' << r.depth << ',' << r.level << ',' << format_double(r.balance, "%g") << ','
            << format_double(r.gmean_mean, "%.6f") << ',';
        if (r.runs >= 2) out << format_double(r.gmean_std, "%.6f");
        out << ',' << r.runs << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

void print_report(std::ostream& os, std::span<const SummaryRow> rows) {
    if (rows.empty()) {
        os << "no results\n";
        return;
    }
    using Block = std::tuple<std::string, std::string, int, int>;
    std::map<Block, std::vector<const SummaryRow*>> blocks;
    for (const auto& r : rows) {
        blocks[{r.family, r.regimen, r.size, r.depth}].push_back(&r);
    }
    for (const auto& [key, entries] : blocks) {
        const auto& [family, regimen, size, depth] = key;
        os << family;
        if (family == "backbone") os << " s=" << size;
        os << "  " << regimen << "  depth " << depth << "  (macro G-Mean)\n";

        std::set<double> balances;
        std::set<int> levels;
        std::map<std::pair<int, double>, double> value;
        for (const auto* e : entries) {
            balances.insert(e->balance);
            levels.insert(e->level);
            value[{e->level, e->balance}] = e->gmean_mean;
        }
        const char level_symbol = family == "overlap" ? 'k' : (family == "backbone" ? 'c' : 'v');
        const char* balance_symbol = family == "overlap" ? "frac" : "b";

        char buf[64];
        std::snprintf(buf, sizeof(buf), "%-8s", "");
        os << buf;
        for (double b : balances) {
            std::snprintf(buf, sizeof(buf), "%s=%-7g", balance_symbol, b);
            os << buf;
        }
        os << '\n';
        for (int level : levels) {
            std::snprintf(buf, sizeof(buf), "%c%-7d", level_symbol, level);
            os << buf;
            for (double b : balances) {
                const auto it = value.find({level, b});
                if (it == value.end()) {
                    std::snprintf(buf, sizeof(buf), "%-9s", "-");
                } else {
                    std::snprintf(buf, sizeof(buf), "%-9.3f", it->second);
                }
                os << buf;
            }
            os << '\n';
        }
        os << '\n';
    }
}

namespace {

using json = nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw std::invalid_argument("$." + path + ": " + what);
}

template <typename T>
std::vector<T> int_array(const json& j, const std::string& key, long lo, long hi) {
    if (!j.contains(key)) config_error(key, "missing required field");
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.empty()) config_error(key, "must be a non-empty array");
    std::vector<T> out;
    for (size_t i = 0; i < arr.size(); ++i) {
        const auto& e = arr[i];
        if (!e.is_number_integer()) {
            config_error(key + "[" + std::to_string(i) + "]", "must be an integer");
        }
        const long val = e.get<long>();
        if (val < lo || val > hi) {
            config_error(key + "[" + std::to_string(i) + "]",
                         "must be in [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
        }
        out.push_back(static_cast<T>(val));
    }
    return out;
}

}  // namespace

ExperimentGrid parse_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        throw std::invalid_argument(path.string() + ": not valid JSON: " + e.what());
    }
    if (!j.is_object()) config_error("", "config must be a JSON object");

    static const std::set<std::string> known = {
        "family", "regimen",       "cv_folds",      "c",     "s",      "b",
        "k",      "minority_frac", "total",         "v",     "depths", "hidden_units",
        "seeds",  "learning_rate", "epochs",        "batch_size"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) config_error(key, "unknown field");
    }

    ExperimentGrid grid;
    if (!j.contains("family") || !j.at("family").is_string()) {
        config_error("family", "must be one of backbone|overlap|gaussian_backbone");
    }
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "backbone") {
        grid.family = Family::backbone;
        grid.c = int_array<int>(j, "c", 1, 5);
        grid.s = int_array<int>(j, "s", 1, 5);
        grid.b = int_array<int>(j, "b", 1, 5);
    } else if (fam == "overlap") {
        grid.family = Family::overlap;
        grid.k = int_array<int>(j, "k", 1, 10);
        if (!j.contains("minority_frac") || !j.at("minority_frac").is_array() ||
            j.at("minority_frac").empty()) {
            config_error("minority_frac", "must be a non-empty array");
        }
        const auto& fr = j.at("minority_frac");
        for (size_t i = 0; i < fr.size(); ++i) {
            if (!fr[i].is_number()) {
                config_error("minority_frac[" + std::to_string(i) + "]", "must be a number");
            }
            const double f = fr[i].get<double>();
            if (std::find(kMinorityFractions.begin(), kMinorityFractions.end(), f) ==
                kMinorityFractions.end()) {
                config_error("minority_frac[" + std::to_string(i) + "]",
                             "must be one of the 12 study fractions");
            }
            grid.minority_frac.push_back(f);
        }
        if (j.contains("total")) {
            if (!j.at("total").is_number_integer() || j.at("total").get<long>() < 2) {
                config_error("total", "must be an integer >= 2");
            }
            grid.total = j.at("total").get<long>();
        }
    } else if (fam == "gaussian_backbone") {
        grid.family = Family::gaussian_backbone;
        grid.v = int_array<int>(j, "v", 1, 5);
        grid.b = int_array<int>(j, "b", 1, 5);
    } else {
        config_error("family", "must be one of backbone|overlap|gaussian_backbone, got '" + fam + "'");
    }

    grid.depths = int_array<int>(j, "depths", 1, 5);
    grid.hidden_units = int_array<int>(j, "hidden_units", 1, 1 << 20);
    for (size_t i = 0; i < grid.hidden_units.size(); ++i) {
        const int hu = grid.hidden_units[i];
        if (hu != 2 && hu != 4 && hu != 8 && hu != 16) {
            config_error("hidden_units[" + std::to_string(i) + "]", "must be one of 2, 4, 8, 16");
        }
    }

    if (!j.contains("seeds") || !j.at("seeds").is_array() || j.at("seeds").empty()) {
        config_error("seeds", "must be a non-empty array of unsigned integers");
    }
    const auto& seeds = j.at("seeds");
    for (size_t i = 0; i < seeds.size(); ++i) {
        if (!seeds[i].is_number_unsigned() && !seeds[i].is_number_integer()) {
            config_error("seeds[" + std::to_string(i) + "]", "must be an unsigned integer");
        }
        if (seeds[i].is_number_integer() && seeds[i].get<long long>() < 0) {
            config_error("seeds[" + std::to_string(i) + "]", "must be non-negative");
        }
        grid.seeds.push_back(seeds[i].get<uint64_t>());
    }

    if (j.contains("regimen")) {
        const auto& reg = j.at("regimen");
        if (!reg.is_string()) config_error("regimen", "must be a string");
        const std::string r = reg.get<std::string>();
        if (r == "balanced_test") {
            grid.regimen.kind = Regimen::Kind::balanced_test;
        } else if (r == "stratified_cv") {
            grid.regimen.kind = Regimen::Kind::stratified_cv;
        } else {
            config_error("regimen", "must be balanced_test or stratified_cv, got '" + r + "'");
        }
    }
    if (j.contains("cv_folds")) {
        if (!j.at("cv_folds").is_number_integer() || j.at("cv_folds").get<int>() < 2) {
            config_error("cv_folds", "must be an integer >= 2");
        }
        grid.regimen.folds = j.at("cv_folds").get<int>();
    }
    if (j.contains("learning_rate")) {
        if (!j.at("learning_rate").is_number() || !(j.at("learning_rate").get<double>() > 0)) {
            config_error("learning_rate", "must be a positive number");
        }
        grid.train.learning_rate = j.at("learning_rate").get<double>();
    }
    if (j.contains("epochs")) {
        if (!j.at("epochs").is_number_integer() || j.at("epochs").get<int>() < 1) {
            config_error("epochs", "must be an integer >= 1");
        }
        grid.train.epochs = j.at("epochs").get<int>();
    }
    if (j.contains("batch_size")) {
        if (!j.at("batch_size").is_number_integer() || j.at("batch_size").get<int>() < 1) {
            config_error("batch_size", "must be an integer >= 1");
        }
        grid.train.batch_size = j.at("batch_size").get<int>();
    }

    grid.validate();
    return grid;
}

}  // namespace skewlab
