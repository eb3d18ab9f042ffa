#include "rrcnn/dataset_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rrcnn/csv.hpp"

namespace fs = std::filesystem;

namespace rrcnn {

namespace {

std::string record_filename(size_t idx) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "record_%04zu.csv", idx);
    return buf;
}

} // namespace

void export_dataset(const SampleSet& set, const std::string& dir, TableId table,
                    Eigen::Index n, uint64_t seed) {
    fs::create_directories(dir);
    for (size_t i = 0; i < set.records.size(); ++i) {
        const SampleRecord& rec = set.records[i];
        std::ofstream f(fs::path(dir) / record_filename(i));
        if (!f) throw std::runtime_error("cannot write record file in " + dir);
        f << "# family=" << rec.family_id << "\n";
        for (const auto& [k, v] : rec.params) f << "# " << k << "=" << format_g17(v) << "\n";
        f << "t,input";
        for (size_t m = 0; m < rec.labels.size(); ++m) f << ",label_" << (m + 1);
        f << "\n";
        for (Eigen::Index k = 0; k < rec.input.size(); ++k) {
            f << format_g17(rec.input.time(k)) << "," << format_g17(rec.input.samples[k]);
            for (const auto& lab : rec.labels) f << "," << format_g17(lab.samples[k]);
            f << "\n";
        }
    }
    KeyValueFile kv;
    kv.set("table_id", to_string(table));
    kv.set("N", std::to_string(n));
    kv.set("seed", std::to_string(seed));
    kv.set("record_count", std::to_string(set.records.size()));
    for (size_t i = 0; i < set.records.size(); ++i) {
        char key[32];
        std::snprintf(key, sizeof(key), "split_%04zu", i);
        kv.set(key, set.split[i] == Split::train ? "train" : "validation");
    }
    kv.save((fs::path(dir) / "manifest.txt").string());
}

SampleSet import_dataset(const std::string& dir) {
    KeyValueFile kv = KeyValueFile::load((fs::path(dir) / "manifest.txt").string());
    const auto count = static_cast<size_t>(parse_long(kv.get("record_count")));
    SampleSet set;
    set.records.resize(count);
    set.split.resize(count);
    for (size_t i = 0; i < count; ++i) {
        char key[32];
        std::snprintf(key, sizeof(key), "split_%04zu", i);
        set.split[i] = kv.get(key) == "train" ? Split::train : Split::validation;

        std::ifstream f(fs::path(dir) / record_filename(i));
        if (!f) throw std::runtime_error("missing record file " + record_filename(i));
        SampleRecord& rec = set.records[i];
        std::string line;
        std::vector<double> ts, input;
        std::vector<std::vector<double>> labels;
        while (std::getline(f, line)) {
            line = trim(line);
            if (line.empty()) continue;
            if (line[0] == '#') {
                const std::string body = trim(line.substr(1));
                const size_t eq = body.find('=');
                if (eq == std::string::npos) continue;
                const std::string k = trim(body.substr(0, eq));
                const std::string v = trim(body.substr(eq + 1));
                if (k == "family")
                    rec.family_id = v;
                else
                    rec.params[k] = parse_double(v);
                continue;
            }
            auto cells = split_csv_line(line);
            if (cells.front() == "t") { // header
                labels.assign(cells.size() - 2, {});
                continue;
            }
            if (cells.size() < 3)
                throw std::runtime_error(record_filename(i) + ": expected t,input,label columns");
            ts.push_back(parse_double(cells[0]));
            input.push_back(parse_double(cells[1]));
            if (labels.size() != cells.size() - 2)
                throw std::runtime_error(record_filename(i) + ": ragged row");
            for (size_t m = 0; m < labels.size(); ++m)
                labels[m].push_back(parse_double(cells[2 + m]));
        }
        if (ts.size() < 2) throw std::runtime_error(record_filename(i) + ": too few rows");
        const double t0 = ts.front();
        const double dt = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
        rec.input = Signal(Eigen::Map<Vec>(input.data(), input.size()), t0, dt);
        for (auto& lab : labels)
            rec.labels.push_back(Signal(Eigen::Map<Vec>(lab.data(), lab.size()), t0, dt));
    }
    return set;
}

Signal read_signal_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::string line;
    std::vector<double> ts, vals;
    bool have_t = false;
    bool first_data = true;
    while (std::getline(f, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv_line(line);
        // skip a non-numeric header line
        try {
            parse_double(cells[0]);
        } catch (const std::exception&) {
            continue;
        }
        if (first_data) {
            have_t = cells.size() >= 2;
            first_data = false;
        }
        if (have_t) {
            ts.push_back(parse_double(cells[0]));
            vals.push_back(parse_double(cells[1]));
        } else {
            vals.push_back(parse_double(cells[0]));
        }
    }
    if (vals.size() < 2) throw std::runtime_error(path + ": need at least 2 samples");
    double t0 = 0.0, dt = 1.0;
    if (have_t) {
        t0 = ts.front();
        dt = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
    }
    return Signal(Eigen::Map<Vec>(vals.data(), vals.size()), t0, dt);
}

void write_signal_csv(const std::string& path, const Signal& x) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "t,value\n";
    for (Eigen::Index k = 0; k < x.size(); ++k)
        f << format_g17(x.time(k)) << "," << format_g17(x.samples[k]) << "\n";
}

} // namespace rrcnn
