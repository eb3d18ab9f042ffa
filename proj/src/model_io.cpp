#include "rrcnn/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rrcnn/csv.hpp"

static_assert(std::endian::native == std::endian::little,
              "weight files are little-endian; add byte swapping for this platform");

namespace rrcnn {

namespace {

void write_doubles(std::ofstream& f, const double* data, size_t n) {
    f.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * 8));
}

void read_doubles(std::ifstream& f, double* data, size_t n) {
    f.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * 8));
    if (!f) throw std::runtime_error("weight file truncated");
}

} // namespace

void save_weights(const ModelParams& p, const std::string& path) {
    p.validate();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "RRCNN_WEIGHTS 1\n";
    f << "note=filters are independent of signal length N; the ortho matrix, when "
         "present, is bound to its N\n";
    f << "M=" << p.num_blocks() << "\n";
    for (int m = 0; m < p.num_blocks(); ++m) {
        const auto& blk = p.blocks[m];
        f << "block_" << m << "=S:" << blk.steps()
          << " K1:" << blk.recursions.front().w1.size()
          << " K2:" << blk.recursions.front().w2_raw.size() << "\n";
    }
    if (p.ortho) {
        f << "ortho=1 N:" << p.ortho->Wo.rows() << " pairs:";
        for (size_t i = 0; i < p.ortho->omega2.size(); ++i) {
            if (i) f << ",";
            f << p.ortho->omega2[i].first << "-" << p.ortho->omega2[i].second;
        }
        f << "\n";
    } else {
        f << "ortho=0\n";
    }
    f << "END_HEADER\n";
    for (const auto& blk : p.blocks)
        for (const auto& rec : blk.recursions) {
            write_doubles(f, rec.w1.data(), rec.w1.size());
            write_doubles(f, rec.w2_raw.data(), rec.w2_raw.size());
        }
    if (p.ortho) {
        // row-major for readability of the format spec
        for (Eigen::Index r = 0; r < p.ortho->Wo.rows(); ++r)
            for (Eigen::Index c = 0; c < p.ortho->Wo.cols(); ++c) {
                const double v = p.ortho->Wo(r, c);
                write_doubles(f, &v, 1);
            }
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

ModelParams load_weights(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(f, line) || trim(line) != "RRCNN_WEIGHTS 1")
        throw std::runtime_error(path + ": not a version-1 weight file");

    int m_blocks = -1;
    std::vector<int> s, k1, k2;
    bool has_ortho = false;
    Eigen::Index ortho_n = 0;
    std::vector<std::pair<int, int>> pairs;
    while (std::getline(f, line)) {
        line = trim(line);
        if (line == "END_HEADER") break;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) continue; // free-form note lines
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "M") {
            m_blocks = static_cast<int>(parse_long(val));
        } else if (key.rfind("block_", 0) == 0) {
            int si = 0, k1i = 0, k2i = 0;
            if (std::sscanf(val.c_str(), "S:%d K1:%d K2:%d", &si, &k1i, &k2i) != 3)
                throw std::runtime_error(path + ": malformed block line");
            s.push_back(si);
            k1.push_back(k1i);
            k2.push_back(k2i);
        } else if (key == "ortho") {
            std::istringstream is(val);
            int flag = 0;
            is >> flag;
            has_ortho = flag != 0;
            if (has_ortho) {
                std::string tok;
                while (is >> tok) {
                    if (tok.rfind("N:", 0) == 0) ortho_n = parse_long(tok.substr(2));
                    if (tok.rfind("pairs:", 0) == 0) {
                        std::istringstream ps(tok.substr(6));
                        std::string pair;
                        while (std::getline(ps, pair, ',')) {
                            const size_t dash = pair.find('-');
                            pairs.emplace_back(parse_long(pair.substr(0, dash)),
                                               parse_long(pair.substr(dash + 1)));
                        }
                    }
                }
            }
        }
    }
    if (m_blocks < 1 || static_cast<int>(s.size()) != m_blocks)
        throw std::runtime_error(path + ": inconsistent header");

    ModelParams p;
    p.blocks.resize(m_blocks);
    for (int m = 0; m < m_blocks; ++m) {
        p.blocks[m].recursions.resize(s[m]);
        for (auto& rec : p.blocks[m].recursions) {
            rec.w1.resize(k1[m]);
            rec.w2_raw.resize(k2[m]);
            read_doubles(f, rec.w1.data(), rec.w1.size());
            read_doubles(f, rec.w2_raw.data(), rec.w2_raw.size());
        }
    }
    if (has_ortho) {
        OrthoParams op;
        op.Wo.resize(ortho_n, ortho_n);
        for (Eigen::Index r = 0; r < ortho_n; ++r)
            for (Eigen::Index c = 0; c < ortho_n; ++c) read_doubles(f, &op.Wo(r, c), 1);
        op.omega2 = std::move(pairs);
        p.ortho = std::move(op);
    }
    p.validate();
    return p;
}

void export_filters_csv(const ModelParams& p, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "block,recursion,layer,tap,value\n";
    for (int m = 0; m < p.num_blocks(); ++m)
        for (int i = 0; i < p.blocks[m].steps(); ++i) {
            const auto& rec = p.blocks[m].recursions[i];
            for (Eigen::Index t = 0; t < rec.w1.size(); ++t)
                f << m << "," << i << ",w1," << t << "," << format_g17(rec.w1[t]) << "\n";
            for (Eigen::Index t = 0; t < rec.w2_raw.size(); ++t)
                f << m << "," << i << ",w2_raw," << t << "," << format_g17(rec.w2_raw[t])
                  << "\n";
        }
}

} // namespace rrcnn
