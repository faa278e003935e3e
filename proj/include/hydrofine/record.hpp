// record.hpp — machine-readable result emission: one hierarchical JSON record
// per run plus flat CSV tables for sweeps. Matrices are serialized row-major
// with explicit dimensions and round-trip losslessly.

#pragma once

#include "hydrofine/config.hpp"

#include <cstdio>
#include <filesystem>

namespace hydrofine {

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            data.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    j["data"] = std::move(data);
    return j;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
        throw std::invalid_argument("matrix_from_json: data size mismatch");
    }
    Eigen::MatrixXcd m(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c, ++idx) {
            m(r, c) = complexd(data[idx][0].get<double>(), data[idx][1].get<double>());
        }
    }
    return m;
}

inline json vector_to_json(const Eigen::VectorXd& v) {
    json j = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

struct ResultRecord {
    std::string command;
    json config;
    json results;
    double duration_seconds{0.0};

    json to_json() const {
        json j;
        j["command"] = command;
        j["config"] = config;
        j["results"] = results;
        j["duration_seconds"] = duration_seconds;
        return j;
    }
};

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit: cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("emit: write failed: " + path.string());
}

inline void write_record(const std::filesystem::path& path, const ResultRecord& record) {
    write_text_file(path, record.to_json().dump(2) + "\n");
}

// Shortest round-trip decimal representation of a double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double parsed = 0.0;
    std::sscanf(buf, "%lg", &parsed);
    if (parsed == v) {
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
            std::sscanf(shorter, "%lg", &parsed);
            if (parsed == v) return shorter;
        }
    }
    return buf;
}

// Comma-separated table: header row then one row per sweep point, columns in
// the documented deterministic order.
inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += header[i];
        out += (i + 1 < header.size()) ? "," : "\n";
    }
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw std::invalid_argument("write_csv: row width does not match header");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += format_double(row[i]);
            out += (i + 1 < row.size()) ? "," : "\n";
        }
    }
    write_text_file(path, out);
}

}  // namespace hydrofine
