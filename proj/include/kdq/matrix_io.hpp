#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "kdq/spectral.hpp"
#include "kdq/verify.hpp"

// File formats. A matrix file is JSON with two keys:
//   dim   positive integer d
//   data  row-major list of d*d entries, each a two-element [re, im]
//         pair of finite decimal numbers
// This exact shape is normative for every operator the CLI reads or
// writes. Verification reports serialize to JSON (nested, full
// precision) or CSV.
namespace kdq::io {

using nlohmann::json;

inline json matrix_to_json(const ComplexMatrix& m) {
    json data = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            data.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return json{{"dim", m.rows()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("data"))
        throw ParseError("matrix file: expected an object with keys dim and data");
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
        throw ParseError("matrix file: dim must be a positive integer");
    const int d = j["dim"].get<int>();
    const json& data = j["data"];
    if (!data.is_array() || data.size() != static_cast<std::size_t>(d) * d)
        throw ParseError("matrix file: data must hold dim^2 entries, got " +
                         std::to_string(data.size()));
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j2 = 0; j2 < d; ++j2) {
            const json& cell = data[static_cast<std::size_t>(i) * d + j2];
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
                !cell[1].is_number())
                throw ParseError("matrix file: each entry must be a [re, im] number pair");
            m(i, j2) = Complex(cell[0].get<double>(), cell[1].get<double>());
        }
    if (!all_finite(m)) throw ParseError("matrix file: non-finite entry");
    return m;
}

inline ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return matrix_from_json(j);
}

inline void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << matrix_to_json(m).dump(2) << '\n';
}

// Eigenvalue label "<sort index>:<value at 12 significant digits>".
// Joins on labels never rely on float equality thanks to the index.
inline std::string eigen_label(int index, double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%d:%.12g", index, value);
    return buf;
}

// Shortest round-trip decimal for CSV cells.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline json report_to_json(const VerificationReport& r) {
    json j{{"id", r.id},
           {"instances", r.instances},
           {"max_residual", r.max_residual},
           {"pass", r.pass},
           {"seed", r.seed},
           {"config",
            {{"dim", r.config.dim},
             {"tolerance", r.config.tolerance},
             {"separation_floor", r.config.separation_floor},
             {"expect", r.config.expect}}}};
    if (!r.note.empty()) j["note"] = r.note;
    if (!r.rows.empty()) {
        json rows = json::array();
        for (const ScanRow& row : r.rows) {
            json jr{{"alpha", row.alpha},
                    {"gram_singular", row.gram_singular},
                    {"pass", row.pass}};
            jr["left_residual"] = row.left_residual ? json(*row.left_residual) : json(nullptr);
            jr["right_residual"] = row.right_residual ? json(*row.right_residual) : json(nullptr);
            rows.push_back(std::move(jr));
        }
        j["rows"] = std::move(rows);
    }
    return j;
}

inline json reports_to_json(const std::vector<VerificationReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return arr;
}

inline std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
    std::ostringstream out;
    out << "id,instances,max_residual,pass,seed,dim,tolerance,separation_floor,expect\n";
    for (const auto& r : reports)
        out << r.id << ',' << r.instances << ',' << format_double(r.max_residual) << ','
            << (r.pass ? "true" : "false") << ',' << r.seed << ',' << r.config.dim << ','
            << format_double(r.config.tolerance) << ',' << format_double(r.config.separation_floor)
            << ',' << r.config.expect << '\n';
    return out.str();
}

}  // namespace kdq::io
