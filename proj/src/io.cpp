#include "qlsync/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qlsync {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                row.push_back(line.substr(start));
                break;
            }
            row.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_matrix_coo_csv(const std::string& path, const Matrix& m) {
    std::ostringstream out;
    out << "row,col,value\n";
    for (const CooEntry& e : m.to_coo())
        out << e.row << ',' << e.col << ',' << format_double(e.value) << '\n';
    write_text_file(path, out.str());
}

Matrix read_matrix_coo_csv(const std::string& path, int rows, int cols) {
    Matrix m(rows, cols);
    const auto table = parse_csv(read_text_file(path));
    for (std::size_t i = 1; i < table.size(); ++i) {  // skip header
        const auto& r = table[i];
        if (r.size() != 3) throw std::runtime_error("bad coo row in " + path);
        m(std::stoi(r[0]), std::stoi(r[1])) = std::stod(r[2]);
    }
    return m;
}

void write_histogram_csv(const std::string& path, const DensityHistogram& h) {
    std::ostringstream out;
    out << "bin_center,mass\n";
    for (int b = 0; b < h.bins(); ++b)
        out << format_double(h.center(b)) << ',' << format_double(h.mass[b]) << '\n';
    write_text_file(path, out.str());
}

void write_spectrum_csv(const std::string& path, const std::vector<double>& eigenvalues) {
    std::ostringstream out;
    out << "index,eigenvalue\n";
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
        out << i << ',' << format_double(eigenvalues[i]) << '\n';
    write_text_file(path, out.str());
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const ModelParams& params) {
    const AngleSeries series = angles_and_phases(traj, params);
    std::ostringstream out;
    out << "time,oscillator_index,angle,phase,log_norm\n";
    for (int ti = 0; ti < traj.size(); ++ti) {
        const std::string t = format_double(traj.times[ti]);
        const std::string ln = format_double(traj.log_norm(ti));
        for (std::size_t j = 0; j < series.angles[ti].size(); ++j)
            out << t << ',' << j << ',' << format_double(series.angles[ti][j]) << ','
                << format_double(series.phases[ti][j]) << ',' << ln << '\n';
    }
    write_text_file(path, out.str());
}

void write_trajectory_binary(const std::string& bin_path, const std::string& sidecar_path,
                             const Trajectory& traj) {
    static_assert(sizeof(double) == 8);
    std::ofstream out(bin_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + bin_path);
    auto put = [&out](double v) {
        // explicit little-endian byte order
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
        out.write(reinterpret_cast<const char*>(b), 8);
    };
    for (int ti = 0; ti < traj.size(); ++ti) {
        put(traj.times[ti]);
        put(traj.log_scale[ti]);
        for (const Cx& v : traj.states[ti]) {
            put(v.real());
            put(v.imag());
        }
    }
    out.close();

    nlohmann::json sidecar;
    sidecar["format"] = "float64-le";
    sidecar["record"] = {"time", "log_scale", "state_re_im_interleaved"};
    sidecar["n_times"] = traj.size();
    sidecar["n_oscillators"] = traj.size() ? static_cast<int>(traj.states[0].size()) : 0;
    sidecar["record_doubles"] =
        2 + 2 * (traj.size() ? static_cast<int>(traj.states[0].size()) : 0);
    write_text_file(sidecar_path, sidecar.dump(2) + "\n");
}

}  // namespace qlsync
