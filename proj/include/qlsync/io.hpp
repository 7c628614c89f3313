#pragma once

// File emission: CSV (decimal, 17 significant digits, so doubles round-trip
// bit-exactly), coordinate-triplet matrix dumps, optional little-endian
// binary trajectory streams with a JSON sidecar.

#include <cstdint>
#include <string>
#include <vector>

#include "qlsync/dynamics.hpp"
#include "qlsync/matrix.hpp"
#include "qlsync/spectra.hpp"

namespace qlsync {

std::string format_double(double v);  // %.17g

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Simple CSV surface; quoting is unnecessary for our numeric/keyword fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

void write_matrix_coo_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_coo_csv(const std::string& path, int rows, int cols);

void write_histogram_csv(const std::string& path, const DensityHistogram& h);
void write_spectrum_csv(const std::string& path, const std::vector<double>& eigenvalues);

// columns: time, oscillator_index, angle, phase, log_norm
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const ModelParams& params);

// float64 record stream (time, then re/im interleaved per oscillator) plus a
// JSON sidecar describing the layout
void write_trajectory_binary(const std::string& bin_path, const std::string& sidecar_path,
                             const Trajectory& traj);

}  // namespace qlsync
