#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "speclab/evolution.hpp"
#include "speclab/extraction.hpp"
#include "speclab/recovery.hpp"
#include "speclab/sparsity.hpp"

namespace speclab::io {

// All numeric text output uses 17 significant digits so files round-trip
// bit-exactly.
std::string fmt(double v);

std::string base64_encode(const unsigned char* data, std::size_t len);
std::vector<unsigned char> base64_decode(const std::string& text);

// little-endian doubles; complex data interleaves re/im
std::string encode_doubles(const std::vector<double>& v);
std::vector<double> decode_doubles(const std::string& b64);
std::string encode_complex(const Eigen::VectorXcd& v);
Eigen::VectorXcd decode_complex(const std::string& b64);

// Masks as run-length-encoded JSON {n_side, side_length, runs: [[start, len]...]}
std::string mask_to_json(const ObservationSet& obs);
ObservationSet mask_from_json(const std::string& text);

std::string dataset_to_json(const SpectralDataset& ds);
SpectralDataset dataset_from_json(const std::string& text);

// GridField CSV, row-major, one grid row per line.
void write_field_csv(const std::filesystem::path& path, const RealField& f);
void write_field_csv(const std::filesystem::path& path, const ComplexField& f);
RealField read_field_csv(const std::filesystem::path& path, const TorusGrid& grid);

// PassiveRecording: CSV "t,cell_0,..." (re/im column pairs when complex) plus
// a JSON sidecar carrying the equation tag, sigma, seed, and mask.
void write_recording(const std::filesystem::path& prefix, const PassiveRecording& rec);
PassiveRecording read_recording(const std::filesystem::path& prefix);

std::string sparsity_report_to_json(const SparsityReport& rep);
void write_interpolant_csv(const std::filesystem::path& path, const Interpolant& interp);

std::string match_result_to_json(const MatchResult& mr);
std::string modes_to_json(const std::vector<ModeEstimate>& modes, Equation eq);
std::string wave_modes_to_json(const std::vector<WaveModeEstimate>& modes);

// RecoveryResult directory: potential_estimate.csv, mask.csv, history.csv,
// diagnostics.json, initial_f.csv / initial_h.csv when present.
void write_recovery_result(const std::filesystem::path& dir, const RecoveryResult& res);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace speclab::io
