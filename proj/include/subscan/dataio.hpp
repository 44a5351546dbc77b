#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "subscan/harness.hpp"
#include "subscan/ltss.hpp"
#include "subscan/matrix.hpp"

namespace subscan {

inline constexpr int kActmatFormatVersion = 1;

using AnyMatrix = std::variant<ActivationMatrix, PValueMatrix>;

/// Writes the .actmat format: one JSON header line terminated by LF, then
/// rows*cols little-endian binary32 values in row-major order. A path ending
/// in .csv is written as CSV instead.
void write_actmat(const ActivationMatrix& matrix, const std::filesystem::path& path);
void write_actmat(const PValueMatrix& matrix, const std::filesystem::path& path);

/// Reads .actmat (or .csv, always as activations).
AnyMatrix read_actmat(const std::filesystem::path& path);
ActivationMatrix read_activations(const std::filesystem::path& path);
PValueMatrix read_pvalues(const std::filesystem::path& path);

/// In-memory encodings, exposed for tests and tools.
std::string encode_actmat(const ActivationMatrix& matrix);
std::string encode_actmat(const PValueMatrix& matrix);
AnyMatrix decode_actmat(const std::string& bytes);
ActivationMatrix parse_csv_matrix(const std::string& text, const std::string& layer_id = {});
std::string format_csv_matrix(const ActivationMatrix& matrix);

/// Result JSON; floats use 17 significant digits, indices ascending.
std::string result_to_json(const ScanResult& result, const ScanConfig& config,
                           std::span<const double> alpha_grid);
std::string results_to_json(std::span<const ScanResult> results, const ScanConfig& config,
                            std::span<const double> alpha_grid);
std::string report_to_json(const PowerReport& report);

struct StoredResult {
  ScanResult result;
  ScanConfig config;
  std::vector<double> alpha_grid;
};

StoredResult result_from_json(const std::string& text);
std::vector<ScanResult> results_from_json(const std::string& text);
PowerReport report_from_json(const std::string& text);

void write_result(const ScanResult& result, const ScanConfig& config,
                  std::span<const double> alpha_grid, const std::filesystem::path& path);
void write_result(const PowerReport& report, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::string& text, const std::filesystem::path& path);

}  // namespace subscan
