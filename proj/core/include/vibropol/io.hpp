#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vibropol/fields.hpp"
#include "vibropol/fit.hpp"
#include "vibropol/spectra.hpp"
#include "vibropol/tmm.hpp"

namespace vibropol {

/// Shortest decimal form that reads back to the identical double.
std::string format_double(double v);

/// `k_cm1,T,R,A`, one row per grid point, LF line endings.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

/// Long format `k_cm1,z_nm,intensity`.
void write_field_map_csv(std::ostream& out, const FieldMap& map);

/// `angle_deg,omega_up_cm1,omega_lp_cm1,splitting_cm1,peaks_found,flag,omega_cavity_cm1,omega_vib_cm1`
/// with flag `ok` or `peak_count`; missing values are written as `nan`.
void write_dispersion_csv(std::ostream& out, const DispersionTable& table);

struct CsvTable {
  std::vector<std::string> header;  // empty when the file has none
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Numeric CSV reader. Lines starting with '#' and blank lines are skipped;
/// a first non-numeric line is taken as the header. Throws ConfigError with
/// the offending line number.
CsvTable read_csv(std::istream& in, const std::string& source = "<csv>");
CsvTable read_csv_file(const std::filesystem::path& path);

/// First column is the wavenumber. With a header naming the channel (T, R or
/// A) that column is used, otherwise the second column.
TargetSpectrum target_from_csv(const CsvTable& table, Channel channel);

/// Writes the text to `path` only through a complete buffer, creating parent
/// directories as needed.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace vibropol
