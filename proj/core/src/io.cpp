#include "vibropol/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "vibropol/errors.hpp"

namespace vibropol {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s == "nan" || s == "NaN") {
    v = std::nan("");
    return true;
  }
  const char* begin = s.data();
  if (!s.empty() && s.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "k_cm1,T,R,A\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    out << format_double(spectrum.grid.at(i)) << ',' << format_double(spectrum.T[i]) << ','
        << format_double(spectrum.R[i]) << ',' << format_double(spectrum.A[i]) << '\n';
  }
}

void write_field_map_csv(std::ostream& out, const FieldMap& map) {
  out << "k_cm1,z_nm,intensity\n";
  const std::size_t nk = map.grid.size();
  for (std::size_t i = 0; i < nk; ++i) {
    const std::string k = format_double(map.grid.at(i));
    for (std::size_t j = 0; j < map.z_nm.size(); ++j) {
      out << k << ',' << format_double(map.z_nm[j]) << ',' << format_double(map.at(i, j)) << '\n';
    }
  }
}

void write_dispersion_csv(std::ostream& out, const DispersionTable& table) {
  out << "angle_deg,omega_up_cm1,omega_lp_cm1,splitting_cm1,peaks_found,flag,omega_cavity_cm1,"
         "omega_vib_cm1\n";
  for (const auto& r : table.rows) {
    out << format_double(r.angle_deg) << ',' << format_double(r.omega_upper) << ','
        << format_double(r.omega_lower) << ',' << format_double(r.ok ? r.splitting() : std::nan(""))
        << ',' << r.peaks_found << ',' << (r.ok ? "ok" : "peak_count") << ','
        << format_double(r.omega_cavity) << ',' << format_double(r.omega_vibration) << '\n';
  }
}

CsvTable read_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_fields(t);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) numeric = numeric && parse_double(fields[i], row[i]);
    if (!numeric) {
      if (first_data && table.header.empty()) {
        table.header = fields;
        first_data = false;
        continue;
      }
      throw ConfigError(source + ":" + std::to_string(line_no) + ": non-numeric value in data row");
    }
    first_data = false;
    if (table.columns.empty()) {
      if (!table.header.empty() && table.header.size() != row.size()) {
        throw ConfigError(source + ":" + std::to_string(line_no) + ": row width does not match header");
      }
      table.columns.resize(row.size());
    }
    if (row.size() != table.columns.size()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": inconsistent number of columns");
    }
    for (std::size_t i = 0; i < row.size(); ++i) table.columns[i].push_back(row[i]);
  }
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  return read_csv(in, path.string());
}

TargetSpectrum target_from_csv(const CsvTable& table, Channel channel) {
  if (table.columns.size() < 2 || table.rows() == 0) {
    throw ConfigError("spectrum file needs at least two columns and one data row");
  }
  std::size_t column = 1;
  const std::string wanted(1, to_char(channel));
  for (std::size_t i = 1; i < table.header.size(); ++i) {
    if (table.header[i] == wanted) column = i;
  }
  return {table.columns[0], table.columns[column]};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace vibropol
