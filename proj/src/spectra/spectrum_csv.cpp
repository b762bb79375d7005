#include <cmath>
#include <sstream>

#include "specrev/error.hpp"
#include "specrev/io.hpp"
#include "specrev/spectra.hpp"

namespace specrev {

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable parse_numeric_csv(const std::filesystem::path& path) {
  std::string text = io::read_file(path);
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);  // UTF-8 BOM
  std::istringstream in(text);
  std::string line;
  CsvTable table;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = io::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = io::split_csv_line(t);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size())
      throw Error(ErrorKind::ParseError, path.string() + ":" + std::to_string(line_no) +
                                             ": expected " +
                                             std::to_string(table.header.size()) +
                                             " fields, got " + std::to_string(fields.size()));
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!io::parse_double(fields[j], row[j]))
        throw Error(ErrorKind::ParseError, path.string() + ":" + std::to_string(line_no) +
                                               ": field '" + table.header[j] +
                                               "' is not a number: '" + fields[j] + "'");
      if (!std::isfinite(row[j]))
        throw Error(ErrorKind::InvalidSpectrum, path.string() + ":" + std::to_string(line_no) +
                                                    ": non-finite value in field '" +
                                                    table.header[j] + "'");
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorKind::ParseError, path.string() + ": empty file");
  if (table.header.empty() || table.header.front() != "wavenumber_cm1")
    throw Error(ErrorKind::ParseError,
                path.string() + ":1: first column must be 'wavenumber_cm1'");
  if (table.header.size() < 2)
    throw Error(ErrorKind::ParseError, path.string() + ":1: no intensity columns");
  if (table.rows.size() < 2)
    throw Error(ErrorKind::ParseError, path.string() + ": fewer than 2 data rows");
  return table;
}

WavenumberAxis table_axis(const CsvTable& t, const std::filesystem::path& path) {
  std::vector<double> w(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) w[i] = t.rows[i][0];
  try {
    return WavenumberAxis(std::move(w));
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidAxis, path.string() + ": " + e.what());
  }
}

}  // namespace

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
  const CsvTable t = parse_numeric_csv(path);
  if (t.header.size() != 2 || t.header[1] != "intensity")
    throw Error(ErrorKind::ParseError,
                path.string() + ":1: expected header 'wavenumber_cm1,intensity'");
  WavenumberAxis axis = table_axis(t, path);
  std::vector<double> y(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) y[i] = t.rows[i][1];
  return Spectrum(std::move(axis), std::move(y), path.stem().string());
}

SpectrumMatrix read_matrix_csv(const std::filesystem::path& path) {
  const CsvTable t = parse_numeric_csv(path);
  WavenumberAxis axis = table_axis(t, path);
  const auto s = static_cast<Eigen::Index>(t.header.size() - 1);
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  Matrix m(s, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < s; ++i)
      m(i, j) = t.rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i + 1)];
  std::vector<std::string> labels(t.header.begin() + 1, t.header.end());
  return SpectrumMatrix(std::move(axis), std::move(m), std::move(labels));
}

SpectrumMatrix read_any_csv(const std::filesystem::path& path) {
  const CsvTable t = parse_numeric_csv(path);
  SpectrumMatrix m = read_matrix_csv(path);
  if (t.header.size() == 2 && t.header[1] == "intensity")
    return SpectrumMatrix(m.axis(), m.data(), {path.stem().string()});
  return m;
}

std::string spectrum_csv(const Spectrum& spec) {
  std::string out = "wavenumber_cm1,intensity\n";
  for (std::size_t i = 0; i < spec.size(); ++i) {
    out += io::format_double(spec.axis()[i]);
    out += ',';
    out += io::format_double(spec[i]);
    out += '\n';
  }
  return out;
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spec) {
  io::write_file_atomic(path, spectrum_csv(spec));
}


std::string matrix_csv(const SpectrumMatrix& mat) {
  std::string out = "wavenumber_cm1";
  for (const auto& label : mat.labels()) out += "," + io::csv_field(label);
  out += '\n';
  for (std::size_t j = 0; j < mat.cols(); ++j) {
    out += io::format_double(mat.axis()[j]);
    for (std::size_t i = 0; i < mat.rows(); ++i) {
      out += ',';
      out += io::format_double(mat.data()(static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(j)));
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const std::filesystem::path& path, const SpectrumMatrix& mat) {
  io::write_file_atomic(path, matrix_csv(mat));
}

}  // namespace specrev
