#include "awmi/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "awmi/error.hpp"

namespace awmi {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

void CsvWriter::metadata(std::string line) { metadata_.push_back(std::move(line)); }
void CsvWriter::header(std::vector<std::string> columns) { header_ = std::move(columns); }
void CsvWriter::row(std::vector<std::string> fields) { rows_.push_back(std::move(fields)); }

std::string CsvWriter::escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvWriter::str() const {
  std::string out;
  for (const auto& m : metadata_) out += "# " + m + "\n";
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += escape(fields[i]);
    }
    out += '\n';
  };
  if (!header_.empty()) line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

}  // namespace awmi
