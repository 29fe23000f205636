#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace awmi {

inline constexpr std::string_view kVersion = "0.1.0";

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
/// Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// Minimal CSV builder. Fields containing separators or quotes are quoted.
class CsvWriter {
 public:
  /// Each metadata line is emitted as "# <line>" before the header.
  void metadata(std::string line);
  void header(std::vector<std::string> columns);
  void row(std::vector<std::string> fields);
  std::string str() const;

 private:
  static std::string escape(std::string_view field);

  std::vector<std::string> metadata_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace awmi
