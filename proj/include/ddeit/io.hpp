#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ddeit/response.hpp"
#include "ddeit/windows.hpp"

namespace ddeit {

// audit block written into every output
nlohmann::json units_echo(const AtomSpec& atom,
                          const std::vector<std::pair<std::string, std::string>>& tags = {});

// '#'-prefixed metadata lines, then a header row, then %.12e data rows, LF only
void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     const nlohmann::json& meta);

void write_spectrum_csv(const std::string& path, const Spectrum& s, const AtomSpec& atom,
                        const std::vector<std::pair<std::string, std::string>>& tags = {});

struct ParsedCsv {
  std::vector<std::string> comments; // '#' lines, verbatim
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
ParsedCsv parse_csv(const std::string& path);

// data row serialization shared by writer and round-trip checks
std::string format_row(const std::vector<double>& row);

nlohmann::json window_report_json(const WindowReport& w);

} // namespace ddeit
