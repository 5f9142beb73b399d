#include "ddeit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ddeit/errors.hpp"

namespace ddeit {

nlohmann::json units_echo(const AtomSpec& atom,
                          const std::vector<std::pair<std::string, std::string>>& tags) {
  nlohmann::json j;
  j["internal_unit"] = "angular MHz (rad/us)";
  j["quoted_mhz_rule"] = "quoted MHz enter as 2*pi*value";
  j["chi_prefactor_angular_mhz"] = chi_prefactor(atom);
  j["dipole_14_Cm"] = atom.dipole_14;
  j["density_m3"] = atom.density;
  j["carrier_rad_s"] = atom.carrier;
  for (const auto& [k, v] : tags) j[k] = v;
  return j;
}

std::string format_row(const std::vector<double>& row) {
  std::string line;
  char buf[32];
  for (std::size_t i = 0; i < row.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12e", row[i]);
    if (i) line += ',';
    line += buf;
  }
  return line;
}

void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     const nlohmann::json& meta) {
  std::ofstream out(path, std::ios::binary); // LF only, no translation
  if (!out) throw ConfigError("cannot open output file: " + path);

  for (auto it = meta.begin(); it != meta.end(); ++it)
    out << "# " << it.key() << " = "
        << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
        << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& row : rows) out << format_row(row) << "\n";
  if (!out) throw ConfigError("failed writing output file: " + path);
}

void write_spectrum_csv(const std::string& path, const Spectrum& s, const AtomSpec& atom,
                        const std::vector<std::pair<std::string, std::string>>& tags) {
  std::vector<std::pair<std::string, std::string>> all = tags;
  all.emplace_back("channel", channel_name(s.channel));
  all.emplace_back("broadening", s.broadening);

  std::vector<std::string> columns = {
      s.channel == Channel::probe ? "delta_p_mhz" : "delta_s_mhz", "re_chi", "im_chi"};
  std::vector<std::vector<double>> rows;
  rows.reserve(s.grid.size());
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    rows.push_back({units::mhz_from_angular(s.grid[i]), s.values[i].real(),
                    s.values[i].imag()});
  write_table_csv(path, columns, rows, units_echo(atom, all));
}

ParsedCsv parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open csv file: " + path);

  ParsedCsv parsed;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      parsed.comments.push_back(line);
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header_seen) {
      while (std::getline(ss, cell, ',')) parsed.columns.push_back(cell);
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("csv cell is not a number: " + cell);
      }
    }
    if (row.size() != parsed.columns.size())
      throw ConfigError("csv row width does not match the header");
    parsed.rows.push_back(std::move(row));
  }
  if (!header_seen) throw ConfigError("csv has no header row: " + path);
  return parsed;
}

nlohmann::json window_report_json(const WindowReport& w) {
  nlohmann::json j;
  j["center_mhz"] = units::mhz_from_angular(w.center);
  j["fwhm_mhz"] = units::mhz_from_angular(w.fwhm);
  j["width_half_peak_mhz"] = units::mhz_from_angular(w.width_half_peak);
  j["min_im_chi"] = w.min_im;
  j["min_im_position_mhz"] = units::mhz_from_angular(w.min_im_position);
  j["group_velocity_mps"] = w.group_velocity;
  j["peaks_mhz"] = {units::mhz_from_angular(w.peaks[0]),
                    units::mhz_from_angular(w.peaks[1])};
  return j;
}

} // namespace ddeit
