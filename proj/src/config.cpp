#include "ddeit/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "ddeit/errors.hpp"

namespace ddeit {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

double number_at(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

double nonneg_at(const json& obj, const std::string& key, const std::string& where) {
  const double v = number_at(obj, key, where);
  if (v < 0.0) throw ConfigError(where + "." + key + " must be >= 0");
  return v;
}

int int_at(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::string string_at(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

// rabi: plain MHz number or {"times_gamma4": x}
double parse_rabi(const json& v, double gamma4, const std::string& where) {
  if (v.is_number()) {
    const double mhz = v.get<double>();
    if (mhz < 0.0) throw ConfigError(where + " must be >= 0");
    return units::angular_from_mhz(mhz);
  }
  if (v.is_object()) {
    check_keys(v, {"times_gamma4"}, where);
    const double x = number_at(v, "times_gamma4", where);
    if (x < 0.0) throw ConfigError(where + ".times_gamma4 must be >= 0");
    return x * gamma4;
  }
  throw ConfigError(where + " must be a number or {\"times_gamma4\": x}");
}

// detuning: plain MHz number or {"times_omega_c": x}
double parse_detuning(const json& v, double rabi_c, const std::string& where) {
  if (v.is_number()) return units::angular_from_mhz(v.get<double>());
  if (v.is_object()) {
    check_keys(v, {"times_omega_c"}, where);
    if (rabi_c <= 0.0)
      throw ConfigError(where + ": times_omega_c needs a coupling Rabi frequency");
    return number_at(v, "times_omega_c", where) * rabi_c;
  }
  throw ConfigError(where + " must be a number or {\"times_omega_c\": x}");
}

struct FieldValues {
  double rabi = 0.0;
  double detuning = 0.0;
  double linewidth = 0.0;
};

FieldValues parse_field(const json& obj, double gamma4, double rabi_c,
                        const std::string& where) {
  check_keys(obj, {"rabi_mhz", "detuning_mhz", "linewidth_mhz"}, where);
  FieldValues f;
  if (obj.contains("rabi_mhz")) f.rabi = parse_rabi(obj["rabi_mhz"], gamma4, where + ".rabi_mhz");
  if (obj.contains("detuning_mhz"))
    f.detuning = parse_detuning(obj["detuning_mhz"], rabi_c, where + ".detuning_mhz");
  if (obj.contains("linewidth_mhz"))
    f.linewidth = units::angular_from_mhz(nonneg_at(obj, "linewidth_mhz", where));
  return f;
}

Eigen::Vector4d parse_populations(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4)
    throw ConfigError(where + " must be an array of 4 populations");
  Eigen::Vector4d p;
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (!v[i].is_number()) throw ConfigError(where + " entries must be numbers");
    p(i) = v[i].get<double>();
    if (p(i) < 0.0) throw ConfigError(where + " entries must be >= 0");
    sum += p(i);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError(where + " must sum to 1");
  return p;
}

} // namespace

RunConfig parse_config(const nlohmann::json& doc) {
  check_keys(doc, {"atom", "fields", "sweep", "doppler", "output"}, "config");

  RunConfig cfg;

  double g2_mhz = 0.04, g3_mhz = 0.01, g4_mhz = 18.0;
  const json atom_block = doc.contains("atom") ? doc["atom"] : json::object();
  check_keys(atom_block,
             {"gamma2_mhz", "gamma3_mhz", "gamma4_mhz", "gamma21_mhz", "gamma31_mhz",
              "gamma32_mhz", "gamma41_mhz", "gamma42_mhz", "gamma43_mhz",
              "gamma_phi2_mhz", "gamma_phi3_mhz", "gamma_phi4_mhz", "density_cm3",
              "carrier_rad_s", "mass_amu"},
             "atom");
  if (atom_block.contains("gamma2_mhz")) g2_mhz = nonneg_at(atom_block, "gamma2_mhz", "atom");
  if (atom_block.contains("gamma3_mhz")) g3_mhz = nonneg_at(atom_block, "gamma3_mhz", "atom");
  if (atom_block.contains("gamma4_mhz")) g4_mhz = nonneg_at(atom_block, "gamma4_mhz", "atom");
  cfg.atom = make_atom(g2_mhz, g3_mhz, g4_mhz);

  const std::pair<const char*, std::pair<int, int>> channels[] = {
      {"gamma21_mhz", {2, 1}}, {"gamma31_mhz", {3, 1}}, {"gamma32_mhz", {3, 2}},
      {"gamma41_mhz", {4, 1}}, {"gamma42_mhz", {4, 2}}, {"gamma43_mhz", {4, 3}}};
  for (const auto& [key, ji] : channels)
    if (atom_block.contains(key))
      cfg.atom.decay_channels[ji] =
          units::angular_from_mhz(nonneg_at(atom_block, key, "atom"));

  if (atom_block.contains("gamma_phi2_mhz"))
    cfg.atom.gamma_phi2 = units::angular_from_mhz(nonneg_at(atom_block, "gamma_phi2_mhz", "atom"));
  if (atom_block.contains("gamma_phi3_mhz"))
    cfg.atom.gamma_phi3 = units::angular_from_mhz(nonneg_at(atom_block, "gamma_phi3_mhz", "atom"));
  if (atom_block.contains("gamma_phi4_mhz"))
    cfg.atom.gamma_phi4 = units::angular_from_mhz(nonneg_at(atom_block, "gamma_phi4_mhz", "atom"));
  if (atom_block.contains("density_cm3")) {
    const double d = number_at(atom_block, "density_cm3", "atom");
    if (d <= 0.0) throw ConfigError("atom.density_cm3 must be > 0");
    cfg.atom.density = d * 1e6;
  }
  if (atom_block.contains("carrier_rad_s")) {
    cfg.atom.carrier = number_at(atom_block, "carrier_rad_s", "atom");
    if (cfg.atom.carrier <= 0.0) throw ConfigError("atom.carrier_rad_s must be > 0");
  }
  if (atom_block.contains("mass_amu")) {
    const double m = number_at(atom_block, "mass_amu", "atom");
    if (m <= 0.0) throw ConfigError("atom.mass_amu must be > 0");
    cfg.atom.mass = m * units::amu;
  }

  const double g4 = cfg.atom.decay_total(4);
  if (!(g4 > cfg.atom.decay_total(2)) || !(g4 > cfg.atom.decay_total(3)))
    throw ConfigError("excited-state decay must exceed both ground coherence decays");
  cfg.atom.dipole_14 = dipole_from_linewidth(units::rad_per_s_from_angular(g4), cfg.atom.carrier);
  cfg.atom.dipole_34 = cfg.atom.dipole_14;

  const json fields = doc.contains("fields") ? doc["fields"] : json::object();
  check_keys(fields, {"probe", "coupling", "signal"}, "fields");
  if (fields.contains("coupling")) {
    const FieldValues c = parse_field(fields["coupling"], g4, 0.0, "fields.coupling");
    cfg.drives.rabi_c = c.rabi;
    cfg.drives.delta_c = c.detuning;
    cfg.drives.lw_c = c.linewidth;
  }
  if (fields.contains("probe")) {
    const FieldValues p = parse_field(fields["probe"], g4, cfg.drives.rabi_c, "fields.probe");
    cfg.drives.rabi_p = p.rabi;
    cfg.drives.delta_p = p.detuning;
    cfg.drives.lw_p = p.linewidth;
  }
  if (fields.contains("signal")) {
    const FieldValues s = parse_field(fields["signal"], g4, cfg.drives.rabi_c, "fields.signal");
    cfg.drives.rabi_s = s.rabi;
    cfg.drives.delta_s = s.detuning;
    cfg.drives.lw_s = s.linewidth;
  }

  if (doc.contains("sweep")) {
    const json& sw = doc["sweep"];
    check_keys(sw, {"start_mhz", "stop_mhz", "points", "channel", "method", "populations"},
               "sweep");
    if (sw.contains("start_mhz")) cfg.start = units::angular_from_mhz(number_at(sw, "start_mhz", "sweep"));
    if (sw.contains("stop_mhz")) cfg.stop = units::angular_from_mhz(number_at(sw, "stop_mhz", "sweep"));
    if (!(cfg.stop > cfg.start)) throw ConfigError("sweep.stop_mhz must exceed sweep.start_mhz");
    if (sw.contains("points")) {
      cfg.points = int_at(sw, "points", "sweep");
      if (cfg.points < 2) throw ConfigError("sweep.points must be >= 2");
    }
    if (sw.contains("channel")) {
      const std::string c = string_at(sw, "channel", "sweep");
      if (c == "probe") cfg.channel = Channel::probe;
      else if (c == "signal") cfg.channel = Channel::signal;
      else throw ConfigError("sweep.channel must be \"probe\" or \"signal\"");
    }
    if (sw.contains("method")) {
      const std::string m = string_at(sw, "method", "sweep");
      if (m == "analytic") cfg.method = SweepOptions::Method::analytic;
      else if (m == "numeric") cfg.method = SweepOptions::Method::numeric;
      else throw ConfigError("sweep.method must be \"analytic\" or \"numeric\"");
    }
    if (sw.contains("populations")) {
      const json& pops = sw["populations"];
      if (pops.is_array()) {
        const Eigen::Vector4d p = parse_populations(pops, "sweep.populations");
        (cfg.channel == Channel::probe ? cfg.pops_probe : cfg.pops_signal) = p;
      } else {
        check_keys(pops, {"probe", "signal"}, "sweep.populations");
        if (pops.contains("probe"))
          cfg.pops_probe = parse_populations(pops["probe"], "sweep.populations.probe");
        if (pops.contains("signal"))
          cfg.pops_signal = parse_populations(pops["signal"], "sweep.populations.signal");
      }
    }
  }

  if (doc.contains("doppler")) {
    const json& dp = doc["doppler"];
    check_keys(dp, {"temperature_k", "nodes"}, "doppler");
    if (dp.contains("temperature_k")) cfg.temperature = nonneg_at(dp, "temperature_k", "doppler");
    if (dp.contains("nodes")) {
      cfg.doppler_nodes = int_at(dp, "nodes", "doppler");
      if (cfg.doppler_nodes < 8 || cfg.doppler_nodes % 2 != 0)
        throw ConfigError("doppler.nodes must be even and >= 8");
    }
  }

  if (doc.contains("output")) {
    const json& out = doc["output"];
    check_keys(out, {"path", "format"}, "output");
    if (out.contains("path")) cfg.out_path = string_at(out, "path", "output");
    if (out.contains("format")) {
      cfg.out_format = string_at(out, "format", "output");
      if (cfg.out_format != "csv" && cfg.out_format != "json")
        throw ConfigError("output.format must be \"csv\" or \"json\"");
    }
  }

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

} // namespace ddeit
