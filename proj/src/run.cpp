#include "ddeit/run.hpp"

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "ddeit/broadening.hpp"
#include "ddeit/config.hpp"
#include "ddeit/dressed.hpp"
#include "ddeit/errors.hpp"
#include "ddeit/io.hpp"
#include "ddeit/matching.hpp"
#include "ddeit/windows.hpp"

namespace ddeit {

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string channel;
  std::string method;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "JSON configuration file")
      ->required();
  cmd->add_option("--out", a.out_path, "output path, overrides output.path");
  cmd->add_option("--channel", a.channel, "probe or signal")
      ->check(CLI::IsMember({"probe", "signal"}));
  cmd->add_option("--method", a.method, "analytic or numeric")
      ->check(CLI::IsMember({"analytic", "numeric"}));
  cmd->add_option("--threads", a.threads, "worker threads")
      ->check(CLI::PositiveNumber);
}

RunConfig load_with_overrides(const CommonArgs& a) {
  RunConfig cfg = load_config(a.config_path);
  if (!a.channel.empty())
    cfg.channel = a.channel == "probe" ? Channel::probe : Channel::signal;
  if (!a.method.empty())
    cfg.method = a.method == "analytic" ? SweepOptions::Method::analytic
                                        : SweepOptions::Method::numeric;
  if (!a.out_path.empty()) cfg.out_path = a.out_path;
  return cfg;
}

std::string require_out(const RunConfig& cfg) {
  if (cfg.out_path.empty())
    throw ConfigError("this command writes a file: pass --out or set output.path");
  return cfg.out_path;
}

SweepOptions sweep_options(const RunConfig& cfg, int threads) {
  SweepOptions o;
  o.channel = cfg.channel;
  o.method = cfg.method;
  o.populations = cfg.populations_for(cfg.channel);
  o.threads = threads;
  return o;
}

const char* method_name(SweepOptions::Method m) {
  return m == SweepOptions::Method::analytic ? "analytic" : "numeric";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int cmd_sweep(const CommonArgs& a) {
  const RunConfig cfg = load_with_overrides(a);
  const std::string path = require_out(cfg);
  const Spectrum s = sweep(cfg.atom, cfg.drives, cfg.grid(), sweep_options(cfg, a.threads));
  write_spectrum_csv(path, s, cfg.atom, {{"method", method_name(cfg.method)}});
  std::cout << "wrote " << s.grid.size() << "-point " << channel_name(s.channel)
            << " sweep (" << method_name(cfg.method) << ", " << s.broadening
            << ") to " << path << "\n";
  return 0;
}

int cmd_dressed(const CommonArgs& a) {
  RunConfig cfg = load_with_overrides(a);
  cfg.channel = Channel::probe; // decomposition is defined for the probe field
  const std::string path = require_out(cfg);

  DensityMatrix pops;
  if (cfg.pops_probe) {
    pops.rho = cfg.pops_probe->cast<cplx>().asDiagonal();
    pops.provenance = "override";
  } else {
    pops = zeroth_order_state(cfg.atom, cfg.drives, Channel::probe);
  }

  const DressedFrame frame = dressed_frame(cfg.drives.rabi_c, cfg.drives.delta_c);
  const double pref = chi_prefactor(cfg.atom);

  std::vector<std::vector<double>> rows;
  const std::vector<double> grid = cfg.grid();
  rows.reserve(grid.size());
  for (double d : grid) {
    DriveConfig dr = cfg.drives;
    dr.delta_p = d;
    const LinearResponse lr = probe_chi_analytic(cfg.atom, dr, pops);
    const auto [plus, minus] = dressed_components(cfg.atom, dr, lr.rho_lin_ratio);
    const cplx chi_plus = pref * plus;
    const cplx chi_minus = pref * minus;
    const cplx chi_sum = chi_plus + chi_minus;
    rows.push_back({units::mhz_from_angular(d), chi_plus.real(), chi_plus.imag(),
                    chi_minus.real(), chi_minus.imag(), chi_sum.real(),
                    chi_sum.imag()});
  }

  write_table_csv(path,
                  {"delta_p_mhz", "re_chi_plus", "im_chi_plus", "re_chi_minus",
                   "im_chi_minus", "re_chi_sum", "im_chi_sum"},
                  rows,
                  units_echo(cfg.atom, {{"channel", "probe"},
                                        {"broadening", "bare"},
                                        {"frame_zeta", fmt(frame.zeta.real())},
                                        {"frame_theta", fmt(frame.theta)},
                                        {"delta_plus_mhz", fmt(units::mhz_from_angular(frame.delta_plus))},
                                        {"delta_minus_mhz", fmt(units::mhz_from_angular(frame.delta_minus))}}));
  std::cout << "wrote " << rows.size() << "-point dressed decomposition to " << path
            << "\n";
  return 0;
}

int cmd_doppler(const CommonArgs& a) {
  const RunConfig cfg = load_with_overrides(a);
  const std::string path = require_out(cfg);

  const AtomSpec atom = apply_laser_linewidths(cfg.atom, cfg.drives);
  DopplerSettings settings;
  settings.temperature = cfg.temperature;
  settings.mass = cfg.atom.mass;
  settings.node_count = cfg.doppler_nodes;
  settings.wavenumber = cfg.atom.carrier / units::c_light;

  const Spectrum s =
      doppler_average(atom, cfg.drives, cfg.channel, cfg.grid(), settings,
                      cfg.populations_for(cfg.channel), a.threads);
  write_spectrum_csv(path, s, atom,
                     {{"temperature_k", fmt(cfg.temperature)},
                      {"doppler_nodes", fmt(double(cfg.doppler_nodes))},
                      {"v_width_mps", fmt(settings.v_rms())}});
  std::cout << "wrote " << s.grid.size() << "-point Doppler-averaged "
            << channel_name(s.channel) << " sweep (T = " << fmt(cfg.temperature)
            << " K) to " << path << "\n";
  return 0;
}

nlohmann::json windows_for_channel(const RunConfig& cfg, Channel channel, int threads) {
  SweepOptions o;
  o.channel = channel;
  o.method = cfg.method;
  o.populations = cfg.populations_for(channel);
  o.threads = threads;

  const Spectrum coarse = sweep(cfg.atom, cfg.drives, cfg.grid(), o);
  const SegmentSweep resweep = [&](double lo, double hi, int points) {
    return sweep(cfg.atom, cfg.drives, linspace(lo, hi, points), o);
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& w : refined_windows(coarse, resweep, cfg.atom.carrier))
    arr.push_back(window_report_json(w));
  return arr;
}

int cmd_windows(const CommonArgs& a) {
  const RunConfig cfg = load_with_overrides(a);

  nlohmann::json doc;
  doc["units"] = units_echo(cfg.atom, {{"method", method_name(cfg.method)}});
  const bool both = cfg.pops_probe && cfg.pops_signal && a.channel.empty();
  if (both || cfg.channel == Channel::probe)
    doc["probe"] = windows_for_channel(cfg, Channel::probe, a.threads);
  if (both || cfg.channel == Channel::signal)
    doc["signal"] = windows_for_channel(cfg, Channel::signal, a.threads);

  const std::string text = doc.dump(2);
  std::cout << text << "\n";
  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + cfg.out_path);
    f << text << "\n";
  }
  std::size_t count = 0;
  for (const char* key : {"probe", "signal"})
    if (doc.contains(key)) count += doc[key].size();
  std::cerr << "found " << count << " transparency window(s)\n";
  return 0;
}

int cmd_match(const CommonArgs& a) {
  const RunConfig cfg = load_with_overrides(a);
  const MatchResult r = match_velocities(cfg);
  const double gamma4 = cfg.atom.decay_total(4);

  nlohmann::json doc;
  doc["units"] = units_echo(cfg.atom);
  doc["rabi_p_mhz"] = units::mhz_from_angular(r.rabi_p);
  doc["rabi_p_over_gamma4"] = r.rabi_p / gamma4;
  doc["from_guess"] = r.from_guess;
  doc["evaluations"] = r.evaluations;
  doc["mismatch_first"] = r.mismatch_first;
  doc["mismatch_second"] = r.mismatch_second;
  doc["probe_windows"] = nlohmann::json::array();
  for (const auto& w : r.probe_windows) doc["probe_windows"].push_back(window_report_json(w));
  doc["signal_windows"] = nlohmann::json::array();
  for (const auto& w : r.signal_windows) doc["signal_windows"].push_back(window_report_json(w));

  const std::string text = doc.dump(2);
  std::cout << text << "\n";
  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + cfg.out_path);
    f << text << "\n";
  }
  std::cerr << "matched probe Rabi frequency: " << fmt(r.rabi_p / gamma4)
            << " gamma4 (second-window mismatch " << fmt(r.mismatch_second) << ")\n";
  return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"tripod-atom linear response: double transparency with gain"};
  app.require_subcommand(1);

  CommonArgs a;
  CLI::App* c_sweep = app.add_subcommand("sweep", "detuning sweep of chi to CSV");
  CLI::App* c_dressed =
      app.add_subcommand("dressed", "probe chi split into dressed-state channels");
  CLI::App* c_doppler =
      app.add_subcommand("doppler", "Maxwell-averaged sweep at finite temperature");
  CLI::App* c_windows =
      app.add_subcommand("windows", "transparency-window report as JSON");
  CLI::App* c_match =
      app.add_subcommand("match", "match group velocities over the probe Rabi frequency");
  for (CLI::App* c : {c_sweep, c_dressed, c_doppler, c_windows, c_match})
    add_common(c, a);

  std::vector<const char*> argv;
  argv.push_back("ddeit");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_sweep->parsed()) return cmd_sweep(a);
    if (c_dressed->parsed()) return cmd_dressed(a);
    if (c_doppler->parsed()) return cmd_doppler(a);
    if (c_windows->parsed()) return cmd_windows(a);
    return cmd_match(a);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ConfigError: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}

} // namespace ddeit
