#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ddeit/atom.hpp"
#include "ddeit/response.hpp"

namespace ddeit {

// Single JSON document; frequencies entered in ordinary MHz, converted to
// angular internally. Unknown keys are rejected.
struct RunConfig {
  AtomSpec atom;
  DriveConfig drives;

  double start = units::angular_from_mhz(-30.0);
  double stop = units::angular_from_mhz(30.0);
  int points = 2001;
  Channel channel = Channel::probe;
  SweepOptions::Method method = SweepOptions::Method::analytic;
  std::optional<Eigen::Vector4d> pops_probe;
  std::optional<Eigen::Vector4d> pops_signal;

  double temperature = 300.0;
  int doppler_nodes = 64;

  std::string out_path;
  std::string out_format = "csv";

  std::optional<Eigen::Vector4d> populations_for(Channel c) const {
    return c == Channel::probe ? pops_probe : pops_signal;
  }
  std::vector<double> grid() const { return linspace(start, stop, points); }
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

} // namespace ddeit
