// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_IO_HPP
#define GALBRUN_IO_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "galbrun/assembly.hpp"
#include "galbrun/config.hpp"
#include "galbrun/dynamics.hpp"
#include "galbrun/mesh.hpp"
#include "galbrun/vorticity.hpp"

namespace galbrun
{

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

namespace io
{

using Json = nlohmann::ordered_json;

// Key in metadata files that holds run results; ignored when the file is read as a config.
inline constexpr const char *kRunInfoKey = "run_info";

namespace detail
{

template <typename Enum, std::size_t N>
Enum ParseEnum(const std::string &key, const std::string &value, const Enum (&options)[N])
{
  std::string allowed;
  for (Enum e : options)
  {
    if (value == ToString(e))
    {
      return e;
    }
    allowed += (allowed.empty() ? "" : ", ") + std::string(ToString(e));
  }
  throw ConfigError("invalid value \"" + value + "\" for key " + key + " (expected one of " +
                    allowed + ")");
}

inline constexpr AbcVariant kAbcs[] = {AbcVariant::Stable, AbcVariant::Naive, AbcVariant::None};
inline constexpr SourceKind kSources[] = {SourceKind::None, SourceKind::Rotational,
                                          SourceKind::Irrotational};
inline constexpr TimeProfileKind kProfiles[] = {
  TimeProfileKind::GaussianPulse, TimeProfileKind::Ricker, TimeProfileKind::Continuous};
inline constexpr InitialKind kInitials[] = {InitialKind::Zero, InitialKind::GaussianPulse,
                                            InitialKind::PlaneWave};

}  // namespace detail

// Flat key/value view of a RunConfig. The key set is the documented config vocabulary.
inline Json ToJson(const RunConfig &c)
{
  Json j;
  j["R"] = c.geometry.R;
  j["h"] = c.geometry.h;
  j["nx"] = c.nx;
  j["ny"] = c.ny;
  j["cfl_safety"] = c.cfl_safety;
  j["t_end"] = c.t_end;
  j["snapshot_times"] = c.snapshot_times;
  j["M"] = c.mach;
  j["s"] = c.s;
  j["abc"] = ToString(c.abc);
  j["source_kind"] = ToString(c.source.kind);
  j["source_x"] = c.source.center.x;
  j["source_y"] = c.source.center.y;
  j["source_width"] = c.source.width;
  j["source_amplitude"] = c.source.amplitude;
  j["source_time_profile"] = ToString(c.source.time_profile.kind);
  j["source_t0"] = c.source.time_profile.t0;
  j["source_sigma_t"] = c.source.time_profile.sigma;
  j["initial_kind"] = ToString(c.initial.kind);
  j["initial_x"] = c.initial.center.x;
  j["initial_y"] = c.initial.center.y;
  j["initial_width"] = c.initial.width;
  j["initial_amplitude"] = c.initial.amplitude;
  j["probe_x"] = c.probe.x;
  j["probe_y"] = c.probe.y;
  j["instability_factor"] = c.instability_factor;
  j["output_dir"] = c.output_dir;
  j["field_format"] = c.field_format;
  j["energy_log"] = c.energy_log;
  j["serial_deterministic"] = c.serial_deterministic;
  return j;
}

// Overlay the keys of a flat document on the defaults. Does not validate.
inline RunConfig FromJson(const Json &doc)
{
  if (!doc.is_object())
  {
    throw ConfigError("config must be a flat object of key/value pairs");
  }
  RunConfig c;
  const Json known = ToJson(c);
  std::vector<std::string> unknown;
  for (const auto &[key, value] : doc.items())
  {
    if (key != kRunInfoKey && !known.contains(key))
    {
      unknown.push_back(key);
    }
  }
  if (!unknown.empty())
  {
    std::string list;
    for (const auto &k : unknown)
    {
      list += (list.empty() ? "" : ", ") + k;
    }
    throw ConfigError("unknown config keys: " + list);
  }

  auto get = [&](const char *key, auto &dst) {
    if (!doc.contains(key))
    {
      return;
    }
    const Json &v = doc.at(key);
    if (v.is_object() || (v.is_array() && !std::is_same_v<std::decay_t<decltype(dst)>,
                                                           std::vector<double>>))
    {
      throw ConfigError(std::string("key ") + key + " must be a scalar");
    }
    try
    {
      v.get_to(dst);
    }
    catch (const nlohmann::json::exception &)
    {
      throw ConfigError(std::string("key ") + key + " has the wrong type");
    }
  };
  auto get_enum = [&](const char *key, auto &dst, const auto &options) {
    std::string text;
    get(key, text);
    if (doc.contains(key))
    {
      dst = detail::ParseEnum(key, text, options);
    }
  };
  get("R", c.geometry.R);
  get("h", c.geometry.h);
  get("nx", c.nx);
  get("ny", c.ny);
  get("cfl_safety", c.cfl_safety);
  get("t_end", c.t_end);
  get("snapshot_times", c.snapshot_times);
  get("M", c.mach);
  get("s", c.s);
  get_enum("abc", c.abc, detail::kAbcs);
  get_enum("source_kind", c.source.kind, detail::kSources);
  get("source_x", c.source.center.x);
  get("source_y", c.source.center.y);
  get("source_width", c.source.width);
  get("source_amplitude", c.source.amplitude);
  get_enum("source_time_profile", c.source.time_profile.kind, detail::kProfiles);
  get("source_t0", c.source.time_profile.t0);
  get("source_sigma_t", c.source.time_profile.sigma);
  get_enum("initial_kind", c.initial.kind, detail::kInitials);
  get("initial_x", c.initial.center.x);
  get("initial_y", c.initial.center.y);
  get("initial_width", c.initial.width);
  get("initial_amplitude", c.initial.amplitude);
  get("probe_x", c.probe.x);
  get("probe_y", c.probe.y);
  get("instability_factor", c.instability_factor);
  get("output_dir", c.output_dir);
  get("field_format", c.field_format);
  get("energy_log", c.energy_log);
  get("serial_deterministic", c.serial_deterministic);
  return c;
}

inline RunConfig ParseConfig(const std::string &text)
{
  Json doc;
  try
  {
    doc = Json::parse(text);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c = FromJson(doc);
  ValidateConfig(c);
  return c;
}

inline RunConfig LoadConfig(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

inline void WriteText(const std::filesystem::path &path, const std::string &text)
{
  if (path.has_parent_path())
  {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
  if (!out)
  {
    throw IoError("write failed for " + path.string());
  }
}

inline std::string FormatG(double v, int digits)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

// Field values: 9 digits after the point in scientific notation, which bounds the
// relative rounding error by 5e-10.
inline std::string FormatField(double v)
{
  if (v == 0.0)
  {
    return "0";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9e", v);
  return buf;
}

//
// Legacy ASCII unstructured grid: displacement as a 3-vector with zero third component and
// its nodal Euclidean norm.
//
inline std::string SnapshotText(const Mesh &mesh, const DofMap &dofs, const Vector &field,
                                double t)
{
  const auto values = NodalValues(dofs, field);
  std::string s;
  s.reserve(64 * mesh.nodes.size() + 32 * mesh.triangles.size());
  s += "# vtk DataFile Version 3.0\n";
  s += "displacement t=" + FormatG(t, 17) + "\n";
  s += "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  s += "POINTS " + std::to_string(mesh.nodes.size()) + " double\n";
  for (const auto &p : mesh.nodes)
  {
    s += FormatField(p.x) + " " + FormatField(p.y) + " 0\n";
  }
  const std::size_t nt = mesh.triangles.size();
  s += "CELLS " + std::to_string(nt) + " " + std::to_string(4 * nt) + "\n";
  for (const auto &tri : mesh.triangles)
  {
    s += "3 " + std::to_string(tri[0]) + " " + std::to_string(tri[1]) + " " +
         std::to_string(tri[2]) + "\n";
  }
  s += "CELL_TYPES " + std::to_string(nt) + "\n";
  for (std::size_t k = 0; k < nt; k++)
  {
    s += "5\n";
  }
  s += "POINT_DATA " + std::to_string(mesh.nodes.size()) + "\n";
  s += "VECTORS displacement double\n";
  for (const auto &v : values)
  {
    s += FormatField(v.x()) + " " + FormatField(v.y()) + " 0\n";
  }
  s += "SCALARS xi_norm double 1\nLOOKUP_TABLE default\n";
  for (const auto &v : values)
  {
    s += FormatField(std::hypot(v.x(), v.y())) + "\n";
  }
  return s;
}

inline void WriteSnapshot(const Mesh &mesh, const DofMap &dofs, const Vector &field, double t,
                          const std::filesystem::path &path)
{
  WriteText(path, SnapshotText(mesh, dofs, field, t));
}

inline const char *ToString(RecordStatus status)
{
  return status == RecordStatus::Ok ? "ok" : "warned";
}

inline std::string EnergyLogText(const std::vector<EnergyRecord> &records)
{
  std::string s = "step,t,E,flux,status\n";
  for (const auto &r : records)
  {
    s += std::to_string(r.step) + "," + FormatG(r.t, 17) + "," + FormatG(r.E, 17) + "," +
         FormatG(r.flux, 17) + "," + ToString(r.status) + "\n";
  }
  return s;
}

inline void WriteEnergyLog(const std::vector<EnergyRecord> &records,
                           const std::filesystem::path &path)
{
  WriteText(path, EnergyLogText(records));
}

// Echo of the full config plus run results under kRunInfoKey.
inline Json Metadata(const RunConfig &c, const RunResult &r)
{
  Json j = ToJson(c);
  Json info;
  info["status"] = ToString(r.status);
  if (r.status == RunStatus::Unstable)
  {
    info["unstable_step"] = r.unstable_step;
  }
  info["dt"] = r.dt;
  info["n_steps"] = r.n_steps;
  info["vorticity_branch"] = ToString(BranchFor(c.mach));
  info["experimental"] = c.abc != AbcVariant::None && c.s != 1.0;
  info["warnings"] = r.warnings;
  Json snaps = Json::array();
  for (const auto &s : r.snapshots)
  {
    snaps.push_back({{"step", s.step}, {"t", s.t}});
  }
  info["snapshots"] = snaps;
  j[kRunInfoKey] = info;
  return j;
}

inline std::string SnapshotName(std::int64_t step)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "xi_%06lld.vtk", static_cast<long long>(step));
  return buf;
}

// Write all artifacts of a finished run below dir.
inline void WriteRunArtifacts(const RunConfig &c, const RunResult &r,
                              const std::filesystem::path &dir)
{
  std::filesystem::create_directories(dir);
  for (const auto &s : r.snapshots)
  {
    WriteSnapshot(*r.mesh, *r.dofs, s.field, s.t, dir / SnapshotName(s.step));
  }
  WriteEnergyLog(r.records, dir / c.energy_log);
  WriteText(dir / "metadata.json", Metadata(c, r).dump(2) + "\n");
}

}  // namespace io

}  // namespace galbrun

#endif  // GALBRUN_IO_HPP
