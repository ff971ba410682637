#pragma once

// JSON and CSV serialization for instances, solutions and violation reports.

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

#include "core.hpp"
#include "validator.hpp"

namespace fmp {

inline constexpr int kInstanceFormatVersion = 1;
inline constexpr int kSolutionFormatVersion = 1;

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using nlohmann::json;

inline json instance_to_json(const Instance& inst) {
  const auto& p = inst.params;
  json params = {
      {"num_periods", p.num_periods},     {"check_duration", p.check_duration},
      {"capacity", p.capacity},           {"calendar_max", p.calendar_max},
      {"calendar_min", p.calendar_min},   {"flight_max", p.flight_max},
      {"default_usage", p.default_usage}, {"in_maintenance", p.in_maintenance},
  };
  json missions = json::array();
  for (const auto& m : inst.missions) {
    missions.push_back({{"id", m.id},
                        {"start", m.window.first},
                        {"end", m.window.last},
                        {"hours", m.hours},
                        {"required", m.required},
                        {"min_assign", m.min_assign},
                        {"type", m.type},
                        {"standard", m.standard ? json(*m.standard) : json(nullptr)}});
  }
  json fleet = json::array();
  for (const auto& a : inst.fleet) {
    json pre = nullptr;
    if (a.preassigned) pre = {{"mission", a.preassigned->mission}, {"elapsed", a.preassigned->elapsed}};
    fleet.push_back({{"id", a.id},
                     {"type", a.type},
                     {"standards", a.standards},
                     {"rft_init", a.rft_init},
                     {"rct_init", a.rct_init},
                     {"in_maint_remaining", a.in_maint_remaining},
                     {"preassigned", pre}});
  }
  json clusters = json::array();
  for (const auto& c : inst.clusters) {
    clusters.push_back({{"id", c.id},
                        {"members", c.members},
                        {"maint_cap", c.maint_cap},
                        {"sustain_floor", c.sustain_floor},
                        {"known_in_maint", c.known_in_maint}});
  }
  return {{"format", "fmp-instance"},
          {"version", kInstanceFormatVersion},
          {"reduction", inst.reduction},
          {"params", params},
          {"missions", missions},
          {"fleet", fleet},
          {"clusters", clusters}};
}

inline Instance instance_from_json(const json& j) {
  try {
    if (j.value("format", "") != "fmp-instance") throw FormatError("not an fmp-instance document");
    if (j.at("version").get<int>() != kInstanceFormatVersion)
      throw FormatError("unsupported instance version " + j.at("version").dump());
    Instance inst;
    inst.reduction = j.value("reduction", false);
    const auto& p = j.at("params");
    inst.params.num_periods = p.at("num_periods").get<int>();
    inst.params.check_duration = p.at("check_duration").get<int>();
    inst.params.capacity = p.at("capacity").get<int>();
    inst.params.calendar_max = p.at("calendar_max").get<int>();
    inst.params.calendar_min = p.at("calendar_min").get<int>();
    inst.params.flight_max = p.at("flight_max").get<double>();
    inst.params.default_usage = p.at("default_usage").get<double>();
    inst.params.in_maintenance = p.value("in_maintenance", std::vector<int>{});
    for (const auto& m : j.at("missions")) {
      Mission mis;
      mis.id = m.at("id").get<std::string>();
      mis.window = {m.at("start").get<int>(), m.at("end").get<int>()};
      mis.hours = m.at("hours").get<double>();
      mis.required = m.at("required").get<int>();
      mis.min_assign = m.at("min_assign").get<int>();
      mis.type = m.at("type").get<std::string>();
      if (m.contains("standard") && !m.at("standard").is_null()) mis.standard = m.at("standard").get<std::string>();
      inst.missions.push_back(std::move(mis));
    }
    for (const auto& a : j.at("fleet")) {
      Aircraft ac;
      ac.id = a.at("id").get<std::string>();
      ac.type = a.at("type").get<std::string>();
      ac.standards = a.value("standards", std::set<std::string>{});
      ac.rft_init = a.at("rft_init").get<double>();
      ac.rct_init = a.at("rct_init").get<int>();
      ac.in_maint_remaining = a.value("in_maint_remaining", 0);
      if (a.contains("preassigned") && !a.at("preassigned").is_null())
        ac.preassigned = Preassignment{a.at("preassigned").at("mission").get<std::string>(),
                                       a.at("preassigned").at("elapsed").get<int>()};
      inst.fleet.push_back(std::move(ac));
    }
    for (const auto& c : j.at("clusters")) {
      Cluster cl;
      cl.id = c.at("id").get<std::string>();
      cl.members = c.at("members").get<std::vector<std::string>>();
      cl.maint_cap = c.at("maint_cap").get<std::vector<int>>();
      cl.sustain_floor = c.at("sustain_floor").get<std::vector<double>>();
      cl.known_in_maint = c.at("known_in_maint").get<std::vector<int>>();
      inst.clusters.push_back(std::move(cl));
    }
    validate_instance(inst);
    return inst;
  } catch (const json::exception& e) {
    throw FormatError(std::string("instance JSON: ") + e.what());
  }
}

inline std::string cell_to_string(const Instance& inst, const Cell& c) {
  switch (c.kind) {
    case CellKind::Free: return "free";
    case CellKind::CheckStart: return "check";
    case CellKind::CheckBody: return "check-body";
    case CellKind::Mission: return "mission:" + inst.missions.at(c.mission).id;
  }
  return "?";
}

inline Cell cell_from_string(const IndexSets& sets, const std::string& s) {
  if (s == "free") return Cell::free();
  if (s == "check") return Cell::check_start();
  if (s == "check-body") return Cell::check_body();
  if (s.rfind("mission:", 0) == 0) {
    auto it = sets.mission_index.find(s.substr(8));
    if (it == sets.mission_index.end()) throw FormatError("unknown mission in cell '" + s + "'");
    return Cell::on_mission(it->second);
  }
  throw FormatError("bad cell '" + s + "'");
}

inline json solution_to_json(const Instance& inst, const Solution& s) {
  json rows = json::array();
  for (int i = 0; i < s.num_aircraft(); ++i) {
    json row = json::array();
    for (const auto& c : s.state[i]) row.push_back(cell_to_string(inst, c));
    rows.push_back({{"aircraft", inst.fleet[i].id},
                    {"state", row},
                    {"u", i < static_cast<int>(s.u.size()) ? json(s.u[i]) : json::array()},
                    {"rft", i < static_cast<int>(s.rft.size()) ? json(s.rft[i]) : json::array()},
                    {"rct", i < static_cast<int>(s.rct.size()) ? json(s.rct[i]) : json::array()}});
  }
  return {{"format", "fmp-solution"},
          {"version", kSolutionFormatVersion},
          {"num_periods", inst.num_periods()},
          {"checks", s.count_checks()},
          {"aircraft", rows}};
}

/// Reads the state grid and re-derives the ledgers (stored ledgers are
/// informational only).
inline Solution solution_from_json(const Instance& inst, const json& j) {
  try {
    if (j.value("format", "") != "fmp-solution") throw FormatError("not an fmp-solution document");
    if (j.at("version").get<int>() != kSolutionFormatVersion) throw FormatError("unsupported solution version");
    const auto sets = derive_index_sets(inst);
    Solution s(inst.num_aircraft(), inst.num_periods());
    const auto& rows = j.at("aircraft");
    if (static_cast<int>(rows.size()) != inst.num_aircraft()) throw FormatError("solution has wrong aircraft count");
    for (const auto& row : rows) {
      const auto id = row.at("aircraft").get<std::string>();
      auto it = sets.aircraft_index.find(id);
      if (it == sets.aircraft_index.end()) throw FormatError("unknown aircraft " + id);
      const auto& cells = row.at("state");
      if (static_cast<int>(cells.size()) != inst.num_periods()) throw FormatError("row " + id + " has wrong length");
      for (int t = 1; t <= inst.num_periods(); ++t)
        s.at(it->second, t) = cell_from_string(sets, cells[t - 1].get<std::string>());
    }
    derive_usage(inst, s);
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("solution JSON: ") + e.what());
  }
}

inline std::string solution_to_csv(const Instance& inst, const Solution& s) {
  std::ostringstream out;
  out << "aircraft,period,state,u,rft,rct\n";
  for (int i = 0; i < s.num_aircraft(); ++i)
    for (int t = 1; t <= s.num_periods(); ++t) {
      out << inst.fleet[i].id << ',' << t << ',' << cell_to_string(inst, s.at(i, t)) << ',';
      if (i < static_cast<int>(s.u.size())) out << s.u[i][t - 1] << ',' << s.rft[i][t - 1] << ',' << s.rct[i][t - 1];
      else out << ",,";
      out << '\n';
    }
  return out.str();
}

inline json report_to_json(const Instance& inst, const ViolationReport& rep) {
  json entries = json::array();
  for (const auto& v : rep.entries) {
    json e = {{"family", family_name(v.family)}, {"magnitude", v.magnitude}};
    if (v.aircraft >= 0) e["aircraft"] = inst.fleet.at(v.aircraft).id;
    if (v.mission >= 0 && v.mission < inst.num_missions()) e["mission"] = inst.missions[v.mission].id;
    if (v.period > 0) e["period"] = v.period;
    if (v.cluster >= 0) e["cluster"] = inst.clusters.at(v.cluster).id;
    entries.push_back(std::move(e));
  }
  return {{"feasible", rep.feasible()}, {"violations", rep.size()}, {"entries", entries}};
}

// File helpers

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

inline void save_instance(const std::string& path, const Instance& inst) {
  write_file(path, instance_to_json(inst).dump(1) + "\n");
}

}  // namespace fmp
