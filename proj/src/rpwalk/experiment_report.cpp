#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "rpwalk/experiment.hpp"

namespace rpwalk {

using nlohmann::ordered_json;

std::string Table::to_csv() const {
  std::string out = "# ";
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ",";
    out += columns[c];
  }
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      const auto& v = row[c];
      if (v.is_string())
        out += v.get<std::string>();
      else if (v.is_null())
        out += "nan";
      else
        out += v.dump();
    }
    out += "\n";
  }
  return out;
}

bool ExperimentReport::passed() const {
  for (const auto& c : checks)
    if (c.counted && !c.pass) return false;
  return true;
}

ordered_json ExperimentReport::body() const {
  ordered_json b;
  b["kind"] = std::string(to_string(config.kind));
  b["seed"] = config.seed;
  b["config_hash"] = config_hash(config);
  b["config"] = rpwalk::to_json(config);
  b["hypotheses"] = hypotheses;
  b["flags"] = flags;
  b["results"] = results;
  ordered_json cs = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json j;
    j["name"] = c.name;
    j["value"] = c.value;
    j["relation"] = c.relation;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    j["counted"] = c.counted;
    if (!c.note.empty()) j["note"] = c.note;
    cs.push_back(std::move(j));
  }
  b["checks"] = std::move(cs);
  ordered_json ts = ordered_json::object();
  for (const auto& t : tables) ts[t.name] = {{"columns", t.columns}, {"rows", t.rows}};
  b["tables"] = std::move(ts);
  b["verdict"] = passed() ? "pass" : "fail";
  return b;
}

ordered_json ExperimentReport::to_json() const {
  ordered_json j;
  j["body"] = body();
  j["meta"] = {{"wall_clock_seconds", wall_clock_seconds}, {"timestamp", timestamp}};
  return j;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport r;
  switch (cfg.kind) {
    case ExperimentKind::fdd_clt: r = run_fdd_clt(cfg); break;
    case ExperimentKind::levy_area: r = run_levy_area(cfg); break;
    case ExperimentKind::moment_scaling: r = run_moment_scaling(cfg); break;
    case ExperimentKind::holder_threshold: r = run_holder_threshold(cfg); break;
    case ExperimentKind::wong_zakai: r = run_wong_zakai(cfg); break;
    case ExperimentKind::stochastic_integral: r = run_stochastic_integral(cfg); break;
    case ExperimentKind::symbolic_audit: r = run_symbolic_audit(cfg); break;
  }
  r.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  r.timestamp = buf;
  return r;
}

void write_report(const ExperimentReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  auto write = [&](const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    f << text;
  };
  write(fs::path(dir) / "report.json", report.to_json().dump(2) + "\n");
  for (const auto& t : report.tables) write(fs::path(dir) / (t.name + ".csv"), t.to_csv());
}

}  // namespace rpwalk
