#include "centrifugal/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <regex>
#include <sstream>

#include "centrifugal/errors.hpp"

namespace centrifugal {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"mirror", {"R_cm", "L_cm", "U0_neV", "label"}},
      {"beam", {"v_mps", "n_max"}},
      {"sweep",
       {"v_min_mps", "v_max_mps", "steps", "v_ref_mps", "n_states", "population", "band_height_um",
        "U0_list_neV"}},
      {"roughness", {"br_nm", "lr_um", "Ef_neV", "spectrum"}},
      {"output", {"path", "plot_script", "threads"}},
  };
  return keys;
}

double parse_double(const std::string& key, const Entry& e) {
  double x = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || !std::isfinite(x)) {
    throw ParseError(e.line, key + ": '" + e.value + "' is not a number");
  }
  return x;
}

int parse_int(const std::string& key, const Entry& e) {
  int x = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(e.line, key + ": '" + e.value + "' is not an integer");
  }
  return x;
}

bool parse_bool(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ParseError(e.line, key + ": expected true or false");
}

double positive(const std::string& key, double x) {
  if (!(x > 0.0)) throw ValidationError(key, "must be positive");
  return x;
}

const Entry* find(const Section& s, const std::string& key) {
  const auto it = s.find(key);
  return it == s.end() ? nullptr : &it->second;
}

const Entry& require(const Section& s, const std::string& key) {
  const Entry* e = find(s, key);
  if (!e) throw ValidationError(key, "required key is missing");
  return *e;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  static const std::regex spaced_equals(R"(\s*=\s*)");
  std::string current;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = std::regex_replace(line, spaced_equals, "=");
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      if (tok.front() == '[') {
        if (tok.back() != ']' || tok.size() < 3) throw ParseError(line_no, "malformed section '" + tok + "'");
        current = tok.substr(1, tok.size() - 2);
        if (!known_keys().count(current)) throw ParseError(line_no, "unknown section [" + current + "]");
        if (sections.count(current)) throw ParseError(line_no, "section [" + current + "] repeated");
        sections[current];
        continue;
      }
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size()) {
        throw ParseError(line_no, "expected key=value, got '" + tok + "'");
      }
      if (current.empty()) throw ParseError(line_no, "key outside of any section");
      const std::string key = tok.substr(0, eq);
      if (!known_keys().at(current).count(key)) {
        throw ParseError(line_no, "unknown key '" + key + "' in [" + current + "]");
      }
      Section& sec = sections[current];
      if (sec.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
      sec[key] = Entry{tok.substr(eq + 1), line_no};
    }
  }

  RunConfig cfg;
  if (const auto it = sections.find("mirror"); it != sections.end()) {
    const Section& s = it->second;
    const double r = positive("R_cm", parse_double("R_cm", require(s, "R_cm")));
    const double l = positive("L_cm", parse_double("L_cm", require(s, "L_cm")));
    const double u = positive("U0_neV", parse_double("U0_neV", require(s, "U0_neV")));
    if (!(l < 2.0 * std::numbers::pi * r)) throw ValidationError("L_cm", "must be shorter than 2*pi*R_cm");
    const Entry* label = find(s, "label");
    cfg.mirror = MirrorSpec::from_lab_units(r, l, u, label ? label->value : std::string{});
  }
  if (const auto it = sections.find("beam"); it != sections.end()) {
    const Section& s = it->second;
    if (const Entry* e = find(s, "v_mps")) cfg.velocity = positive("v_mps", parse_double("v_mps", *e));
    if (const Entry* e = find(s, "n_max")) {
      cfg.n_max = parse_int("n_max", *e);
      if (cfg.n_max < 1) throw ValidationError("n_max", "must be at least 1");
    }
  }
  if (const auto it = sections.find("sweep"); it != sections.end()) {
    const Section& s = it->second;
    SweepConfig sw;
    if (const Entry* e = find(s, "v_min_mps")) sw.v_min = positive("v_min_mps", parse_double("v_min_mps", *e));
    if (const Entry* e = find(s, "v_max_mps")) sw.v_max = positive("v_max_mps", parse_double("v_max_mps", *e));
    if (const Entry* e = find(s, "v_ref_mps")) sw.v_ref = positive("v_ref_mps", parse_double("v_ref_mps", *e));
    if (const Entry* e = find(s, "steps")) {
      sw.steps = parse_int("steps", *e);
      if (*sw.steps < 2) throw ValidationError("steps", "must be at least 2");
    }
    if (sw.v_min && sw.v_max && !(*sw.v_max > *sw.v_min)) {
      throw ValidationError("v_max_mps", "must exceed v_min_mps");
    }
    if (sw.v_ref && sw.v_min && sw.v_max && !(*sw.v_ref >= *sw.v_min && *sw.v_ref <= *sw.v_max)) {
      throw ValidationError("v_ref_mps", "must lie within [v_min_mps, v_max_mps]");
    }
    if (const Entry* e = find(s, "n_states")) {
      sw.n_states = parse_int("n_states", *e);
      if (sw.n_states < 1) throw ValidationError("n_states", "must be at least 1");
    }
    if (const Entry* e = find(s, "population")) {
      if (e->value == "equal") {
        cfg.population.mode = PopulationModel::Mode::equal;
      } else if (e->value == "overlap") {
        cfg.population.mode = PopulationModel::Mode::overlap;
      } else {
        throw ValidationError("population", "must be equal or overlap");
      }
    }
    if (const Entry* e = find(s, "band_height_um")) {
      cfg.population.band_height_h = positive("band_height_um", parse_double("band_height_um", *e)) * 1e-6;
    }
    if (cfg.population.mode == PopulationModel::Mode::overlap && !(cfg.population.band_height_h > 0.0)) {
      throw ValidationError("band_height_um", "required in overlap mode");
    }
    if (const Entry* e = find(s, "U0_list_neV")) {
      std::string item;
      std::istringstream items(e->value);
      while (std::getline(items, item, ',')) {
        const double u = positive("U0_list_neV", parse_double("U0_list_neV", Entry{item, e->line}));
        sw.u0_list.push_back(u * PhysicalConstants::codata().nev_to_joule);
      }
    }
    cfg.sweep = sw;
  }
  if (const auto it = sections.find("roughness"); it != sections.end()) {
    const Section& s = it->second;
    RoughnessSpec r;
    r.amplitude_br = parse_double("br_nm", require(s, "br_nm")) * 1e-9;
    if (!(r.amplitude_br >= 0.0)) throw ValidationError("br_nm", "must be non-negative");
    r.correlation_length_lr = positive("lr_um", parse_double("lr_um", require(s, "lr_um"))) * 1e-6;
    if (const Entry* e = find(s, "Ef_neV"); e && e->value != "auto") {
      r.mean_final_energy_Ef =
          positive("Ef_neV", parse_double("Ef_neV", *e)) * PhysicalConstants::codata().nev_to_joule;
    }
    if (const Entry* e = find(s, "spectrum")) r.spectrum = RoughnessSpectrum::load(e->value);
    cfg.roughness = r;
  }
  if (const auto it = sections.find("output"); it != sections.end()) {
    const Section& s = it->second;
    if (const Entry* e = find(s, "path")) cfg.output_path = e->value;
    if (const Entry* e = find(s, "plot_script")) cfg.plot_script = parse_bool("plot_script", *e);
    if (const Entry* e = find(s, "threads")) {
      cfg.threads = parse_int("threads", *e);
      if (cfg.threads < 1) throw ValidationError("threads", "must be at least 1");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void RunConfig::require_for(const std::string& subcommand) const {
  const bool needs_beam = subcommand == "scales" || subcommand == "resonances";
  const bool needs_sweep = subcommand == "lifetimes" || subcommand == "sweep" ||
                           subcommand == "rough-sweep" || subcommand == "scaling-check";
  const bool needs_roughness = subcommand == "rough-sweep" || subcommand == "scaling-check";
  const bool needs_mirror = subcommand != "verify";

  if (needs_mirror && !mirror) throw ValidationError("[mirror]", "section is required");
  if (!needs_beam && velocity) throw ValidationError("[beam]", "not used by " + subcommand);
  if (!needs_sweep && sweep) throw ValidationError("[sweep]", "not used by " + subcommand);
  if (!needs_roughness && roughness) throw ValidationError("[roughness]", "not used by " + subcommand);

  if (needs_beam && !velocity) throw ValidationError("v_mps", "required key is missing");
  if (needs_roughness && !roughness) throw ValidationError("[roughness]", "section is required");
  if (!needs_sweep) return;
  if (!sweep) throw ValidationError("[sweep]", "section is required");

  if (subcommand == "scaling-check") {
    std::set<double> distinct(sweep->u0_list.begin(), sweep->u0_list.end());
    if (distinct.size() < 3) throw ValidationError("U0_list_neV", "needs at least 3 distinct values");
    return;
  }
  if (!sweep->v_min) throw ValidationError("v_min_mps", "required key is missing");
  if (!sweep->v_max) throw ValidationError("v_max_mps", "required key is missing");
  if (!sweep->steps) throw ValidationError("steps", "required key is missing");
  if (subcommand != "lifetimes" && !sweep->v_ref) {
    throw ValidationError("v_ref_mps", "required key is missing");
  }
}

SweepParams RunConfig::sweep_params() const {
  if (!sweep || !sweep->v_min || !sweep->v_max || !sweep->steps) {
    throw ValidationError("[sweep]", "velocity range is incomplete");
  }
  SweepParams p;
  p.v_min = *sweep->v_min;
  p.v_max = *sweep->v_max;
  p.steps = *sweep->steps;
  p.reference_velocity = sweep->v_ref.value_or(*sweep->v_min);
  p.validate();
  return p;
}

}  // namespace centrifugal
