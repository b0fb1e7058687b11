#include "charsieve/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "charsieve/io.hpp"

namespace charsieve {

namespace {

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt_g(v[i]);
  }
  return s;
}

std::string join_strings(const std::vector<std::string>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i];
  }
  return s;
}

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<std::string> split_strings(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string ExperimentConfig::serialize() const {
  std::string s;
  s += "[run]\n";
  s += "workers = " + std::to_string(workers) + "\n";
  s += "out_dir = " + out_dir + "\n";
  if (identities) {
    const auto& c = *identities;
    s += "\n[identities]\n";
    s += "grid = " + join_doubles(c.grid) + "\n";
    s += "C = " + fmt_g(c.C) + "\n";
    s += "cutoff = " + c.cutoff + "\n";
    s += "pairs = " + std::to_string(c.pairs) + "\n";
    s += "max_mn = " + std::to_string(c.max_mn) + "\n";
    s += "seed = " + std::to_string(c.seed) + "\n";
    s += "tol_exact = " + fmt_g(c.tol_exact) + "\n";
    s += "tol_quad = " + fmt_g(c.tol_quad) + "\n";
    s += "lemma_cases = " + std::to_string(c.lemma_cases) + "\n";
  }
  if (asymptotics) {
    const auto& c = *asymptotics;
    s += "\n[asymptotics]\n";
    s += "regime = " + c.regime + "\n";
    s += "grid = " + join_doubles(c.grid) + "\n";
    s += "epsilon = " + fmt_g(c.epsilon) + "\n";
    s += "delta = " + fmt_g(c.delta) + "\n";
    s += "n_exponent = " + fmt_g(c.n_exponent) + "\n";
    s += "g = " + std::to_string(c.g) + "\n";
    s += "mollifier = " + c.mollifier + "\n";
    s += "x_rule = " + fmt_g(c.x_rule) + "\n";
    s += "cutoff = " + c.cutoff + "\n";
    s += "method = " + c.method + "\n";
    s += std::string("localized = ") + (c.localized ? "true" : "false") + "\n";
    s += "seed = " + std::to_string(c.seed) + "\n";
  }
  if (sieve) {
    const auto& c = *sieve;
    s += "\n[sieve]\n";
    s += "suites = " + join_strings(c.suites) + "\n";
    s += "trials = " + std::to_string(c.trials) + "\n";
    s += "N = " + std::to_string(c.N) + "\n";
    s += "Q = " + std::to_string(c.Q) + "\n";
    s += "M = " + std::to_string(c.M) + "\n";
    s += "T = " + fmt_g(c.T) + "\n";
    s += "seed = " + std::to_string(c.seed) + "\n";
  }
  return s;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  cfg.identities.reset();
  std::istringstream in(text);
  std::string line, section;
  auto bad = [](const std::string& what) {
    throw std::invalid_argument("config parse error: " + what);
  };
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad("malformed section header '" + line + "'");
      section = line.substr(1, line.size() - 2);
      if (section == "identities") cfg.identities = IdentitiesConfig{};
      else if (section == "asymptotics") cfg.asymptotics = AsymptoticsConfig{};
      else if (section == "sieve") cfg.sieve = SieveSuitesConfig{};
      else if (section != "run") bad("unknown section '" + section + "'");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) bad("expected 'key = value' in '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (section == "run") {
      if (key == "workers") cfg.workers = std::stoi(val);
      else if (key == "out_dir") cfg.out_dir = val;
      else bad("unknown key '" + key + "' in [run]");
    } else if (section == "identities") {
      auto& c = *cfg.identities;
      if (key == "grid") c.grid = split_doubles(val);
      else if (key == "C") c.C = std::stod(val);
      else if (key == "cutoff") c.cutoff = val;
      else if (key == "pairs") c.pairs = std::stoi(val);
      else if (key == "max_mn") c.max_mn = std::stoll(val);
      else if (key == "seed") c.seed = std::stoull(val);
      else if (key == "tol_exact") c.tol_exact = std::stod(val);
      else if (key == "tol_quad") c.tol_quad = std::stod(val);
      else if (key == "lemma_cases") c.lemma_cases = std::stoi(val);
      else bad("unknown key '" + key + "' in [identities]");
    } else if (section == "asymptotics") {
      auto& c = *cfg.asymptotics;
      if (key == "regime") c.regime = val;
      else if (key == "grid") c.grid = split_doubles(val);
      else if (key == "epsilon") c.epsilon = std::stod(val);
      else if (key == "delta") c.delta = std::stod(val);
      else if (key == "n_exponent") c.n_exponent = std::stod(val);
      else if (key == "g") c.g = std::stoi(val);
      else if (key == "mollifier") c.mollifier = val;
      else if (key == "x_rule") c.x_rule = std::stod(val);
      else if (key == "cutoff") c.cutoff = val;
      else if (key == "method") c.method = val;
      else if (key == "localized") c.localized = (val == "true" || val == "1");
      else if (key == "seed") c.seed = std::stoull(val);
      else bad("unknown key '" + key + "' in [asymptotics]");
    } else if (section == "sieve") {
      auto& c = *cfg.sieve;
      if (key == "suites") c.suites = split_strings(val);
      else if (key == "trials") c.trials = std::stoi(val);
      else if (key == "N") c.N = std::stoll(val);
      else if (key == "Q") c.Q = std::stoll(val);
      else if (key == "M") c.M = std::stoll(val);
      else if (key == "T") c.T = std::stod(val);
      else if (key == "seed") c.seed = std::stoull(val);
      else bad("unknown key '" + key + "' in [sieve]");
    } else {
      bad("key '" + key + "' outside any section");
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

u64 ExperimentConfig::hash() const {
  u64 h = 1469598103934665603ULL;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.identities = IdentitiesConfig{};
  cfg.asymptotics = AsymptoticsConfig{};
  cfg.sieve = SieveSuitesConfig{};
  return cfg;
}

}  // namespace charsieve
