#include "fairbandit/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fairbandit {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

using KeyValues = std::map<std::string, std::string>;

const std::vector<std::string> kTags = {
    "ucb-mistreatment", "fair-vs-ucb",        "disparity",
    "ridgefair-regret", "fairgap-regret",     "gap-sweep",
    "lowerbound-posterior", "circle-demo",
};

// Reference setups; any key can be overridden from the file or --set.
KeyValues defaults_for(const std::string& tag) {
  KeyValues kv;
  kv["delta"] = "0.05";
  kv["gamma"] = "1";
  kv["seed"] = "1";
  kv["stride"] = "1";
  kv["noise"] = "gaussian";
  kv["R"] = "1";
  if (tag == "ucb-mistreatment") {
    kv["T"] = "10000";  kv["trials"] = "100";  kv["k"] = "10";  kv["d"] = "2";
    kv["stride"] = "10";
  } else if (tag == "fair-vs-ucb") {
    kv["T"] = "10000";  kv["trials"] = "100";  kv["k"] = "10";  kv["d"] = "2";
    kv["stride"] = "10";
  } else if (tag == "disparity") {
    kv["T"] = "25";  kv["trials"] = "1000";  kv["k"] = "10";  kv["d"] = "2";
    kv["p"] = "0.9";
  } else if (tag == "ridgefair-regret") {
    kv["T"] = "8000";  kv["trials"] = "50";  kv["k"] = "5";  kv["d"] = "2";
    kv["m"] = "1";  kv["stride"] = "10";
  } else if (tag == "fairgap-regret") {
    kv["T"] = "20000";  kv["trials"] = "100";  kv["d"] = "2";
    kv["R"] = "0.5";  kv["beta"] = "1,0.5";  kv["c"] = "1";  kv["stride"] = "20";
  } else if (tag == "gap-sweep") {
    kv["T"] = "20000";  kv["trials"] = "30";  kv["d"] = "2";
    kv["R"] = "0.5";  kv["c"] = "1";  kv["stride"] = "50";
    kv["gaps"] = "0.125,0.25,0.5,1.0";
  } else if (tag == "lowerbound-posterior") {
    kv["T"] = "100000";  kv["trials"] = "10000";  kv["eps"] = "0.05";
  } else if (tag == "circle-demo") {
    kv["T"] = "10000";  kv["trials"] = "20";  kv["d"] = "2";
    kv["noise"] = "uniform";  kv["circle_n"] = "360";  kv["beta"] = "1,0";
    kv["c"] = "1";  kv["stride"] = "20";
  }
  return kv;
}

const std::vector<std::string> kKnownKeys = {
    "experiment", "T", "trials", "k", "d", "m", "delta", "gamma", "noise",
    "R", "seed", "p", "eps", "c", "burn_in", "fair_eps", "gaps", "beta",
    "circle_n", "polytope", "stride",
};

void insert_pair(KeyValues& kv, const std::string& entry, const std::string& where) {
  auto pos = entry.find('=');
  if (pos == std::string::npos)
    throw std::invalid_argument(where + ": expected key=value, got \"" + entry + "\"");
  std::string key = trim(entry.substr(0, pos));
  std::string value = trim(entry.substr(pos + 1));
  if (key.empty())
    throw std::invalid_argument(where + ": empty key in \"" + entry + "\"");
  if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
    throw std::invalid_argument(where + ": unknown key \"" + key + "\"");
  kv[key] = value;
}

long parse_long(const KeyValues& kv, const std::string& key) {
  const std::string& raw = kv.at(key);
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(raw, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not an integer: \"" + raw + "\"");
  }
  if (used != raw.size())
    throw std::invalid_argument("config key " + key + ": trailing characters in \"" + raw + "\"");
  return value;
}

double parse_double(const KeyValues& kv, const std::string& key) {
  const std::string& raw = kv.at(key);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(raw, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not a number: \"" + raw + "\"");
  }
  if (used != raw.size())
    throw std::invalid_argument("config key " + key + ": trailing characters in \"" + raw + "\"");
  return value;
}

void require_positive(long v, const std::string& key) {
  if (v <= 0) throw std::invalid_argument("config key " + key + ": must be positive");
}

ExperimentConfig from_key_values(KeyValues kv) {
  auto tag_it = kv.find("experiment");
  if (tag_it == kv.end())
    throw std::invalid_argument("config: missing required key \"experiment\"");
  std::string tag = tag_it->second;
  if (std::find(kTags.begin(), kTags.end(), tag) == kTags.end()) {
    std::string known;
    for (const auto& t : kTags) known += (known.empty() ? "" : ", ") + t;
    throw std::invalid_argument("config: unknown experiment \"" + tag +
                                "\"; known tags: " + known);
  }
  KeyValues merged = defaults_for(tag);
  for (auto& [key, value] : kv) merged[key] = value;

  ExperimentConfig cfg;
  cfg.experiment = tag;
  cfg.horizon = parse_long(merged, "T");
  require_positive(cfg.horizon, "T");
  cfg.trials = static_cast<int>(parse_long(merged, "trials"));
  require_positive(cfg.trials, "trials");
  if (merged.count("k")) {
    cfg.k = static_cast<int>(parse_long(merged, "k"));
    require_positive(cfg.k, "k");
  }
  if (merged.count("d")) {
    cfg.d = static_cast<int>(parse_long(merged, "d"));
    require_positive(cfg.d, "d");
  }
  if (merged.count("m")) {
    cfg.m = static_cast<int>(parse_long(merged, "m"));
    require_positive(cfg.m, "m");
    if (merged.count("k") && cfg.m > cfg.k)
      throw std::invalid_argument("config key m: quota exceeds the k contexts per round");
  }
  cfg.delta = parse_double(merged, "delta");
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0))
    throw std::invalid_argument("config key delta: must be in (0, 1]");
  cfg.gamma = parse_double(merged, "gamma");
  if (!(cfg.gamma >= 1.0))
    throw std::invalid_argument("config key gamma: must be >= 1");
  cfg.noise = merged.at("noise");
  if (cfg.noise != "gaussian" && cfg.noise != "uniform" && cfg.noise != "none")
    throw std::invalid_argument("config key noise: got \"" + cfg.noise +
                                "\", must be gaussian, uniform or none");
  cfg.noise_scale = parse_double(merged, "R");
  if (!(cfg.noise_scale >= 0.0))
    throw std::invalid_argument("config key R: must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(parse_long(merged, "seed"));
  if (merged.count("p")) {
    cfg.p = parse_double(merged, "p");
    if (!(cfg.p >= 0.0 && cfg.p <= 1.0))
      throw std::invalid_argument("config key p: must be in [0, 1]");
  }
  if (merged.count("eps")) {
    cfg.eps = parse_double(merged, "eps");
    if (!(cfg.eps > 0.0 && cfg.eps < 0.5))
      throw std::invalid_argument("config key eps: must be in (0, 0.5)");
  }
  if (merged.count("c")) {
    cfg.decay_exponent = parse_double(merged, "c");
    if (!(cfg.decay_exponent > 0.0))
      throw std::invalid_argument("config key c: must be positive");
  }
  if (merged.count("burn_in")) {
    cfg.burn_in = static_cast<int>(parse_long(merged, "burn_in"));
    require_positive(cfg.burn_in, "burn_in");
  }
  if (merged.count("fair_eps")) {
    cfg.fairness_epsilon = parse_double(merged, "fair_eps");
    if (cfg.fairness_epsilon < 0.0)
      throw std::invalid_argument("config key fair_eps: must be nonnegative");
  }
  if (merged.count("gaps")) cfg.gaps = merged.at("gaps");
  if (merged.count("beta")) cfg.beta = merged.at("beta");
  if (merged.count("circle_n")) {
    cfg.circle_n = static_cast<int>(parse_long(merged, "circle_n"));
    if (cfg.circle_n < 3)
      throw std::invalid_argument("config key circle_n: must be >= 3");
  }
  if (merged.count("polytope")) cfg.polytope_file = merged.at("polytope");
  cfg.stride = static_cast<int>(parse_long(merged, "stride"));
  require_positive(cfg.stride, "stride");
  return cfg;
}

}  // namespace

const std::vector<std::string>& experiment_tags() { return kTags; }

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<std::string>& overrides) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    insert_pair(kv, body, "config line " + std::to_string(line_no));
  }
  for (const std::string& entry : overrides) insert_pair(kv, entry, "--set");
  return from_key_values(std::move(kv));
}

ExperimentConfig parse_config_file(const std::string& path,
                                   const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), overrides);
}

}  // namespace fairbandit
