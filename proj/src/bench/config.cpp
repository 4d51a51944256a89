#include "fsd/bench/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsd/errors.hpp"
#include "fsd/fsd_core.hpp"
#include "fsd/mimo_model.hpp"
#include "fsd/oracle.hpp"

namespace fsd::bench {

using nlohmann::json;

const char* to_string(Detector d) {
  switch (d) {
    case Detector::kFsd:
      return "fsd";
    case Detector::kSeeSd:
      return "see-sd";
    case Detector::kExhaustive:
      return "exhaustive";
    case Detector::kFsdFx:
      return "fsd-fx";
  }
  return "unknown";
}

Detector parse_detector(std::string_view text) {
  if (text == "fsd") return Detector::kFsd;
  if (text == "see-sd") return Detector::kSeeSd;
  if (text == "exhaustive") return Detector::kExhaustive;
  if (text == "fsd-fx") return Detector::kFsdFx;
  throw ConfigError("unknown detector '" + std::string(text) +
                    "' (expected fsd|see-sd|exhaustive|fsd-fx)");
}

std::vector<double> parse_snr_list(std::string_view text) {
  std::vector<double> out;
  const std::string s(text);
  if (s.find(':') != std::string::npos) {
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) ||
        stop < start) {
      throw ConfigError("bad SNR range '" + s + "' (expected start:stop:step)");
    }
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(start + i * step);
    return out;
  }
  std::istringstream in(s);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ConfigError("bad SNR value '" + token + "'");
    }
  }
  if (out.empty()) throw ConfigError("snr list is empty");
  return out;
}

void validate(const SimConfig& cfg) {
  if (cfg.n_tx < 1 || cfg.n_rx < cfg.n_tx) {
    throw ConfigError("antennas: need 1 <= n_tx <= n_rx for a full-rank real model");
  }
  const Constellation c(cfg.bits_per_symbol);
  const NodeDistribution dist = NodeDistribution::parse(cfg.distribution, c.branches());
  if (dist.levels() != 2 * cfg.n_tx) {
    throw ConfigError("dist: " + std::to_string(dist.levels()) + " levels given, the real model has " +
                      std::to_string(2 * cfg.n_tx));
  }
  if (cfg.frames < 1) throw ConfigError("frames must be >= 1");
  if (cfg.snr_db.empty()) throw ConfigError("snr list is empty");
  for (double s : cfg.snr_db) {
    if (!std::isfinite(s)) throw ConfigError("snr values must be finite");
  }
  if (cfg.detectors.empty()) throw ConfigError("no detector selected");
  if (cfg.qrd_modes.empty()) throw ConfigError("no qrd mode selected");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (!(cfg.l_max > 0)) throw ConfigError("l_max must be positive");
  for (Detector d : cfg.detectors) {
    if (d == Detector::kExhaustive) lattice_size(2 * cfg.n_tx, c);
    if (d == Detector::kFsdFx) {
      if (cfg.bits_per_symbol != 4) throw ConfigError("fsd-fx models the 16-QAM datapath only");
      if (dist != NodeDistribution::standard(2 * cfg.n_tx, c.branches())) {
        throw ConfigError("fsd-fx supports only the distribution with the top two levels expanded");
      }
      if (cfg.parallelism != 4 && cfg.parallelism != 8) throw ConfigError("parallelism must be 4 or 8");
      if (cfg.frac_bits < 0 || cfg.frac_bits > 11) throw ConfigError("frac_bits must lie in [0, 11]");
      if (!(cfg.fx_input_scale > 0)) throw ConfigError("fx_input_scale must be positive");
    }
  }
}

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json to_json(const SimConfig& cfg, bool include_io) {
  json j;
  j["n_tx"] = cfg.n_tx;
  j["n_rx"] = cfg.n_rx;
  j["bits_per_symbol"] = cfg.bits_per_symbol;
  j["dist"] = cfg.distribution;
  std::vector<std::string> detectors;
  for (Detector d : cfg.detectors) detectors.emplace_back(to_string(d));
  j["detector"] = detectors;
  std::vector<std::string> qrd;
  for (QrdMode m : cfg.qrd_modes) qrd.emplace_back(to_string(m));
  j["qrd"] = qrd;
  j["snr"] = cfg.snr_db;
  j["frames"] = cfg.frames;
  j["seed"] = cfg.seed;
  j["frac_bits"] = cfg.frac_bits;
  j["parallelism"] = cfg.parallelism;
  j["fx_input_scale"] = cfg.fx_input_scale;
  j["l_max"] = cfg.l_max;
  if (include_io) {
    j["threads"] = cfg.threads;
    j["out"] = cfg.out_path;
  }
  return j;
}

}  // namespace

SimConfig config_from_json_text(std::string_view text) {
  SimConfig cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    read_if(j, "n_tx", cfg.n_tx);
    read_if(j, "n_rx", cfg.n_rx);
    read_if(j, "bits_per_symbol", cfg.bits_per_symbol);
    read_if(j, "dist", cfg.distribution);
    read_if(j, "frames", cfg.frames);
    read_if(j, "seed", cfg.seed);
    read_if(j, "frac_bits", cfg.frac_bits);
    read_if(j, "parallelism", cfg.parallelism);
    read_if(j, "fx_input_scale", cfg.fx_input_scale);
    read_if(j, "l_max", cfg.l_max);
    read_if(j, "threads", cfg.threads);
    read_if(j, "out", cfg.out_path);
    if (j.contains("snr")) {
      const json& snr = j.at("snr");
      cfg.snr_db = snr.is_string() ? parse_snr_list(snr.get<std::string>())
                                   : snr.get<std::vector<double>>();
    }
    auto string_list = [&](const char* key) {
      std::vector<std::string> out;
      const json& v = j.at(key);
      if (v.is_string()) {
        std::istringstream in(v.get<std::string>());
        std::string token;
        while (std::getline(in, token, ',')) out.push_back(token);
      } else {
        out = v.get<std::vector<std::string>>();
      }
      return out;
    };
    if (j.contains("detector")) {
      cfg.detectors.clear();
      for (const auto& s : string_list("detector")) cfg.detectors.push_back(parse_detector(s));
    }
    if (j.contains("qrd")) {
      cfg.qrd_modes.clear();
      for (const auto& s : string_list("qrd")) cfg.qrd_modes.push_back(parse_qrd_mode(s));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  return cfg;
}

SimConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return config_from_json_text(text.str());
}

std::string config_to_json(const SimConfig& cfg) { return to_json(cfg, true).dump(2); }

std::string config_hash(const SimConfig& cfg) {
  const std::string canonical = to_json(cfg, false).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fsd::bench
