#include "config.hpp"

#include <cmath>
#include <json.hpp>

namespace simplicial::cli {

namespace {

using json = nlohmann::json;

template <class T>
void read_field(const json& j, const char* key, T& dst) {
  try {
    dst = j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

void read_count(const json& j, const char* key, std::size_t& dst) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ConfigError(std::string("config field '") + key + "' must be a non-negative integer");
  }
  dst = j.get<std::size_t>();
}

}  // namespace

void apply_json(ExperimentConfig& cfg, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "seed") {
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError("config field 'seed' must be a non-negative integer");
      }
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "n") {
      read_count(v, "n", cfg.n);
    } else if (key == "d") {
      read_count(v, "d", cfg.d);
    } else if (key == "order") {
      read_count(v, "order", cfg.order);
    } else if (key == "heads") {
      read_count(v, "heads", cfg.heads);
    } else if (key == "layers") {
      read_count(v, "layers", cfg.layers);
    } else if (key == "weight_scale") {
      read_field(v, "weight_scale", cfg.weight_scale);
    } else if (key == "feature_scale") {
      read_field(v, "feature_scale", cfg.feature_scale);
    } else if (key == "mask") {
      read_field(v, "mask", cfg.mask);
    } else if (key == "mask_file") {
      read_field(v, "mask_file", cfg.mask_file);
    } else if (key == "radii") {
      read_field(v, "radii", cfg.radii);
    } else if (key == "samples") {
      read_count(v, "samples", cfg.samples);
    } else if (key == "k") {
      read_count(v, "k", cfg.k);
    } else if (key == "instances") {
      read_count(v, "instances", cfg.instances);
    } else if (key == "batch") {
      read_count(v, "batch", cfg.batch);
    } else if (key == "graph") {
      read_field(v, "graph", cfg.graph);
    } else if (key == "min_nodes") {
      read_count(v, "min_nodes", cfg.min_nodes);
    } else if (key == "max_nodes") {
      read_count(v, "max_nodes", cfg.max_nodes);
    } else if (key == "density") {
      read_field(v, "density", cfg.density);
    } else if (key == "forman") {
      read_field(v, "forman", cfg.forman);
    } else if (key == "precision") {
      read_field(v, "precision", cfg.precision);
    } else if (key == "max_bits") {
      read_field(v, "max_bits", cfg.max_bits);
    } else if (key == "output") {
      read_field(v, "output", cfg.output);
    } else {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
}

void validate(const ExperimentConfig& cfg) {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string("config field '") + name + "' must be positive");
  };
  positive(cfg.n, "n");
  positive(cfg.d, "d");
  positive(cfg.order, "order");
  positive(cfg.heads, "heads");
  positive(cfg.samples, "samples");
  positive(cfg.instances, "instances");
  positive(cfg.batch, "batch");
  if (!(cfg.weight_scale > 0.0) || !std::isfinite(cfg.weight_scale)) {
    throw ConfigError("config field 'weight_scale' must be positive");
  }
  if (!(cfg.feature_scale > 0.0) || !std::isfinite(cfg.feature_scale)) {
    throw ConfigError("config field 'feature_scale' must be positive");
  }
  if (cfg.mask != "none" && cfg.mask != "causal" && cfg.mask != "file" && cfg.mask != "router") {
    throw ConfigError("config field 'mask' must be one of none, causal, file, router");
  }
  if (cfg.mask == "file" && cfg.mask_file.empty()) {
    throw ConfigError("config field 'mask_file' is required when mask is 'file'");
  }
  if (cfg.radii.empty()) throw ConfigError("config field 'radii' must not be empty");
  for (double r : cfg.radii) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("config field 'radii' entries must be >= 0");
  }
  if (cfg.graph != "tree" && cfg.graph != "sparse" && cfg.graph != "path" && cfg.graph != "cycle" &&
      cfg.graph != "mixed") {
    throw ConfigError("config field 'graph' must be one of tree, sparse, path, cycle, mixed");
  }
  if (cfg.min_nodes < 3) throw ConfigError("config field 'min_nodes' must be at least 3");
  if (cfg.max_nodes < cfg.min_nodes) throw ConfigError("config field 'max_nodes' must be >= min_nodes");
  if (!(cfg.density >= 0.0 && cfg.density <= 1.0)) throw ConfigError("config field 'density' must be in [0, 1]");
  if (cfg.forman != "combinatorial" && cfg.forman != "augmented") {
    throw ConfigError("config field 'forman' must be combinatorial or augmented");
  }
  if (cfg.precision != "extended" && cfg.precision != "double") {
    throw ConfigError("config field 'precision' must be extended or double");
  }
  if (cfg.max_bits < 128) throw ConfigError("config field 'max_bits' must be at least 128");
  if (cfg.output.empty()) throw ConfigError("config field 'output' must not be empty");
}

std::string to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["n"] = cfg.n;
  j["d"] = cfg.d;
  j["order"] = cfg.order;
  j["heads"] = cfg.heads;
  j["layers"] = cfg.layers;
  j["weight_scale"] = cfg.weight_scale;
  j["feature_scale"] = cfg.feature_scale;
  j["mask"] = cfg.mask;
  j["mask_file"] = cfg.mask_file;
  j["radii"] = cfg.radii;
  j["samples"] = cfg.samples;
  j["k"] = cfg.k;
  j["instances"] = cfg.instances;
  j["batch"] = cfg.batch;
  j["graph"] = cfg.graph;
  j["min_nodes"] = cfg.min_nodes;
  j["max_nodes"] = cfg.max_nodes;
  j["density"] = cfg.density;
  j["forman"] = cfg.forman;
  j["precision"] = cfg.precision;
  j["max_bits"] = cfg.max_bits;
  j["output"] = cfg.output;
  return j.dump();
}

}  // namespace simplicial::cli
