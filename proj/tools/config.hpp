#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace simplicial::cli {

// Raised for invalid configuration values; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::uint64_t seed = 42;
  std::size_t n = 4;
  std::size_t d = 4;
  std::size_t order = 2;
  std::size_t heads = 1;
  std::size_t layers = 4;
  double weight_scale = 0.25;
  double feature_scale = 0.1;
  std::string mask = "none";  // none | causal | file | router
  std::string mask_file;
  std::vector<double> radii{0.25, 0.5, 1.0};
  std::size_t samples = 100;
  std::size_t k = 2;
  std::size_t instances = 50;
  std::size_t batch = 1000;
  std::string graph = "tree";  // tree | sparse | path | cycle | mixed
  std::size_t min_nodes = 5;
  std::size_t max_nodes = 20;
  double density = 0.12;
  std::string forman = "augmented";
  std::string precision = "extended";  // extended | double
  unsigned max_bits = 65536;
  std::string output = "results";
};

// Overlays the keys of a JSON object onto `cfg`. Unknown keys and values of
// the wrong type raise ConfigError naming the field.
void apply_json(ExperimentConfig& cfg, const std::string& json_text);

// Field-level checks shared by every subcommand.
void validate(const ExperimentConfig& cfg);

std::string to_json(const ExperimentConfig& cfg);

}  // namespace simplicial::cli
