#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cornerlab/environment.hpp"
#include "json.hpp"

namespace cornerlab::app {

inline constexpr const char* kVersion = "0.1.0";

/// Bad configuration; `line` is 0 for command-line flags.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, std::size_t line, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

struct ExperimentConfig {
  std::string command;
  std::string dist = "exponential";  ///< exponential | geometric | bernoulli
  double mean = 1.0;                 ///< exponential mean
  double p0 = 0.5;                   ///< geometric P(w = 0)
  double p = 0.7;                    ///< bernoulli P(w = 1)
  double low = 0.0;                  ///< bernoulli lower value
  double a = 0.5;
  std::int64_t n = 200;
  std::vector<std::int64_t> ladder;
  std::int64_t window_width = 20;
  std::int64_t window_height = 20;
  std::int64_t length = 200;  ///< stationary grid size L
  std::int64_t reps = 20;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out = ".";
  std::vector<std::string> formats{"csv", "json"};

  bool wants(const std::string& format) const;
};

const std::vector<std::string>& commands();

/// Assigns one key; `line` is used for diagnostics.
void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value, std::size_t line = 0);

/// key = value lines; '#' starts a comment.
void parse_config(ExperimentConfig& cfg, std::istream& in);

void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

WeightDistribution make_distribution(const ExperimentConfig& cfg);

/// Runs the configured command, writing artifacts under cfg.out. Returns 0,
/// or 1 when an exact invariant fails. Throws ConfigError on bad input.
int run(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace cornerlab::app
