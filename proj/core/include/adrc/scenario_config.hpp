#pragma once

// Flat sectioned key = value scenario files.
//
//   # comment
//   [plant]
//   kind = pendulum
//   x0 = -1.0471975511965976, 0
//
// Sections: plant, model, estimator, controller, reference, sim, noise.
// Missing keys keep the Scenario defaults; unknown sections or keys, duplicate
// keys and malformed values are rejected with the offending line number.

#include <stdexcept>
#include <string>

#include "adrc/sim.hpp"

namespace adrc {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

Scenario parse_scenario_config(const std::string& text);

// Emits every field; parse_scenario_config(dump_scenario_config(s)) == s bit for bit.
std::string dump_scenario_config(const Scenario& s);

// Reads a file and parses it. Throws ConfigError (line 0) if unreadable.
Scenario load_scenario_file(const std::string& path);

}  // namespace adrc
