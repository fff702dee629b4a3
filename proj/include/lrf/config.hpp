#pragma once

#include <string>

#include "lrf/model.hpp"

namespace lrf {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line, int col)
      : std::runtime_error("config:" + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

// Model configuration: a key-value tree with sections
//   lattice { d 1  spins 2  side 3 }
//   beta 8
//   preset bcs { t 0  mu 0  g 1 }
//   local { term <re> <im> (<nu> <spin> <dx> [dy dz])... }
//   channel { gamma -1  weight 1  term ...  prime ... }
// Presets bcs, forward and hubbard-type expand to the standard models.
LongRangeModel load_model(const std::string& text);
LongRangeModel load_model_file(const std::string& path);

// canonical config text; reparsing reproduces the same model hash
std::string serialize_config(const LongRangeModel& m);

}  // namespace lrf
