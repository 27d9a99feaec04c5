#pragma once

#include <stdexcept>

namespace growthcast {

// Configuration or input validation problem; the CLI driver maps this to
// exit code 2 (runtime failures map to 3).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace growthcast
