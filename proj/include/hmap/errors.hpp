#pragma once

#include <stdexcept>
#include <string>

namespace hmap {

// Bad user input: malformed config, missing file, invalid parameter range.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A construction refused to proceed or a certificate failed: the input was
// well-formed but the requested object could not be certified.
struct CertifiedFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hmap
