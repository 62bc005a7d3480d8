// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace echotk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unrecognized categorical label (bias or factual-reporting vocabulary).
struct LabelError : Error {
  using Error::Error;
};

// Structurally broken input file (bad header, unterminated quote, ...).
struct FormatError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace echotk
