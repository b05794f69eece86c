#pragma once

#include <stdexcept>
#include <string>

namespace sparsevar {

// Raised on violated preconditions and malformed inputs. Messages name the
// offending series, date or column so they can be surfaced verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparsevar
