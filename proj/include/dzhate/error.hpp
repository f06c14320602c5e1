#pragma once

#include <stdexcept>
#include <string>

namespace dzhate {

// Every contract violation in the library surfaces as this exception type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dzhate
