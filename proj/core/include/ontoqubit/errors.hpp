#pragma once

#include <stdexcept>
#include <string>

namespace ontoqubit {

/// A preparation or ontic state outside the region where the model's
/// probabilities are valid.
class ValidityError : public std::domain_error {
 public:
  explicit ValidityError(const std::string& what) : std::domain_error(what) {}
};

/// Input sits on a coordinate pole where the map is undefined.
class SingularityError : public std::domain_error {
 public:
  explicit SingularityError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace ontoqubit
