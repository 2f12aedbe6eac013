#pragma once

#include <stdexcept>
#include <string>

namespace gegenforge {

/// Argument sits on (or within machine tolerance of) a pole.
class pole_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative procedure exhausted its budget without meeting tolerance.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Series index below the first index of the series.
class index_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace gegenforge
