#ifndef BDKIN_TYPES_HPP_
#define BDKIN_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bdkin {

using Vector = Eigen::ArrayXd;
using Index = std::int64_t;

// Input or parameter violates a documented precondition. CLI maps this to exit 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numeric procedure failed to converge or left its supported range. CLI maps this to exit 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class SupercriticalMassError : public ValidationError {
 public:
  explicit SupercriticalMassError(const std::string& msg) : ValidationError(msg) {}
};

class ZeroConcentrationError : public ValidationError {
 public:
  explicit ZeroConcentrationError(const std::string& msg) : ValidationError(msg) {}
};

}  // namespace bdkin

#endif  // BDKIN_TYPES_HPP_
