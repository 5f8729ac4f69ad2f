#pragma once

#include <stdexcept>
#include <string>

namespace vxl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Poisson right-hand side with a nonzero volume mean.
class NonzeroMean : public Error {
 public:
  NonzeroMean(const std::string& what, double mean) : Error(what), mean_(mean) {}
  double mean() const noexcept { return mean_; }

 private:
  double mean_;
};

class NonSolenoidal : public Error {
 public:
  NonSolenoidal(const std::string& what, double max_divergence)
      : Error(what), max_divergence_(max_divergence) {}
  double max_divergence() const noexcept { return max_divergence_; }

 private:
  double max_divergence_;
};

/// Time step exceeds the advective stability bound.
class CflViolation : public Error {
 public:
  CflViolation(const std::string& what, double max_velocity, double dt_bound)
      : Error(what), max_velocity_(max_velocity), dt_bound_(dt_bound) {}
  double max_velocity() const noexcept { return max_velocity_; }
  double dt_bound() const noexcept { return dt_bound_; }

 private:
  double max_velocity_;
  double dt_bound_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace vxl
