#pragma once

#include <stdexcept>
#include <string>

namespace eppsel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ChannelError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class PhysicalityError : public Error {
 public:
  using Error::Error;
};

// Target fidelity not reachable by the delay-tuned raw pair.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, double achievable_max)
      : Error(what), achievable_max_(achievable_max) {}
  double achievable_max() const { return achievable_max_; }

 private:
  double achievable_max_;
};

class DegenerateBranchError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace eppsel
