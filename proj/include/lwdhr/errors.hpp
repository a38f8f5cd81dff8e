#pragma once

#include <stdexcept>
#include <string>

namespace lwdhr {

// Every error carries a stable kind string; io_cli maps kinds to exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define LWDHR_ERROR(Name)                                               \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& msg) : Error(#Name, msg) {}        \
  };

LWDHR_ERROR(SchemaError)
LWDHR_ERROR(ConsistencyError)
LWDHR_ERROR(NumericalError)
LWDHR_ERROR(UnknownLabel)
LWDHR_ERROR(ShapeMismatch)
LWDHR_ERROR(DecompositionError)
LWDHR_ERROR(HexagonResidualError)
LWDHR_ERROR(CoherenceError)
LWDHR_ERROR(GeometryError)
LWDHR_ERROR(PlacementError)
LWDHR_ERROR(TruncationError)
LWDHR_ERROR(NotIntertwiner)
LWDHR_ERROR(ConfigError)

#undef LWDHR_ERROR

}  // namespace lwdhr
