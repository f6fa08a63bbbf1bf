#ifndef OSP_ERRORS_HPP
#define OSP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace osp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};
struct UnknownId : Error {
  using Error::Error;
};
struct InvalidParams : Error {
  using Error::Error;
};
struct CapExceeded : Error {
  using Error::Error;
};
struct NoProgress : Error {
  using Error::Error;
};
struct MissingPriority : Error {
  using Error::Error;
};
struct MalformedTree : Error {
  using Error::Error;
};
struct MonotonicityViolation : Error {
  using Error::Error;
};
struct NotExtremal : Error {
  using Error::Error;
};
struct NotApplicable : Error {
  using Error::Error;
};
struct UnknownTheorem : Error {
  using Error::Error;
};

}  // namespace osp

#endif
