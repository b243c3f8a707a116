#pragma once

#include <stdexcept>
#include <string>

namespace vexp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateCut : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct Infeasible : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct Disconnected : Error {
  using Error::Error;
};
struct DegenerateVector : Error {
  using Error::Error;
};
struct NotPSD : Error {
  using Error::Error;
};
struct ZeroVector : Error {
  using Error::Error;
};
struct EmptyResult : Error {
  using Error::Error;
};
struct NotRegular : Error {
  using Error::Error;
};
struct ZeroVariance : Error {
  using Error::Error;
};
struct BadEpsilon : Error {
  using Error::Error;
};
struct TooLargeR : Error {
  using Error::Error;
};
struct BadNormalization : Error {
  using Error::Error;
};
struct InfeasibleDegreeSequence : Error {
  using Error::Error;
};

}  // namespace vexp
