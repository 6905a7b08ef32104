#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hecke {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class MixedKinds : public Error {
 public:
  using Error::Error;
};

class StoreSealed : public Error {
 public:
  using Error::Error;
};

class StoreMismatch : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

// L or R could not be established within the orbit cap: either the pair is
// not a Hecke pair or the cap is too small.
class OrbitCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

class NotFinitelyGenerated : public Error {
 public:
  using Error::Error;
};

class NonBiInvariantResult : public Error {
 public:
  using Error::Error;
};

class NotSelfAdjoint : public Error {
 public:
  using Error::Error;
};

class NotRelativelyUnimodular : public Error {
 public:
  using Error::Error;
};

class LengthUndefinedOnSupport : public Error {
 public:
  using Error::Error;
};

class BallIncomplete : public Error {
 public:
  using Error::Error;
};

class InfiniteH : public Error {
 public:
  using Error::Error;
};

class SubsetNotSubgroup : public Error {
 public:
  using Error::Error;
};

class NoStableFit : public Error {
 public:
  using Error::Error;
};

}  // namespace hecke
