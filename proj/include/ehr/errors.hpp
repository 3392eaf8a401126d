#pragma once

#include <stdexcept>
#include <string>

namespace ehr {

// Malformed input: bad encodings, unparseable policies, size violations.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cryptographic machinery failure: invalid points, AEAD errors, bad keys.
class CryptoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller asked for something the system's rules do not allow.
class DeniedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Persistent state is unavailable or fails its integrity checks.
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ehr
