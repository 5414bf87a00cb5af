#pragma once

#include <stdexcept>
#include <string>

namespace qbc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong lengths, out-of-range indices, bad knobs.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A CipherKey whose fields break the Step 1-4 structure.
class KeyError : public Error {
 public:
  using Error::Error;
};

/// A decrypted register that is not a computational basis state. Signals
/// tampering, a wrong key, or corruption in transit.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Register or enumeration size over the desk-scale caps.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or schema-violating file contents.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbc
