/*
Copyright 2026 The baptista Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace baptista {

/// Base class for all library failures that are not programming errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent key file.
class KeyFormatError : public Error {
 public:
  using Error::Error;
};

/// Ciphertext byte stream violates the token grammar (truncation,
/// unescaped reserved token, bad header, nonzero padding).
class FramingError : public Error {
 public:
  using Error::Error;
};

/// A decoded unit cannot correspond to any honest encryption
/// (beta state at the replayed position, occurrence index never reached).
class CorruptCiphertextError : public Error {
 public:
  using Error::Error;
};

/// Masked-variant decryption lost synchronization: the bounded scan found
/// no state matching the transmitted token.
class DesyncError : public Error {
 public:
  using Error::Error;
};

}  // namespace baptista
