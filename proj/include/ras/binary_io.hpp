// Copyright 2026 The RAS Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAS_BINARY_IO_HPP_
#define RAS_BINARY_IO_HPP_

// Little-endian primitives shared by the feature-file and checkpoint codecs.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ras/error.hpp"

namespace ras::io {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats assume a little-endian host");

template <typename T>
void WritePod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& is, const char* what) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw FormatError(std::string("truncated while reading ") + what);
  }
  return v;
}

inline void WriteString(std::ostream& os, const std::string& s) {
  WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string ReadString(std::istream& is, const char* what,
                              std::uint32_t max_len = 1u << 20) {
  const auto n = ReadPod<std::uint32_t>(is, what);
  if (n > max_len) throw FormatError(std::string("implausible length for ") + what);
  std::string s(n, '\0');
  if (n && !is.read(s.data(), n)) {
    throw FormatError(std::string("truncated while reading ") + what);
  }
  return s;
}

template <typename T>
void WriteArray(std::ostream& os, const T* data, std::size_t n) {
  os.write(reinterpret_cast<const char*>(data),
           static_cast<std::streamsize>(n * sizeof(T)));
}

template <typename T>
void ReadArray(std::istream& is, T* data, std::size_t n, const char* what) {
  if (n && !is.read(reinterpret_cast<char*>(data),
                    static_cast<std::streamsize>(n * sizeof(T)))) {
    throw FormatError(std::string("truncated payload in ") + what);
  }
}

inline void ExpectMagic(std::istream& is, const char (&magic)[5]) {
  char got[4] = {};
  if (!is.read(got, 4) || std::memcmp(got, magic, 4) != 0) {
    throw FormatError(std::string("bad magic, expected ") + magic);
  }
}

// Succeeds only if the stream has no bytes left.
inline void ExpectEnd(std::istream& is, const char* what) {
  if (is.peek() != std::char_traits<char>::eof()) {
    throw FormatError(std::string("trailing bytes after ") + what);
  }
}

}  // namespace ras::io

#endif  // RAS_BINARY_IO_HPP_
